#pragma once

/// Periodic wire-network descriptions: quotient graph, exact edge vectors,
/// translation basis, and spanning-tree data, plus the built-in primitive (P),
/// diamond (D), and gyroid (G) networks and a JSON interchange format.
///
/// Conventions: vertices are 1-based labels; edge vectors point from tail to
/// head in units of the cubic lattice constant; rationals serialize as "p/q"
/// strings.

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rational.hpp"

namespace nct {

struct LatticeEdge {
  int tail = 0;
  int head = 0;
  Vec3Q vector{};
};

struct LatticeSpec {
  std::string name;
  int vertexCount = 0;
  std::vector<LatticeEdge> edges;
  std::array<Vec3Q, 3> translationBasis{};
  int treeRoot = 1;
  std::vector<int> treeEdges;  // indices into `edges`, |treeEdges| == vertexCount-1
};

namespace detail {
inline Rational q(long long n, long long d) { return Rational(n, d); }
}  // namespace detail

/// Primitive cubic network: one vertex, three loop edges along the coordinate
/// axes.
inline LatticeSpec lattice_P() {
  using detail::q;
  LatticeSpec s;
  s.name = "P";
  s.vertexCount = 1;
  s.edges = {
      {1, 1, {q(1, 1), q(0, 1), q(0, 1)}},
      {1, 1, {q(0, 1), q(1, 1), q(0, 1)}},
      {1, 1, {q(0, 1), q(0, 1), q(1, 1)}},
  };
  s.translationBasis = {Vec3Q{q(1, 1), q(0, 1), q(0, 1)}, Vec3Q{q(0, 1), q(1, 1), q(0, 1)},
                        Vec3Q{q(0, 1), q(0, 1), q(1, 1)}};
  s.treeRoot = 1;
  s.treeEdges = {};
  return s;
}

/// Diamond network: two vertices joined by the four quarter-diagonal bonds;
/// the translation lattice is face-centered cubic.
inline LatticeSpec lattice_D() {
  using detail::q;
  LatticeSpec s;
  s.name = "D";
  s.vertexCount = 2;
  s.edges = {
      {1, 2, {q(1, 4), q(1, 4), q(1, 4)}},
      {1, 2, {q(-1, 4), q(-1, 4), q(1, 4)}},
      {1, 2, {q(-1, 4), q(1, 4), q(-1, 4)}},
      {1, 2, {q(1, 4), q(-1, 4), q(-1, 4)}},
  };
  s.translationBasis = {Vec3Q{q(-1, 2), q(-1, 2), q(0, 1)}, Vec3Q{q(-1, 2), q(0, 1), q(-1, 2)},
                        Vec3Q{q(0, 1), q(-1, 2), q(-1, 2)}};
  s.treeRoot = 1;
  s.treeEdges = {0};
  return s;
}

/// Gyroid (srs) network: four degree-3 vertices, six edges; the translation
/// lattice is body-centered cubic.
inline LatticeSpec lattice_G() {
  using detail::q;
  LatticeSpec s;
  s.name = "G";
  s.vertexCount = 4;
  s.edges = {
      {1, 2, {q(-1, 4), q(1, 4), q(0, 1)}},   // e1
      {1, 3, {q(0, 1), q(-1, 4), q(1, 4)}},   // e2
      {1, 4, {q(1, 4), q(0, 1), q(-1, 4)}},   // e3
      {4, 3, {q(1, 4), q(1, 4), q(0, 1)}},    // e4
      {4, 2, {q(0, 1), q(-1, 4), q(-1, 4)}},  // e5
      {2, 3, {q(-1, 4), q(0, 1), q(-1, 4)}},  // e6
  };
  s.translationBasis = {Vec3Q{q(1, 2), q(-1, 2), q(1, 2)}, Vec3Q{q(-1, 2), q(1, 2), q(1, 2)},
                        Vec3Q{q(1, 2), q(1, 2), q(-1, 2)}};
  s.treeRoot = 1;
  s.treeEdges = {0, 1, 2};
  return s;
}

inline LatticeSpec builtin_lattice(const std::string& name) {
  if (name == "P") return lattice_P();
  if (name == "D") return lattice_D();
  if (name == "G") return lattice_G();
  throw config_error("unknown builtin lattice '" + name + "' (expected P, D, or G)");
}

/// Solve basis * x = v exactly; used to test lattice membership.
inline bool in_translation_lattice(const std::array<Vec3Q, 3>& basis, const Vec3Q& v) {
  // Cramer's rule with exact rationals.
  const Vec3Q& a = basis[0];
  const Vec3Q& b = basis[1];
  const Vec3Q& c = basis[2];
  const Rational det = dot(a, cross(b, c));
  if (det.is_zero()) return false;
  const Rational x = dot(v, cross(b, c)) / det;
  const Rational y = dot(a, cross(v, c)) / det;
  const Rational z = dot(a, cross(b, v)) / det;
  return x.is_integer() && y.is_integer() && z.is_integer();
}

/// Structural validation; throws config_error with a description on failure.
inline void validate_lattice(const LatticeSpec& s) {
  if (s.vertexCount < 1) throw config_error("lattice needs at least one vertex");
  for (const auto& e : s.edges) {
    if (e.tail < 1 || e.tail > s.vertexCount || e.head < 1 || e.head > s.vertexCount)
      throw config_error("edge endpoint out of range in lattice '" + s.name + "'");
  }
  const Rational det =
      dot(s.translationBasis[0], cross(s.translationBasis[1], s.translationBasis[2]));
  if (det.is_zero()) throw config_error("translation basis is degenerate");
  if (static_cast<int>(s.treeEdges.size()) != s.vertexCount - 1)
    throw config_error("spanning tree must have vertexCount-1 edges");
  if (s.treeRoot < 1 || s.treeRoot > s.vertexCount) throw config_error("tree root out of range");
  // The tree must reach every vertex.
  std::vector<int> reached;
  reached.push_back(s.treeRoot);
  std::set<int> seen{s.treeRoot};
  bool grew = true;
  while (grew) {
    grew = false;
    for (int idx : s.treeEdges) {
      if (idx < 0 || idx >= static_cast<int>(s.edges.size()))
        throw config_error("tree edge index out of range");
      const auto& e = s.edges[idx];
      if (seen.count(e.tail) && !seen.count(e.head)) {
        seen.insert(e.head);
        grew = true;
      } else if (seen.count(e.head) && !seen.count(e.tail)) {
        seen.insert(e.tail);
        grew = true;
      }
    }
  }
  if (static_cast<int>(seen.size()) != s.vertexCount)
    throw config_error("spanning tree does not reach every vertex");
  const int betti = static_cast<int>(s.edges.size()) - (s.vertexCount - 1);
  if (betti != 3)
    throw config_error("network must have exactly three independent cycles, got " +
                       std::to_string(betti));
}

/// Position offset t_v of each vertex relative to the root, accumulated along
/// the spanning tree.  Index 0 of the result corresponds to vertex label 1.
inline std::vector<Vec3Q> tree_translations(const LatticeSpec& s) {
  std::vector<Vec3Q> t(s.vertexCount, Vec3Q{Rational(0), Rational(0), Rational(0)});
  std::vector<bool> have(s.vertexCount, false);
  have[s.treeRoot - 1] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int idx : s.treeEdges) {
      const auto& e = s.edges[idx];
      if (have[e.tail - 1] && !have[e.head - 1]) {
        t[e.head - 1] = t[e.tail - 1] + e.vector;
        have[e.head - 1] = true;
        grew = true;
      } else if (have[e.head - 1] && !have[e.tail - 1]) {
        t[e.tail - 1] = t[e.head - 1] - e.vector;
        have[e.tail - 1] = true;
        grew = true;
      }
    }
  }
  return t;
}

/// Loop translation vector of each non-tree edge: the total displacement of
/// the cycle (tree path to tail) -> edge -> (tree path from head back to the
/// root).  These three vectors generate the translation lattice action on the
/// quotient graph.
struct LoopGenerator {
  int edgeIndex = 0;
  Vec3Q translation{};
};

inline std::vector<LoopGenerator> loop_generators(const LatticeSpec& s) {
  const auto t = tree_translations(s);
  std::set<int> tree(s.treeEdges.begin(), s.treeEdges.end());
  std::vector<LoopGenerator> out;
  for (int i = 0; i < static_cast<int>(s.edges.size()); ++i) {
    if (tree.count(i)) continue;
    const auto& e = s.edges[i];
    LoopGenerator g;
    g.edgeIndex = i;
    g.translation = t[e.tail - 1] + e.vector - t[e.head - 1];
    out.push_back(g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON interchange
// ---------------------------------------------------------------------------

inline std::string rational_str(const Rational& r) { return r.str(); }

inline nlohmann::json vec_to_json(const Vec3Q& v) {
  return nlohmann::json::array({v[0].str(), v[1].str(), v[2].str()});
}

inline Vec3Q vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw config_error("vector must be an array of 3 rationals");
  Vec3Q v;
  for (int i = 0; i < 3; ++i) {
    if (j[i].is_number_integer()) {
      v[i] = Rational(j[i].get<long long>());
    } else if (j[i].is_string()) {
      v[i] = Rational::parse(j[i].get<std::string>());
    } else {
      throw config_error("vector entries must be integers or 'p/q' strings");
    }
  }
  return v;
}

inline nlohmann::json lattice_to_json(const LatticeSpec& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["vertexCount"] = s.vertexCount;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : s.edges) {
    j["edges"].push_back({{"tail", e.tail}, {"head", e.head}, {"vector", vec_to_json(e.vector)}});
  }
  j["translationBasis"] = nlohmann::json::array({vec_to_json(s.translationBasis[0]),
                                                 vec_to_json(s.translationBasis[1]),
                                                 vec_to_json(s.translationBasis[2])});
  j["spanningTree"] = {{"root", s.treeRoot}, {"edges", s.treeEdges}};
  return j;
}

inline LatticeSpec lattice_from_json(const nlohmann::json& j) {
  LatticeSpec s;
  try {
    s.name = j.at("name").get<std::string>();
    s.vertexCount = j.at("vertexCount").get<int>();
    for (const auto& je : j.at("edges")) {
      LatticeEdge e;
      e.tail = je.at("tail").get<int>();
      e.head = je.at("head").get<int>();
      e.vector = vec_from_json(je.at("vector"));
      s.edges.push_back(e);
    }
    const auto& jb = j.at("translationBasis");
    if (!jb.is_array() || jb.size() != 3) throw config_error("translationBasis must have 3 rows");
    for (int i = 0; i < 3; ++i) s.translationBasis[i] = vec_from_json(jb[i]);
    const auto& jt = j.at("spanningTree");
    s.treeRoot = jt.at("root").get<int>();
    s.treeEdges = jt.at("edges").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& ex) {
    throw config_error(std::string("malformed lattice spec: ") + ex.what());
  }
  validate_lattice(s);
  return s;
}

inline LatticeSpec load_lattice_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open lattice spec '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw config_error(std::string("invalid JSON in '") + path + "': " + ex.what());
  }
  return lattice_from_json(j);
}

}  // namespace nct
