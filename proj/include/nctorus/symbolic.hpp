#pragma once

/// Exact operator algebra of a three-generator noncommutative torus.
///
/// Elements are kept in normal-ordered form: finite sums of words
/// X1^a X2^b X3^c with coefficients that are integer Laurent polynomials in
/// the three phase symbols (see phasepoly.hpp).  The pairwise commutation
/// scalars are monomials in the symbols, so products, adjoints, and the
/// spanning-tree embedding are all exact.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasepoly.hpp"
#include "rational.hpp"

namespace nct {

/// Exponent triple (a, b, c) of a normal-ordered word X1^a X2^b X3^c.
using TorusWord = std::array<int, 3>;

/// Commutation data: X_i X_j = swap_ij . X_j X_i for i < j, with each
/// swap_ij a monomial in the three phase symbols.
struct TorusAlgebra {
  std::array<std::string, 3> symbolNames = {"s1", "s2", "s3"};
  std::array<std::string, 3> generatorNames = {"X1", "X2", "X3"};
  MonomialExp swap12{0, 0, 0};
  MonomialExp swap13{0, 0, 0};
  MonomialExp swap23{0, 0, 0};
};

/// Normal-ordered element of the torus algebra.
struct TorusElement {
  std::map<TorusWord, PhasePoly> terms;

  static TorusElement zero() { return {}; }
  static TorusElement one() { return word({0, 0, 0}); }
  static TorusElement word(const TorusWord& w, PhasePoly coeff = PhasePoly::one()) {
    TorusElement e;
    if (!coeff.is_zero()) e.terms[w] = std::move(coeff);
    return e;
  }

  bool is_zero() const { return terms.empty(); }

  void add_term(const TorusWord& w, const PhasePoly& c) {
    if (c.is_zero()) return;
    auto it = terms.find(w);
    if (it == terms.end()) {
      terms[w] = c;
    } else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  TorusElement& operator+=(const TorusElement& o) {
    for (const auto& [w, c] : o.terms) add_term(w, c);
    return *this;
  }
  TorusElement& operator-=(const TorusElement& o) {
    for (const auto& [w, c] : o.terms) {
      PhasePoly neg;
      neg -= c;
      add_term(w, neg);
    }
    return *this;
  }
};

inline TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
inline TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }

inline bool operator==(const TorusElement& a, const TorusElement& b) {
  return a.terms == b.terms;
}
inline bool operator!=(const TorusElement& a, const TorusElement& b) { return !(a == b); }

/// Multiply an element by a scalar polynomial.
inline TorusElement scale(const PhasePoly& s, const TorusElement& x) {
  TorusElement r;
  for (const auto& [w, c] : x.terms) r.add_term(w, s * c);
  return r;
}

/// Commutation phase picked up when X1^{a'} X2^{b'} X3^{c'} is moved to
/// normal order past X1^a X2^b X3^c from the right:
///   (X1^a X2^b X3^c)(X1^a' X2^b' X3^c')
///     = swap12^{-a'b} swap13^{-a'c} swap23^{-b'c} X1^{a+a'} X2^{b+b'} X3^{c+c'}.
inline MonomialExp reorder_exponent(const TorusAlgebra& alg, const TorusWord& w,
                                    const TorusWord& wp) {
  return (-wp[0] * w[1]) * alg.swap12 + (-wp[0] * w[2]) * alg.swap13 +
         (-wp[1] * w[2]) * alg.swap23;
}

/// Exact normal-ordered product.
inline TorusElement normal_product(const TorusAlgebra& alg, const TorusElement& x,
                                   const TorusElement& y) {
  TorusElement r;
  for (const auto& [w, cw] : x.terms) {
    for (const auto& [v, cv] : y.terms) {
      const TorusWord sum = {w[0] + v[0], w[1] + v[1], w[2] + v[2]};
      const PhasePoly phase = PhasePoly::monomial(reorder_exponent(alg, w, v));
      r.add_term(sum, phase * cw * cv);
    }
  }
  return r;
}

/// Exact adjoint:
///   (c . X1^a X2^b X3^c)^* =
///   conj(c) . swap12^{-ab} swap13^{-ac} swap23^{-bc} X1^{-a} X2^{-b} X3^{-c}.
inline TorusElement adjoint(const TorusAlgebra& alg, const TorusElement& x) {
  TorusElement r;
  for (const auto& [w, c] : x.terms) {
    const MonomialExp ph = (-w[0] * w[1]) * alg.swap12 + (-w[0] * w[2]) * alg.swap13 +
                           (-w[1] * w[2]) * alg.swap23;
    const TorusWord neg = {-w[0], -w[1], -w[2]};
    r.add_term(neg, PhasePoly::monomial(ph) * c.conj());
  }
  return r;
}

/// Evaluate an element under a one-dimensional representation (character):
/// generator X_i acts as the unit scalar z_i and the phase symbols take the
/// given values.
inline std::complex<double> eval_scalar(const TorusElement& x,
                                        const std::array<std::complex<double>, 3>& z,
                                        const std::array<std::complex<double>, 3>& symbols) {
  std::complex<double> acc{0.0, 0.0};
  auto upow = [](std::complex<double> base, int p) {
    std::complex<double> r{1.0, 0.0};
    if (p < 0) {
      base = std::conj(base);
      p = -p;
    }
    for (int i = 0; i < p; ++i) r *= base;
    return r;
  };
  for (const auto& [w, c] : x.terms)
    acc += c.eval(symbols) * upow(z[0], w[0]) * upow(z[1], w[1]) * upow(z[2], w[2]);
  return acc;
}

// ---------------------------------------------------------------------------
// Spanning-tree embedding
// ---------------------------------------------------------------------------

/// Diagonal phase twists of the vertex-indexed embedding: at vertex v the
/// generator X_g picks up the monomial vertexPhase[v][g] in the symbols.
struct RhoSpec {
  int k = 1;
  std::vector<std::array<MonomialExp, 3>> vertexPhase;  // size k
};

/// The vertex-v twist automorphism applied to an element.
inline TorusElement vertex_twist(const RhoSpec& rho, int v, const TorusElement& x) {
  TorusElement r;
  for (const auto& [w, c] : x.terms) {
    const MonomialExp ph = w[0] * rho.vertexPhase[v][0] + w[1] * rho.vertexPhase[v][1] +
                           w[2] * rho.vertexPhase[v][2];
    r.add_term(w, PhasePoly::monomial(ph) * c);
  }
  return r;
}

/// k x k matrix with torus-algebra entries.
struct TorusMatrix {
  int k = 0;
  std::vector<TorusElement> e;  // row-major

  TorusMatrix() = default;
  explicit TorusMatrix(int kk) : k(kk), e(kk * kk) {}

  TorusElement& at(int i, int j) { return e[i * k + j]; }
  const TorusElement& at(int i, int j) const { return e[i * k + j]; }

  static TorusMatrix identity(int k) {
    TorusMatrix m(k);
    for (int i = 0; i < k; ++i) m.at(i, i) = TorusElement::one();
    return m;
  }

  /// Matrix unit E_{ij} (1-based indices to match vertex labels).
  static TorusMatrix unit(int k, int i, int j, const TorusElement& x = TorusElement::one()) {
    TorusMatrix m(k);
    m.at(i - 1, j - 1) = x;
    return m;
  }

  bool is_zero() const {
    return std::all_of(e.begin(), e.end(), [](const TorusElement& x) { return x.is_zero(); });
  }

  TorusMatrix& operator+=(const TorusMatrix& o) {
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += o.e[i];
    return *this;
  }
  TorusMatrix& operator-=(const TorusMatrix& o) {
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= o.e[i];
    return *this;
  }
};

inline TorusMatrix operator+(TorusMatrix a, const TorusMatrix& b) { return a += b; }
inline TorusMatrix operator-(TorusMatrix a, const TorusMatrix& b) { return a -= b; }
inline bool operator==(const TorusMatrix& a, const TorusMatrix& b) {
  return a.k == b.k && a.e == b.e;
}

inline TorusMatrix scale(const PhasePoly& s, const TorusMatrix& m) {
  TorusMatrix r(m.k);
  for (std::size_t i = 0; i < m.e.size(); ++i) r.e[i] = scale(s, m.e[i]);
  return r;
}

inline TorusMatrix matmul(const TorusAlgebra& alg, const TorusMatrix& a, const TorusMatrix& b) {
  TorusMatrix r(a.k);
  for (int i = 0; i < a.k; ++i)
    for (int j = 0; j < a.k; ++j) {
      TorusElement acc;
      for (int l = 0; l < a.k; ++l) acc += normal_product(alg, a.at(i, l), b.at(l, j));
      r.at(i, j) = acc;
    }
  return r;
}

inline TorusMatrix adjoint(const TorusAlgebra& alg, const TorusMatrix& m) {
  TorusMatrix r(m.k);
  for (int i = 0; i < m.k; ++i)
    for (int j = 0; j < m.k; ++j) r.at(i, j) = adjoint(alg, m.at(j, i));
  return r;
}

/// Embed an element diagonally with the vertex twists.
inline TorusMatrix rho_embed(const RhoSpec& rho, const TorusElement& x) {
  TorusMatrix m(rho.k);
  for (int v = 0; v < rho.k; ++v) m.at(v, v) = vertex_twist(rho, v, x);
  return m;
}

/// One conjugation-difference step of the reduction chain:
///   preScalar . X - scalar . rho(m) X rho(m)^*.
/// `m` must be a single word with a unit monomial coefficient (so that the
/// embedded conjugator is unitary).
inline TorusMatrix conj_reduce(const TorusAlgebra& alg, const RhoSpec& rho, const TorusMatrix& X,
                               const TorusElement& m, const PhasePoly& scalar,
                               const PhasePoly& preScalar = PhasePoly::one()) {
  if (m.terms.size() != 1 || !m.terms.begin()->second.is_unit_monomial())
    throw config_error("conj_reduce conjugator must be a unit-monomial word");
  const TorusMatrix rm = rho_embed(rho, m);
  const TorusMatrix rmAdj = adjoint(alg, rm);
  const TorusMatrix conj = matmul(alg, matmul(alg, rm, X), rmAdj);
  return scale(preScalar, X) - scale(scalar, conj);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Element as [[word, [[exps, coeff], ...]], ...] with deterministic order.
inline nlohmann::json element_to_json(const TorusElement& x) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [w, c] : x.terms) {
    nlohmann::json poly = nlohmann::json::array();
    for (const auto& [e, coeff] : c.terms)
      poly.push_back(nlohmann::json::array(
          {nlohmann::json::array({e[0], e[1], e[2]}), coeff}));
    out.push_back(nlohmann::json::array({nlohmann::json::array({w[0], w[1], w[2]}), poly}));
  }
  return out;
}

inline std::string element_str(const TorusElement& x, const TorusAlgebra& alg) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : x.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str(alg.symbolNames) << ")";
    for (int i = 0; i < 3; ++i) {
      if (w[i] == 0) continue;
      os << "*" << alg.generatorNames[i];
      if (w[i] != 1) os << "^" << w[i];
    }
  }
  return os.str();
}

}  // namespace nct
