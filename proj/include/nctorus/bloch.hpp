#pragma once

/// Bloch theory of the commutative (zero-field) networks: character
/// evaluation of the Harper operator, spectra, degeneracy scans with local
/// refinement, and the exact distance to the diamond branching locus.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "models.hpp"
#include "util.hpp"

namespace nct {

/// A character of the (commutative) generator torus: three angles in radians,
/// generator i acting as e^{i angle[i]}.
using Character = std::array<double, 3>;

struct SpectrumPoint {
  Character angle{};
  std::vector<double> eigenvalues;  // ascending
  double minGap = std::numeric_limits<double>::infinity();
};

/// Evaluate the symbolic Harper operator at a character (phase symbols at 1,
/// i.e. the commutative specialization).
inline Eigen::MatrixXcd bloch_matrix(const HarperModel& m, const Character& angle) {
  const std::array<std::complex<double>, 3> z = {unit_phase_radians(angle[0]),
                                                 unit_phase_radians(angle[1]),
                                                 unit_phase_radians(angle[2])};
  const std::array<std::complex<double>, 3> symbols = {1.0, 1.0, 1.0};
  const int k = m.H.k;
  Eigen::MatrixXcd out(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(i, j) = eval_scalar(m.H.at(i, j), z, symbols);
  return out;
}

/// Character matrix of a network given only its graph data: spanning-tree
/// edges contribute 1, the j-th independent cycle contributes z_j.
inline Eigen::MatrixXcd bloch_matrix_graph(const LatticeSpec& spec, const Character& angle) {
  std::set<int> tree(spec.treeEdges.begin(), spec.treeEdges.end());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(spec.vertexCount, spec.vertexCount);
  int loop = 0;
  for (int idx = 0; idx < static_cast<int>(spec.edges.size()); ++idx) {
    const auto& e = spec.edges[idx];
    std::complex<double> z{1.0, 0.0};
    if (!tree.count(idx)) z = unit_phase_radians(angle[loop++]);
    out(e.head - 1, e.tail - 1) += z;
    out(e.tail - 1, e.head - 1) += std::conj(z);
  }
  return out;
}

inline SpectrumPoint spectrum_from_matrix(const Eigen::MatrixXcd& h, const Character& angle) {
  SpectrumPoint p;
  p.angle = angle;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numeric_error("eigensolver failed to converge");
  p.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + h.rows());
  if (p.eigenvalues.size() >= 2) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < p.eigenvalues.size(); ++i)
      g = std::min(g, p.eigenvalues[i + 1] - p.eigenvalues[i]);
    p.minGap = g;
  }
  return p;
}

inline SpectrumPoint spectrum_at(const HarperModel& m, const Character& angle) {
  return spectrum_from_matrix(bloch_matrix(m, angle), angle);
}

/// Closed-form spectrum of the diamond network at a character:
/// +- |1 + z1 + z2 + z3|.
inline std::array<double, 2> d_closed_form_levels(const Character& angle) {
  const std::complex<double> s = 1.0 + unit_phase_radians(angle[0]) +
                                 unit_phase_radians(angle[1]) + unit_phase_radians(angle[2]);
  const double r = std::abs(s);
  return {-r, r};
}

/// Wrap an angle difference into [-pi, pi).
inline double wrap_pi(double x) {
  x = std::fmod(x + M_PI, 2.0 * M_PI);
  if (x < 0) x += 2.0 * M_PI;
  return x - M_PI;
}

/// Exact flat-torus distance from a character to the diamond branching locus
/// (the three circles where the two bands touch):
///   { phi_i = pi, phi_j = phi_k + pi }   for (i,j,k) in cyclic order.
inline double d_locus_distance(const Character& a) {
  auto circle = [](double x, double y, double z) {
    // distance to { x = pi, y - z = pi } optimizing over the free parameter
    const double dx = wrap_pi(x - M_PI);
    const double dyz = wrap_pi(y - z - M_PI);
    return std::sqrt(dx * dx + 0.5 * dyz * dyz);
  };
  const double d1 = circle(a[0], a[1], a[2]);
  const double d2 = circle(a[1], a[2], a[0]);
  const double d3 = circle(a[2], a[0], a[1]);
  return std::min({d1, d2, d3});
}

// ---------------------------------------------------------------------------
// Degeneracy scans
// ---------------------------------------------------------------------------

struct DegeneracyCluster {
  Character seed{};            // best grid point of the cluster
  double seedGap = 0.0;
  Character refined{};         // after local refinement
  double refinedGap = 0.0;
  bool converged = false;
  std::vector<int> multiplicities;  // eigenvalue group sizes at the refined point
  int gridPointCount = 0;
};

struct LocusReport {
  int gridN = 0;
  double tol = 0.0;
  std::vector<SpectrumPoint> flagged;
  std::vector<DegeneracyCluster> clusters;
};

/// Quadratic objective for refinement: the squared minimal gap is smooth
/// through a conical band touching, so a few damped Newton steps with central
/// differences converge to machine precision.
inline double refine_objective(const HarperModel& m, const Character& a) {
  const double g = spectrum_at(m, a).minGap;
  return g * g;
}

inline Character refine_degeneracy(const HarperModel& m, Character a, bool* converged,
                                   int maxIter = 60) {
  const double h = 1e-5;
  double f = refine_objective(m, a);
  for (int iter = 0; iter < maxIter; ++iter) {
    if (f < 1e-24) break;
    Eigen::Vector3d grad;
    Eigen::Matrix3d hess;
    const double f0 = f;
    for (int i = 0; i < 3; ++i) {
      Character ap = a, am = a;
      ap[i] += h;
      am[i] -= h;
      const double fp = refine_objective(m, ap);
      const double fm = refine_objective(m, am);
      grad(i) = (fp - fm) / (2 * h);
      hess(i, i) = (fp - 2 * f0 + fm) / (h * h);
      for (int j = i + 1; j < 3; ++j) {
        Character app = a, apm = a, amp = a, amm = a;
        app[i] += h; app[j] += h;
        apm[i] += h; apm[j] -= h;
        amp[i] -= h; amp[j] += h;
        amm[i] -= h; amm[j] -= h;
        const double mixed = (refine_objective(m, app) - refine_objective(m, apm) -
                              refine_objective(m, amp) + refine_objective(m, amm)) /
                             (4 * h * h);
        hess(i, j) = mixed;
        hess(j, i) = mixed;
      }
    }
    Eigen::Vector3d step;
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(hess);
    if (lu.isInvertible()) {
      step = -lu.solve(grad);
    } else {
      step = -grad;  // gradient fallback
    }
    const double maxStep = 0.3;
    if (step.norm() > maxStep) step *= maxStep / step.norm();
    // Backtracking line search keeps the iteration monotone.
    double scale = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls) {
      Character trial = a;
      for (int i = 0; i < 3; ++i) trial[i] += scale * step(i);
      const double ft = refine_objective(m, trial);
      if (ft < f) {
        a = trial;
        f = ft;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }
  if (converged) *converged = f < 1e-20;
  return a;
}

/// Eigenvalue multiplicity profile with grouping tolerance `tol`.
inline std::vector<int> multiplicity_profile(const std::vector<double>& ev, double tol = 1e-6) {
  std::vector<int> groups;
  std::size_t i = 0;
  while (i < ev.size()) {
    std::size_t j = i + 1;
    while (j < ev.size() && ev[j] - ev[j - 1] < tol) ++j;
    groups.push_back(static_cast<int>(j - i));
    i = j;
  }
  return groups;
}

/// Scan the character torus on an N^3 grid, flag near-degenerate points,
/// cluster them, and refine one representative per cluster.
inline LocusReport degeneracy_scan(const HarperModel& m, int gridN, double tol,
                                   bool refine = true) {
  if (gridN < 8) throw config_error("degeneracy scan needs gridN >= 8");
  LocusReport rep;
  rep.gridN = gridN;
  rep.tol = tol;
  const double spacing = 2.0 * M_PI / gridN;

  const std::size_t total = static_cast<std::size_t>(gridN) * gridN * gridN;
  std::vector<float> gaps(total);
  parallel_for(total, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(gridN) * gridN));
    const int j = static_cast<int>((idx / gridN) % gridN);
    const int l = static_cast<int>(idx % gridN);
    const Character a = {i * spacing, j * spacing, l * spacing};
    gaps[idx] = static_cast<float>(spectrum_at(m, a).minGap);
  });

  std::vector<std::size_t> flaggedIdx;
  for (std::size_t idx = 0; idx < total; ++idx)
    if (gaps[idx] < tol) flaggedIdx.push_back(idx);

  rep.flagged.reserve(flaggedIdx.size());
  for (std::size_t idx : flaggedIdx) {
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(gridN) * gridN));
    const int j = static_cast<int>((idx / gridN) % gridN);
    const int l = static_cast<int>(idx % gridN);
    rep.flagged.push_back(spectrum_at(m, {i * spacing, j * spacing, l * spacing}));
  }

  // Cluster flagged points on the torus with merge radius 1.5 spacings.
  const double mergeRadius = 1.5 * spacing;
  std::vector<int> clusterOf(rep.flagged.size(), -1);
  auto torusDist = [](const Character& x, const Character& y) {
    const double d0 = wrap_pi(x[0] - y[0]);
    const double d1 = wrap_pi(x[1] - y[1]);
    const double d2 = wrap_pi(x[2] - y[2]);
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
  };
  int nClusters = 0;
  for (std::size_t i = 0; i < rep.flagged.size(); ++i) {
    if (clusterOf[i] >= 0) continue;
    // BFS over near neighbours.
    std::vector<std::size_t> queue{i};
    clusterOf[i] = nClusters;
    while (!queue.empty()) {
      const std::size_t cur = queue.back();
      queue.pop_back();
      for (std::size_t j = 0; j < rep.flagged.size(); ++j) {
        if (clusterOf[j] >= 0) continue;
        if (torusDist(rep.flagged[cur].angle, rep.flagged[j].angle) <= mergeRadius) {
          clusterOf[j] = nClusters;
          queue.push_back(j);
        }
      }
    }
    ++nClusters;
  }

  rep.clusters.resize(nClusters);
  for (int c = 0; c < nClusters; ++c) rep.clusters[c].seedGap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.flagged.size(); ++i) {
    DegeneracyCluster& cl = rep.clusters[clusterOf[i]];
    ++cl.gridPointCount;
    if (rep.flagged[i].minGap < cl.seedGap) {
      cl.seedGap = rep.flagged[i].minGap;
      cl.seed = rep.flagged[i].angle;
    }
  }

  if (refine) {
    for (auto& cl : rep.clusters) {
      bool ok = false;
      cl.refined = refine_degeneracy(m, cl.seed, &ok);
      const SpectrumPoint sp = spectrum_at(m, cl.refined);
      cl.refinedGap = sp.minGap;
      cl.converged = ok;
      cl.multiplicities = multiplicity_profile(sp.eigenvalues);
    }
  }
  return rep;
}

}  // namespace nct
