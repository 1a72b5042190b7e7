#pragma once

/// Finite-dimensional clock-and-shift representations of rational
/// noncommutative 3-tori with unitary character twists, matrix realizations
/// of the Harper operators, and Hofstadter-style flux sweeps.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "bloch.hpp"
#include "models.hpp"

namespace nct {

// ---------------------------------------------------------------------------
// Rational skew data and clock/shift building blocks
// ---------------------------------------------------------------------------

/// Skew data of a rational noncommutative 3-torus: unitaries u1, u2, u3 with
/// u_i u_j = e^{2 pi i p_ij / N} u_j u_i for i < j.
struct RationalSkew {
  int N = 1;
  int p12 = 0;
  int p13 = 0;
  int p23 = 0;
};

/// Common-denominator form of three exact commutation angles (turns).
inline RationalSkew skew_from_angles(const std::array<Rational, 3>& t) {
  const std::array<Rational, 3> m = {t[0].mod1(), t[1].mod1(), t[2].mod1()};
  long long N = 1;
  for (const auto& r : m) N = std::lcm(N, r.den);
  if (N > 1000000) throw config_error("commutation angles need a common denominator <= 1e6");
  RationalSkew s;
  s.N = static_cast<int>(N);
  s.p12 = static_cast<int>(m[0].num * (N / m[0].den));
  s.p13 = static_cast<int>(m[1].num * (N / m[1].den));
  s.p23 = static_cast<int>(m[2].num * (N / m[2].den));
  return s;
}

/// Clock matrix power C^p with C = diag(1, w, ..., w^{N-1}), w = e^{2 pi i/N}.
inline Eigen::MatrixXcd clock_matrix(int N, long long p = 1) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(N, N);
  for (int j = 0; j < N; ++j) c(j, j) = unit_phase(Rational(p * j, N).mod1());
  return c;
}

/// Shift matrix with S e_j = e_{j-1 mod N}; satisfies S C = w C S.
inline Eigen::MatrixXcd shift_matrix(int N) {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(N, N);
  for (int j = 0; j < N; ++j) s((j + N - 1) % N, j) = 1.0;
  return s;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

// ---------------------------------------------------------------------------
// Torus representations
// ---------------------------------------------------------------------------

/// Unimodular twist characters multiplying the three generators.
using Twist = std::array<std::complex<double>, 3>;

inline Twist trivial_twist() { return {1.0, 1.0, 1.0}; }

inline Twist twist_from_turns(const std::array<double, 3>& t) {
  return {unit_phase_radians(2 * M_PI * t[0]), unit_phase_radians(2 * M_PI * t[1]),
          unit_phase_radians(2 * M_PI * t[2])};
}

enum class RepKind { General, AxisAligned };

struct TorusRep {
  RationalSkew skew;
  RepKind kind = RepKind::General;
  int axis = 0;  // 12, 13 or 23 when AxisAligned
  int dim = 1;
  std::array<Eigen::MatrixXcd, 3> gen;
};

/// Largest representation a construction routine will materialize.
inline constexpr long long kRepDimLimit = 8192;

/// Worst residual of the commutation relations u_i u_j = phase * u_j u_i.
inline double commutation_residual(const std::array<Eigen::MatrixXcd, 3>& g,
                                   const std::array<Rational, 3>& angles) {
  double worst = 0.0;
  const int pair[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int r = 0; r < 3; ++r) {
    const Eigen::MatrixXcd lhs = g[pair[r][0]] * g[pair[r][1]];
    const Eigen::MatrixXcd rhs = unit_phase(angles[r].mod1()) * g[pair[r][1]] * g[pair[r][0]];
    const double scale = std::max(1.0, lhs.norm());
    worst = std::max(worst, (lhs - rhs).norm() / scale);
  }
  return worst;
}

inline double unitarity_residual(const std::array<Eigen::MatrixXcd, 3>& g) {
  double worst = 0.0;
  for (const auto& u : g) {
    const Eigen::MatrixXcd i = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    worst = std::max(worst, (u * u.adjoint() - i).norm() / std::sqrt(double(u.rows())));
  }
  return worst;
}

namespace detail {

inline void check_rep(TorusRep& rep) {
  const std::array<Rational, 3> angles = {Rational(rep.skew.p12, rep.skew.N),
                                          Rational(rep.skew.p13, rep.skew.N),
                                          Rational(rep.skew.p23, rep.skew.N)};
  if (commutation_residual(rep.gen, angles) > 1e-12)
    throw numeric_error("torus representation violates its commutation relations");
  if (unitarity_residual(rep.gen) > 1e-12)
    throw numeric_error("torus representation generators are not unitary");
}

}  // namespace detail

/// Representation on C^{N^3}: generator i acts by a twisted Kronecker word in
/// clock and (adjoint) shift factors, one tensor slot per generator pair.
inline TorusRep general_rep(const RationalSkew& s, const Twist& twist) {
  const int N = s.N;
  const long long d = static_cast<long long>(N) * N * N;
  if (d > kRepDimLimit)
    throw config_error("general representation dimension N^3 = " + std::to_string(d) +
                       " exceeds limit " + std::to_string(kRepDimLimit));
  TorusRep rep;
  rep.skew = s;
  rep.kind = RepKind::General;
  rep.dim = static_cast<int>(d);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(N, N);
  const Eigen::MatrixXcd sh = shift_matrix(N).adjoint();
  rep.gen[0] = twist[0] * kron(kron(clock_matrix(N, s.p12), clock_matrix(N, s.p13)), id);
  rep.gen[1] = twist[1] * kron(kron(sh, id), clock_matrix(N, s.p23));
  rep.gen[2] = twist[2] * kron(kron(id, sh), sh);
  detail::check_rep(rep);
  return rep;
}

/// Representation on C^N for skews supported on a single generator pair:
/// the pair acts by clock and shift, the remaining generator by a scalar.
inline TorusRep axis_rep(const RationalSkew& s, int axis, const Twist& twist) {
  const int N = s.N;
  if (N > kRepDimLimit)
    throw config_error("axis representation dimension exceeds limit");
  TorusRep rep;
  rep.skew = s;
  rep.kind = RepKind::AxisAligned;
  rep.axis = axis;
  rep.dim = N;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(N, N);
  const Eigen::MatrixXcd sh = shift_matrix(N).adjoint();
  auto offAxis = [&](int p, const char* which) {
    if (p % N != 0)
      throw config_error(std::string("axis-aligned representation requires zero ") + which +
                         " commutation angle");
  };
  if (axis == 12) {
    offAxis(s.p13, "13");
    offAxis(s.p23, "23");
    rep.gen[0] = twist[0] * clock_matrix(N, s.p12);
    rep.gen[1] = twist[1] * sh;
    rep.gen[2] = twist[2] * id;
  } else if (axis == 13) {
    offAxis(s.p12, "12");
    offAxis(s.p23, "23");
    rep.gen[0] = twist[0] * clock_matrix(N, s.p13);
    rep.gen[1] = twist[1] * id;
    rep.gen[2] = twist[2] * sh;
  } else if (axis == 23) {
    offAxis(s.p12, "12");
    offAxis(s.p13, "13");
    rep.gen[0] = twist[0] * id;
    rep.gen[1] = twist[1] * clock_matrix(N, s.p23);
    rep.gen[2] = twist[2] * sh;
  } else {
    throw config_error("axis must be one of 12, 13, 23");
  }
  detail::check_rep(rep);
  return rep;
}

struct RepChoice {
  RepKind kind = RepKind::General;
  int axis = 0;
};

/// Axis-aligned when the skew is supported on at most one generator pair.
inline RepChoice choose_rep(const RationalSkew& s) {
  const bool a = s.p12 % s.N != 0;
  const bool b = s.p13 % s.N != 0;
  const bool c = s.p23 % s.N != 0;
  const int nonzero = int(a) + int(b) + int(c);
  if (nonzero > 1) return {RepKind::General, 0};
  if (b) return {RepKind::AxisAligned, 13};
  if (c) return {RepKind::AxisAligned, 23};
  return {RepKind::AxisAligned, 12};
}

inline TorusRep build_rep(const RationalSkew& s, const Twist& twist, RepKind kind, int axis = 0) {
  if (kind == RepKind::General) return general_rep(s, twist);
  return axis_rep(s, axis == 0 ? choose_rep(s).axis : axis, twist);
}

// ---------------------------------------------------------------------------
// Matrix realization of symbolic elements and the Harper operator
// ---------------------------------------------------------------------------

inline Eigen::MatrixXcd unitary_power(const Eigen::MatrixXcd& u, int e) {
  const Eigen::Index n = u.rows();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd base = e >= 0 ? u : Eigen::MatrixXcd(u.adjoint());
  for (int i = 0; i < std::abs(e); ++i) acc = acc * base;
  return acc;
}

inline std::complex<double> monomial_phase(const MonomialExp& e,
                                           const std::array<Rational, 3>& t) {
  Rational acc(0);
  for (int i = 0; i < 3; ++i) acc = acc + Rational(e[i]) * t[i];
  return unit_phase(acc.mod1());
}

/// Realize a normal-ordered torus element as a dim x dim matrix; phase-symbol
/// coefficients are evaluated exactly at the given symbol angles (turns).
inline Eigen::MatrixXcd element_matrix(const TorusElement& x, const TorusRep& rep,
                                       const std::array<Rational, 3>& symbolAngles) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
  for (const auto& [w, c] : x.terms) {
    const std::complex<double> coeff = c.eval_turns(symbolAngles);
    if (std::abs(coeff) == 0.0) continue;
    acc += coeff * (unitary_power(rep.gen[0], w[0]) * unitary_power(rep.gen[1], w[1]) *
                    unitary_power(rep.gen[2], w[2]));
  }
  return acc;
}

/// A Harper operator realized in a concrete representation, together with the
/// embedded generator images used by closure scans.
struct HarperRep {
  HarperModel model;
  std::array<Rational, 3> symbolAngles{};
  std::array<Rational, 3> commAngles{};
  Twist twist = trivial_twist();
  TorusRep rep;
  int k = 1;
  int d = 1;
  std::array<Eigen::MatrixXcd, 3> rhoGen;  // rho(generator_i), (k d) x (k d)
  Eigen::MatrixXcd H;                      // (k d) x (k d)
};

/// Block-diagonal embedding of a single generator image: vertex v carries the
/// model's vertex phase evaluated at the symbol angles.
inline Eigen::MatrixXcd rho_generator_matrix(const HarperModel& model, const TorusRep& rep,
                                             const std::array<Rational, 3>& symbolAngles,
                                             int g) {
  const int k = model.rho.k;
  const int d = rep.dim;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(k * d, k * d);
  for (int v = 0; v < k; ++v)
    out.block(v * d, v * d, d, d) =
        monomial_phase(model.rho.vertexPhase[v][g], symbolAngles) * rep.gen[g];
  return out;
}

/// Realize a symbolic k x k torus matrix as a (k d) x (k d) numeric matrix.
inline Eigen::MatrixXcd realize_matrix(const TorusMatrix& m, const TorusRep& rep,
                                       const std::array<Rational, 3>& symbolAngles) {
  const int k = m.k;
  const int d = rep.dim;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(k * d, k * d);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      out.block(i * d, j * d, d, d) = element_matrix(m.at(i, j), rep, symbolAngles);
  return out;
}

/// Build the Harper operator of a model at exact symbol angles in a concrete
/// twisted representation.  The representation's commutation phases are
/// checked against the model's own commutation angles, and the realized
/// operator is checked to be Hermitian.
inline HarperRep harper_rep(const HarperModel& model,
                            const std::array<Rational, 3>& symbolAngles, const Twist& twist,
                            RepKind kind, int axis = 0) {
  HarperRep hr;
  hr.model = model;
  hr.symbolAngles = symbolAngles;
  hr.commAngles = commutation_angles(model, symbolAngles);
  hr.twist = twist;
  const RationalSkew skew = skew_from_angles(hr.commAngles);
  if (static_cast<long long>(model.rho.k) *
          (kind == RepKind::General ? static_cast<long long>(skew.N) * skew.N * skew.N
                                    : skew.N) >
      kRepDimLimit)
    throw config_error("Harper representation dimension exceeds limit " +
                       std::to_string(kRepDimLimit));
  hr.rep = build_rep(skew, twist, kind, axis);
  if (commutation_residual(hr.rep.gen, hr.commAngles) > 1e-10)
    throw numeric_error("representation does not match the model commutation angles");
  hr.k = model.rho.k;
  hr.d = hr.rep.dim;
  for (int g = 0; g < 3; ++g)
    hr.rhoGen[g] = rho_generator_matrix(model, hr.rep, symbolAngles, g);
  hr.H = realize_matrix(model.H, hr.rep, symbolAngles);
  const double hNorm = std::max(1.0, hr.H.norm());
  if ((hr.H - Eigen::MatrixXcd(hr.H.adjoint())).norm() / hNorm > 1e-10)
    throw numeric_error("realized Harper operator is not Hermitian");
  return hr;
}

inline HarperRep harper_rep(const HarperModel& model,
                            const std::array<Rational, 3>& symbolAngles,
                            const Twist& twist = trivial_twist()) {
  const RepChoice choice = choose_rep(skew_from_angles(commutation_angles(model, symbolAngles)));
  return harper_rep(model, symbolAngles, twist, choice.kind, choice.axis);
}

inline std::vector<double> harper_spectrum(const HarperRep& hr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hr.H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numeric_error("eigensolver failed to converge");
  return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + hr.H.rows());
}

// ---------------------------------------------------------------------------
// Flux sweeps (Hofstadter-style butterflies)
// ---------------------------------------------------------------------------

/// All reduced fractions p/q in [0, 1] with q <= maxDen, ascending.
inline std::vector<Rational> farey_fluxes(int maxDen) {
  if (maxDen < 1) throw config_error("flux sweep needs a positive maximal denominator");
  std::vector<Rational> out;
  for (int q = 1; q <= maxDen; ++q)
    for (int p = 0; p <= q; ++p)
      if (std::gcd(p, q) == 1) out.push_back(Rational(p, q));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::array<int, 2> axis_pair(int axis) {
  if (axis == 12) return {0, 1};
  if (axis == 13) return {0, 2};
  if (axis == 23) return {1, 2};
  throw config_error("axis must be one of 12, 13, 23");
}

/// Field normal to the chosen translation pair, scaled so that the flux
/// through the cell face spanned by that pair is exactly the requested rational.
inline FieldB butterfly_field(const LatticeSpec& spec, int axis, const Rational& flux) {
  const auto [i, j] = axis_pair(axis);
  const Vec3Q c = cross(spec.translationBasis[i], spec.translationBasis[j]);
  const Rational n2 = dot(c, c);
  if (n2.is_zero()) throw config_error("degenerate translation pair for flux axis");
  return (flux / n2) * c;
}

/// Exact symbol angles of a builtin model in the field b.
inline std::array<Rational, 3> field_symbol_angles(const std::string& lattice, const FieldB& b) {
  if (lattice == "P") return symbol_angles_P(b);
  if (lattice == "D") return symbol_angles_D(d_params_from_field(b, PhaseConvention::TorusUnits));
  if (lattice == "G") return symbol_angles_G(g_params_from_field(b, PhaseConvention::TorusUnits));
  throw config_error("flux sweeps are available for builtin lattices P, D, G only");
}

struct BandInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ButterflySample {
  int twistIndex = 0;
  std::array<double, 3> twistTurns{};
  std::vector<double> eigenvalues;  // ascending
};

struct ButterflyFlux {
  Rational flux;
  FieldB field{};
  RepKind kind = RepKind::AxisAligned;
  int dim = 0;  // total Harper dimension k*d
  std::vector<ButterflySample> samples;
  std::vector<BandInterval> bands;
};

struct ButterflyResult {
  std::string lattice;
  int axis = 12;
  int maxDen = 8;
  int twistGrid = 8;
  std::vector<ButterflyFlux> fluxes;
};

/// Union of the per-track eigenvalue ranges across the twist samples, with
/// overlapping ranges merged.
inline std::vector<BandInterval> merge_bands(const std::vector<ButterflySample>& samples) {
  if (samples.empty()) return {};
  const std::size_t nTracks = samples.front().eigenvalues.size();
  std::vector<BandInterval> tracks(nTracks);
  for (std::size_t r = 0; r < nTracks; ++r) {
    double lo = samples.front().eigenvalues[r];
    double hi = lo;
    for (const auto& s : samples) {
      lo = std::min(lo, s.eigenvalues[r]);
      hi = std::max(hi, s.eigenvalues[r]);
    }
    tracks[r] = {lo, hi};
  }
  std::vector<BandInterval> merged;
  const double eps = 1e-9;
  for (const auto& t : tracks) {
    if (!merged.empty() && t.lo <= merged.back().hi + eps)
      merged.back().hi = std::max(merged.back().hi, t.hi);
    else
      merged.push_back(t);
  }
  return merged;
}

/// Sweep the spectrum over a list of rational fluxes along one translation
/// pair.  Representations supported on a single generator pair are taken
/// axis-aligned with an M x M twist grid on that pair; anything else takes
/// the general N^3 representation with an M' x M' x M' grid (M' = min(M, 4)
/// keeps the cubic grid affordable).
inline ButterflyResult butterfly_over(const std::string& lattice, int axis,
                                      const std::vector<Rational>& fluxList,
                                      int twistGrid = 8) {
  if (twistGrid < 1) throw config_error("twist grid must be positive");
  const HarperModel model = harper_model(lattice);
  ButterflyResult res;
  res.lattice = lattice;
  res.axis = axis;
  res.maxDen = 0;
  for (const Rational& f : fluxList) res.maxDen = std::max(res.maxDen, static_cast<int>(f.den));
  res.twistGrid = twistGrid;
  for (const Rational& flux : fluxList) {
    ButterflyFlux bf;
    bf.flux = flux;
    bf.field = butterfly_field(model.spec, axis, flux);
    const std::array<Rational, 3> symbolAngles = field_symbol_angles(lattice, bf.field);
    const RationalSkew skew = skew_from_angles(commutation_angles(model, symbolAngles));
    const RepChoice choice = choose_rep(skew);
    bf.kind = choice.kind;

    std::vector<std::array<double, 3>> twists;
    if (choice.kind == RepKind::AxisAligned) {
      const auto [i, j] = axis_pair(choice.axis == 0 ? 12 : choice.axis);
      const int M = twistGrid;
      for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) {
          std::array<double, 3> t = {0.0, 0.0, 0.0};
          t[i] = double(a) / M;
          t[j] = double(b) / M;
          twists.push_back(t);
        }
    } else {
      const int M = std::min(twistGrid, 4);
      for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b)
          for (int c = 0; c < M; ++c)
            twists.push_back({double(a) / M, double(b) / M, double(c) / M});
    }

    bf.samples.resize(twists.size());
    parallel_for(twists.size(), [&](std::size_t idx) {
      const HarperRep hr = harper_rep(model, symbolAngles, twist_from_turns(twists[idx]),
                                      choice.kind, choice.axis);
      ButterflySample s;
      s.twistIndex = static_cast<int>(idx);
      s.twistTurns = twists[idx];
      s.eigenvalues = harper_spectrum(hr);
      bf.samples[idx] = std::move(s);
    });
    bf.dim = bf.samples.empty() ? 0 : static_cast<int>(bf.samples.front().eigenvalues.size());
    bf.bands = merge_bands(bf.samples);
    res.fluxes.push_back(std::move(bf));
  }
  return res;
}

/// Butterfly over the full Farey sequence of denominator <= maxDen.
inline ButterflyResult butterfly(const std::string& lattice, int axis, int maxDen,
                                 int twistGrid = 8) {
  ButterflyResult res = butterfly_over(lattice, axis, farey_fluxes(maxDen), twistGrid);
  res.maxDen = maxDen;
  return res;
}

}  // namespace nct
