#pragma once

/// Exact structural verifications for the diamond-network model: the
/// conjugation-reduction chain X1..X6 that exhibits a matrix unit inside the
/// operator algebra at generic parameters, and numeric spot checks of the
/// derived phase identities.

#include <random>
#include <string>
#include <vector>

#include "models.hpp"
#include "symbolic.hpp"

namespace nct {

struct VerifyMismatch {
  std::string position;
  nlohmann::json expected;
  nlohmann::json got;
};

struct VerifyReport {
  std::string check;
  bool pass = true;
  std::vector<VerifyMismatch> mismatches;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["check"] = check;
    j["status"] = pass ? "pass" : "fail";
    j["mismatches"] = nlohmann::json::array();
    for (const auto& m : mismatches)
      j["mismatches"].push_back(
          {{"position", m.position}, {"expected", m.expected}, {"got", m.got}});
    return j;
  }
};

namespace detail {

inline PhasePoly mono(int a, int b, int c) { return PhasePoly::monomial({a, b, c}); }

inline PhasePoly one_minus(const PhasePoly& p) { return PhasePoly::one() - p; }

inline void expect_entry(VerifyReport& rep, const TorusMatrix& got, int i, int j,
                         const TorusElement& expected, const std::string& label) {
  if (got.at(i - 1, j - 1) != expected) {
    rep.pass = false;
    rep.mismatches.push_back({label + "[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                              element_to_json(expected), element_to_json(got.at(i - 1, j - 1))});
  }
}

struct DChain {
  HarperModel m;
  TorusElement U, V, W;
  PhasePoly q1, q2, q3, q1c, q2c, q3c;  // swap monomials and conjugates
  TorusMatrix X1, X2, X3;

  DChain() : m(harper_model_D()) {
    U = TorusElement::word({1, 0, 0});
    V = TorusElement::word({0, 1, 0});
    W = TorusElement::word({0, 0, 1});
    q1 = PhasePoly::monomial(m.alg.swap12);
    q2 = PhasePoly::monomial(m.alg.swap13);
    q3 = PhasePoly::monomial(m.alg.swap23);
    q1c = q1.conj();
    q2c = q2.conj();
    q3c = q3.conj();
    // X1 = H - conj(chi1)^2 rho(U) H rho(U)*
    X1 = conj_reduce(m.alg, m.rho, m.H, U, mono(-2, 0, 0));
    // X2 = X1 - conj(chi2)^2 rho(V) X1 rho(V)*
    X2 = conj_reduce(m.alg, m.rho, X1, V, mono(0, -2, 0));
    // X3 = X2 - chi1^2 chi2^2 rho(W) X2 rho(W)*
    X3 = conj_reduce(m.alg, m.rho, X2, W, mono(2, 2, 0));
  }
};

}  // namespace detail

/// Verify the first half of the reduction chain as exact polynomial
/// identities.  The expected entries:
///   X1[2][1] = (1-q1) V + (1-q2) W
///   X1[1][2] = (1-c1)(1 + U*) + (1-c1 conj(q1)) V* + (1-c1 conj(q2)) W*
///   X2[2][1] = (1-q2)(1-q3) W
///   X2[1][2] = (1-c1)(1-c2) + (1-c1)(1-c2 q1) U* + (1-c1 conj(q1))(1-c2) V*
///              + (1-c1 conj(q2))(1-c2 conj(q3)) W*
///   X3[2][1] = 0
///   X3[1][2] = a + b U* + c V* + d W*   (see code for the products)
/// with c1 = conj(chi1)^4, c2 = conj(chi2)^4, c12 = chi1^4 chi2^4.
inline VerifyReport verify_X3() {
  using detail::mono;
  using detail::one_minus;
  detail::DChain ch;
  VerifyReport rep;
  rep.check = "X3";

  const PhasePoly c1 = mono(-4, 0, 0);   // conj(chi1)^4
  const PhasePoly c2 = mono(0, -4, 0);   // conj(chi2)^4
  const PhasePoly c12 = mono(4, 4, 0);   // chi1^4 chi2^4
  const TorusElement one = TorusElement::one();
  const TorusElement Us = adjoint(ch.m.alg, ch.U);
  const TorusElement Vs = adjoint(ch.m.alg, ch.V);
  const TorusElement Ws = adjoint(ch.m.alg, ch.W);

  // X1 expectations.
  {
    TorusElement e21 = scale(one_minus(ch.q1), ch.V) + scale(one_minus(ch.q2), ch.W);
    TorusElement e12 = scale(one_minus(c1), one + Us) +
                       scale(one_minus(c1 * ch.q1c), Vs) + scale(one_minus(c1 * ch.q2c), Ws);
    detail::expect_entry(rep, ch.X1, 2, 1, e21, "X1");
    detail::expect_entry(rep, ch.X1, 1, 2, e12, "X1");
    detail::expect_entry(rep, ch.X1, 1, 1, TorusElement::zero(), "X1");
    detail::expect_entry(rep, ch.X1, 2, 2, TorusElement::zero(), "X1");
  }
  // X2 expectations.
  {
    TorusElement e21 = scale(one_minus(ch.q2) * one_minus(ch.q3), ch.W);
    TorusElement e12 = scale(one_minus(c1) * one_minus(c2), one) +
                       scale(one_minus(c1) * one_minus(c2 * ch.q1), Us) +
                       scale(one_minus(c1 * ch.q1c) * one_minus(c2), Vs) +
                       scale(one_minus(c1 * ch.q2c) * one_minus(c2 * ch.q3c), Ws);
    detail::expect_entry(rep, ch.X2, 2, 1, e21, "X2");
    detail::expect_entry(rep, ch.X2, 1, 2, e12, "X2");
  }
  // X3 expectations.
  {
    const PhasePoly a = one_minus(c12) * one_minus(c2) * one_minus(c1);
    const PhasePoly b = one_minus(c12 * ch.q2) * one_minus(c2 * ch.q1) * one_minus(c1);
    const PhasePoly c = one_minus(c12 * ch.q3) * one_minus(c2) * one_minus(c1 * ch.q1c);
    const PhasePoly d = one_minus(c12) * one_minus(c2 * ch.q3c) * one_minus(c1 * ch.q2c);
    TorusElement e12 = scale(a, one) + scale(b, Us) + scale(c, Vs) + scale(d, Ws);
    detail::expect_entry(rep, ch.X3, 2, 1, TorusElement::zero(), "X3");
    detail::expect_entry(rep, ch.X3, 1, 2, e12, "X3");
    detail::expect_entry(rep, ch.X3, 1, 1, TorusElement::zero(), "X3");
    detail::expect_entry(rep, ch.X3, 2, 2, TorusElement::zero(), "X3");
  }
  return rep;
}

/// Verify the second half of the chain: three further conjugation-difference
/// steps eliminate the V*, U*, W* coefficients in turn and leave an exact
/// scalar multiple of the matrix unit E_12,
///   X4 = conj(q1) X3 - chi1^2 rho(U) X3 rho(U)*
///   X5 = q1       X4 - chi2^2 rho(V) X4 rho(V)*
///   X6 = conj(q2) X5 - chi1^2 rho(U) X5 rho(U)*
///   X6 = (conj(q2)-1)(q1-1)(conj(q1)-1)(1-chi1^4 chi2^4)(1-conj(chi2)^4)
///        (1-conj(chi1)^4) E_12.
inline VerifyReport verify_X6() {
  using detail::mono;
  using detail::one_minus;
  detail::DChain ch;
  VerifyReport rep;
  rep.check = "X6";

  const TorusMatrix X4 = conj_reduce(ch.m.alg, ch.m.rho, ch.X3, ch.U, mono(2, 0, 0), ch.q1c);
  const TorusMatrix X5 = conj_reduce(ch.m.alg, ch.m.rho, X4, ch.V, mono(0, 2, 0), ch.q1);
  const TorusMatrix X6 = conj_reduce(ch.m.alg, ch.m.rho, X5, ch.U, mono(2, 0, 0), ch.q2c);

  const PhasePoly c1 = mono(-4, 0, 0);
  const PhasePoly c2 = mono(0, -4, 0);
  const PhasePoly c12 = mono(4, 4, 0);
  const PhasePoly aFinal = (ch.q2c - PhasePoly::one()) * (ch.q1 - PhasePoly::one()) *
                           (ch.q1c - PhasePoly::one()) * one_minus(c12) * one_minus(c2) *
                           one_minus(c1);

  detail::expect_entry(rep, X6, 1, 2, TorusElement::word({0, 0, 0}, aFinal), "X6");
  detail::expect_entry(rep, X6, 2, 1, TorusElement::zero(), "X6");
  detail::expect_entry(rep, X6, 1, 1, TorusElement::zero(), "X6");
  detail::expect_entry(rep, X6, 2, 2, TorusElement::zero(), "X6");
  return rep;
}

/// Numeric spot check of the derived phase identities at random parameter
/// points (angles drawn uniformly, not restricted to rationals):
///   chi1^8 = conj(q1 q2),  chi2^8 = q1 conj(q3),  chi3^8 = q1^2 conj(q2) q3,
///   q2 conj(q3) = conj(chi1)^4 chi2^4 conj(chi3)^4,
///   q2 q3 = conj(chi1 chi2)^8,
/// and for the gyroid parameters alpha_i = phi_i^4.
inline VerifyReport verify_phase_identities(std::uint64_t seed = 42, int samples = 100,
                                            double tol = 1e-12) {
  VerifyReport rep;
  rep.check = "phase-identities";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto cpow = [](std::complex<double> z, int p) {
    std::complex<double> r{1.0, 0.0};
    std::complex<double> base = p < 0 ? std::conj(z) : z;
    for (int i = 0; i < std::abs(p); ++i) r *= base;
    return r;
  };
  auto record = [&](const std::string& pos, std::complex<double> lhs, std::complex<double> rhs) {
    if (std::abs(lhs - rhs) > tol) {
      rep.pass = false;
      rep.mismatches.push_back({pos,
                                nlohmann::json::array({rhs.real(), rhs.imag()}),
                                nlohmann::json::array({lhs.real(), lhs.imag()})});
    }
  };
  for (int s = 0; s < samples; ++s) {
    const std::complex<double> x1 = unit_phase_radians(2.0 * M_PI * uni(rng));
    const std::complex<double> x2 = unit_phase_radians(2.0 * M_PI * uni(rng));
    const std::complex<double> x3 = unit_phase_radians(2.0 * M_PI * uni(rng));
    const std::complex<double> q1 = cpow(x1, -2) * cpow(x2, 2) * cpow(x3, 2);
    const std::complex<double> q2 = cpow(x1, -6) * cpow(x2, -2) * cpow(x3, -2);
    const std::complex<double> q3 = cpow(x1, -2) * cpow(x2, -6) * cpow(x3, 2);
    const std::string tag = "sample" + std::to_string(s);
    record(tag + ":chi1^8", cpow(x1, 8), std::conj(q1 * q2));
    record(tag + ":chi2^8", cpow(x2, 8), q1 * std::conj(q3));
    record(tag + ":chi3^8", cpow(x3, 8), q1 * q1 * std::conj(q2) * q3);
    record(tag + ":q2conj(q3)", q2 * std::conj(q3), cpow(x1, -4) * cpow(x2, 4) * cpow(x3, -4));
    record(tag + ":q2q3", q2 * q3, cpow(x1, -8) * cpow(x2, -8));
    // Gyroid: alpha_i = phi_i^4 for phi built from a random field.
    const std::complex<double> f1 = unit_phase_radians(2.0 * M_PI * uni(rng));
    record(tag + ":alpha1", cpow(f1, 4), cpow(f1 * f1, 2));
  }
  return rep;
}

}  // namespace nct
