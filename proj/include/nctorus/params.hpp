#pragma once

/// Commutation-phase parameters of the P, D, and G networks derived from a
/// uniform magnetic field, with an explicit exponent convention.
///
/// A field is stored as an exact rational covector b; the pairwise flux
/// through two displacement vectors is theta_of(b, v, w) = b . (v x w).
/// Under TorusUnits a rational value t stands for the unit phase
/// e^{2 pi i t} (t in turns); under RadianUnits the same rational is
/// interpreted as an angle in radians, e^{i t}.  TorusUnits keeps every
/// derived phase an exact root of unity and is required by the exact
/// classification machinery.

#include <array>
#include <complex>
#include <string>

#include "lattice.hpp"
#include "rational.hpp"

namespace nct {

enum class PhaseConvention { TorusUnits, RadianUnits };

using FieldB = Vec3Q;

/// Pairwise flux parameter of two displacement vectors.
inline Rational theta_of(const FieldB& b, const Vec3Q& v, const Vec3Q& w) {
  return dot(b, cross(v, w));
}

inline std::complex<double> phase_of(const Rational& value, PhaseConvention conv) {
  if (conv == PhaseConvention::TorusUnits) return unit_phase(value.mod1());
  return unit_phase_radians(value.to_double());
}

/// Parameters of the diamond-network operator algebra: the three generator
/// phases chi_i and the derived pairwise commutation phases q_i.
struct DParams {
  PhaseConvention convention = PhaseConvention::TorusUnits;
  bool exact = true;  // exact rational angles available (TorusUnits only)
  std::array<Rational, 3> chiAngle{};  // in turns when exact
  std::array<std::complex<double>, 3> chi{};
  std::array<Rational, 3> qAngle{};
  std::array<std::complex<double>, 3> q{};
};

/// Parameters of the gyroid-network operator algebra: the vertex phases
/// phi_i, their product Phi, and the pairwise commutation phases
/// alpha_i = phi_i^4.
struct GParams {
  PhaseConvention convention = PhaseConvention::TorusUnits;
  bool exact = true;
  std::array<Rational, 3> phiAngle{};
  std::array<std::complex<double>, 3> phi{};
  std::array<Rational, 3> alphaAngle{};
  std::array<std::complex<double>, 3> alpha{};
  Rational PhiAngle{};
  std::complex<double> PhiProduct{1.0, 0.0};
};

namespace detail {

inline void check_unit(const std::complex<double>& z, const char* what) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw numeric_error(std::string(what) + " is not unit modulus");
}

inline std::complex<double> ipow(std::complex<double> z, int p) {
  std::complex<double> r{1.0, 0.0};
  std::complex<double> base = p < 0 ? std::conj(z) : z;
  for (int i = 0; i < std::abs(p); ++i) r *= base;
  return r;
}

}  // namespace detail

/// Build DParams from exact chi angles (in turns).
inline DParams d_params_from_angles(const std::array<Rational, 3>& a) {
  DParams p;
  p.convention = PhaseConvention::TorusUnits;
  p.exact = true;
  for (int i = 0; i < 3; ++i) {
    p.chiAngle[i] = a[i].mod1();
    p.chi[i] = unit_phase(p.chiAngle[i]);
  }
  // q1 = conj(chi1)^2 chi2^2 chi3^2, q2 = conj(chi1)^6 conj(chi2)^2 conj(chi3)^2,
  // q3 = conj(chi1)^2 conj(chi2)^6 chi3^2.
  p.qAngle[0] = (Rational(-2) * a[0] + Rational(2) * a[1] + Rational(2) * a[2]).mod1();
  p.qAngle[1] = (Rational(-6) * a[0] + Rational(-2) * a[1] + Rational(-2) * a[2]).mod1();
  p.qAngle[2] = (Rational(-2) * a[0] + Rational(-6) * a[1] + Rational(2) * a[2]).mod1();
  for (int i = 0; i < 3; ++i) p.q[i] = unit_phase(p.qAngle[i]);
  return p;
}

/// Build DParams from a field.  The three base phases are the fluxes
/// phi1 = theta(-e1, e2), phi2 = theta(-e1, e3), phi3 = theta(e2, e3) through
/// the quarter-diagonal bond vectors e_i of the diamond network.
inline DParams d_params_from_field(const FieldB& b,
                                   PhaseConvention conv = PhaseConvention::TorusUnits) {
  const LatticeSpec d = lattice_D();
  const Vec3Q e1 = d.edges[0].vector;
  const Vec3Q e2 = d.edges[1].vector;
  const Vec3Q e3 = d.edges[2].vector;
  const std::array<Rational, 3> a = {theta_of(b, -e1, e2), theta_of(b, -e1, e3),
                                     theta_of(b, e2, e3)};
  if (conv == PhaseConvention::TorusUnits) return d_params_from_angles(a);
  DParams p;
  p.convention = PhaseConvention::RadianUnits;
  p.exact = false;
  for (int i = 0; i < 3; ++i) {
    p.chiAngle[i] = a[i];
    p.chi[i] = unit_phase_radians(a[i].to_double());
    detail::check_unit(p.chi[i], "chi");
  }
  using detail::ipow;
  p.q[0] = ipow(p.chi[0], -2) * ipow(p.chi[1], 2) * ipow(p.chi[2], 2);
  p.q[1] = ipow(p.chi[0], -6) * ipow(p.chi[1], -2) * ipow(p.chi[2], -2);
  p.q[2] = ipow(p.chi[0], -2) * ipow(p.chi[1], -6) * ipow(p.chi[2], 2);
  return p;
}

/// Build GParams from exact phi angles (in turns).
inline GParams g_params_from_angles(const std::array<Rational, 3>& bturns) {
  GParams p;
  p.convention = PhaseConvention::TorusUnits;
  p.exact = true;
  p.PhiAngle = Rational(0);
  for (int i = 0; i < 3; ++i) {
    p.phiAngle[i] = bturns[i].mod1();
    p.phi[i] = unit_phase(p.phiAngle[i]);
    p.alphaAngle[i] = (Rational(4) * bturns[i]).mod1();
    p.alpha[i] = unit_phase(p.alphaAngle[i]);
    p.PhiAngle = p.PhiAngle + bturns[i];
  }
  p.PhiAngle = p.PhiAngle.mod1();
  p.PhiProduct = unit_phase(p.PhiAngle);
  return p;
}

/// Build GParams from a field.  With g_i the bcc translation generators and
/// theta_ij = theta_of(b, g_i, g_j), the vertex phases are the quarter fluxes
/// phi1 ~ theta12/4, phi2 ~ theta31/4, phi3 ~ theta23/4, and alpha_i = phi_i^4.
inline GParams g_params_from_field(const FieldB& b,
                                   PhaseConvention conv = PhaseConvention::TorusUnits) {
  const LatticeSpec g = lattice_G();
  const Vec3Q g1 = g.translationBasis[0];
  const Vec3Q g2 = g.translationBasis[1];
  const Vec3Q g3 = g.translationBasis[2];
  const Rational t12 = theta_of(b, g1, g2);
  const Rational t31 = theta_of(b, g3, g1);
  const Rational t23 = theta_of(b, g2, g3);
  const std::array<Rational, 3> quarter = {t12 / Rational(4), t31 / Rational(4),
                                           t23 / Rational(4)};
  if (conv == PhaseConvention::TorusUnits) return g_params_from_angles(quarter);
  GParams p;
  p.convention = PhaseConvention::RadianUnits;
  p.exact = false;
  std::complex<double> Phi{1.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    p.phiAngle[i] = quarter[i];
    p.phi[i] = unit_phase_radians(quarter[i].to_double());
    p.alpha[i] = detail::ipow(p.phi[i], 4);
    Phi *= p.phi[i];
  }
  p.PhiProduct = Phi;
  return p;
}

/// Pairwise commutation angles (in turns) of the D generator torus
/// (U, V, W): U V = e^{2 pi i t12} V U, etc.  Requires exact parameters.
inline std::array<Rational, 3> d_commutation_angles(const DParams& p) {
  if (!p.exact) throw config_error("exact D parameters required (use TorusUnits)");
  return {p.qAngle[0].mod1(), p.qAngle[1].mod1(), p.qAngle[2].mod1()};
}

/// Pairwise commutation angles (in turns) of the G generator torus
/// (A, B, C): A B = alpha1 B A, A C = conj(alpha2) C A, B C = alpha3 C B.
inline std::array<Rational, 3> g_commutation_angles(const GParams& p) {
  if (!p.exact) throw config_error("exact G parameters required (use TorusUnits)");
  return {(Rational(4) * p.phiAngle[0]).mod1(), (Rational(-4) * p.phiAngle[1]).mod1(),
          (Rational(4) * p.phiAngle[2]).mod1()};
}

}  // namespace nct
