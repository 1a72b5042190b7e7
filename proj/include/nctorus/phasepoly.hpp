#pragma once

/// Integer-coefficient Laurent polynomials in three commuting unit-modulus
/// symbols.
///
/// The three symbols are the phase parameters of a lattice model (for the
/// diamond-type net the chi_i, for the gyroid-type net the phi_i, for the
/// primitive net the pairwise commutation phases themselves).  Because every
/// scalar appearing in the operator algebra is a monomial in these symbols,
/// all structural identities can be verified as exact polynomial identities
/// with integer coefficients.

#include <array>
#include <complex>
#include <map>
#include <sstream>
#include <string>

#include "rational.hpp"

namespace nct {

/// Exponent triple of a monomial s1^m1 s2^m2 s3^m3.
using MonomialExp = std::array<int, 3>;

inline MonomialExp operator+(const MonomialExp& a, const MonomialExp& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline MonomialExp operator-(const MonomialExp& a) { return {-a[0], -a[1], -a[2]}; }
inline MonomialExp operator*(int s, const MonomialExp& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

/// Laurent polynomial with integer coefficients over three unit symbols.
struct PhasePoly {
  std::map<MonomialExp, long long> terms;

  PhasePoly() = default;

  static PhasePoly zero() { return {}; }
  static PhasePoly one() { return monomial({0, 0, 0}); }
  static PhasePoly monomial(const MonomialExp& e, long long c = 1) {
    PhasePoly p;
    if (c != 0) p.terms[e] = c;
    return p;
  }

  bool is_zero() const { return terms.empty(); }

  /// True if the polynomial is a single monomial with coefficient +1 or -1.
  bool is_unit_monomial() const {
    return terms.size() == 1 &&
           (terms.begin()->second == 1 || terms.begin()->second == -1);
  }

  void add_term(const MonomialExp& e, long long c) {
    if (c == 0) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
      terms[e] = c;
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  PhasePoly& operator+=(const PhasePoly& o) {
    for (const auto& [e, c] : o.terms) add_term(e, c);
    return *this;
  }
  PhasePoly& operator-=(const PhasePoly& o) {
    for (const auto& [e, c] : o.terms) add_term(e, -c);
    return *this;
  }

  /// Complex conjugate: symbols are unit phases, so conjugation inverts the
  /// exponents and keeps the (real, integer) coefficients.
  PhasePoly conj() const {
    PhasePoly r;
    for (const auto& [e, c] : terms) r.terms[-e] = c;
    return r;
  }

  /// Evaluate at numeric symbol values (expected on the unit circle).
  std::complex<double> eval(const std::array<std::complex<double>, 3>& s) const {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [e, c] : terms) {
      std::complex<double> m{1.0, 0.0};
      for (int i = 0; i < 3; ++i) {
        const int p = e[i];
        if (p == 0) continue;
        std::complex<double> base = s[i];
        if (p < 0) base = std::conj(base);  // unit modulus: inverse = conjugate
        for (int j = 0; j < std::abs(p); ++j) m *= base;
      }
      acc += static_cast<double>(c) * m;
    }
    return acc;
  }

  /// Evaluate at exact rational symbol angles (in turns): every monomial is
  /// collapsed to a single phase e^{2 pi i <e, t>} before rounding to double.
  std::complex<double> eval_turns(const std::array<Rational, 3>& t) const {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [e, c] : terms) {
      Rational angle(0);
      for (int i = 0; i < 3; ++i) angle = angle + Rational(e[i]) * t[i];
      acc += static_cast<double>(c) * unit_phase(angle.mod1());
    }
    return acc;
  }

  std::string str(const std::array<std::string, 3>& names = {"s1", "s2", "s3"}) const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms) {
      if (!first) os << (c >= 0 ? " + " : " - ");
      else if (c < 0) os << "-";
      first = false;
      const long long a = c < 0 ? -c : c;
      bool printed = false;
      if (a != 1 || (e[0] == 0 && e[1] == 0 && e[2] == 0)) {
        os << a;
        printed = true;
      }
      for (int i = 0; i < 3; ++i) {
        if (e[i] == 0) continue;
        if (printed) os << "*";
        os << names[i];
        if (e[i] != 1) os << "^" << e[i];
        printed = true;
      }
    }
    return os.str();
  }
};

inline PhasePoly operator+(PhasePoly a, const PhasePoly& b) { return a += b; }
inline PhasePoly operator-(PhasePoly a, const PhasePoly& b) { return a -= b; }
inline PhasePoly operator*(const PhasePoly& a, const PhasePoly& b) {
  PhasePoly r;
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) r.add_term(ea + eb, ca * cb);
  return r;
}
inline bool operator==(const PhasePoly& a, const PhasePoly& b) { return a.terms == b.terms; }
inline bool operator!=(const PhasePoly& a, const PhasePoly& b) { return !(a == b); }

}  // namespace nct
