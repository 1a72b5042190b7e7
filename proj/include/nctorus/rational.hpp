#pragma once

/// Exact rational arithmetic, rational 3-vectors, and unit phases.
///
/// Lattice data (edge vectors, translation bases, flux parameters) is kept as
/// exact rationals so that derived commutation phases stay exact until the
/// final numeric evaluation.  Angles are measured in *turns* unless stated
/// otherwise: the rational t stands for the unit complex number e^{2 pi i t}.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nct {

/// Raised for malformed configuration input (CLI flags, JSON specs, ...).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numeric routine fails to reach its accuracy contract.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exact or numeric verification detects a mismatch.
class verify_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reduced fraction num/den with den > 0.
struct Rational {
  long long num = 0;
  long long den = 1;

  constexpr Rational() = default;
  constexpr Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0) throw config_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  bool is_zero() const { return num == 0; }
  bool is_integer() const { return den == 1; }

  /// Representative of this value modulo 1 lying in [0, 1).
  Rational mod1() const {
    long long r = num % den;
    if (r < 0) r += den;
    return Rational(r, den);
  }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  /// Parse "p/q" or "p".  Decimal or exponent notation is rejected so that
  /// callers demanding exact input fail loudly on floats.
  static Rational parse(const std::string& text) {
    if (text.empty()) throw config_error("empty rational literal");
    for (char ch : text) {
      if (ch == '.' || ch == 'e' || ch == 'E')
        throw config_error("expected exact rational 'p/q', got '" + text + "'");
    }
    const auto slash = text.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        const long long n = std::stoll(text, &used);
        if (used != text.size()) throw config_error("trailing junk in rational '" + text + "'");
        return Rational(n);
      }
      const std::string np = text.substr(0, slash);
      const std::string dp = text.substr(slash + 1);
      const long long n = std::stoll(np, &used);
      if (used != np.size()) throw config_error("trailing junk in rational '" + text + "'");
      const long long d = std::stoll(dp, &used);
      if (used != dp.size()) throw config_error("trailing junk in rational '" + text + "'");
      return Rational(n, d);
    } catch (const config_error&) {
      throw;
    } catch (const std::exception&) {
      throw config_error("cannot parse rational '" + text + "'");
    }
  }
};

inline Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}
inline Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
}
inline Rational operator-(const Rational& a) { return Rational(-a.num, a.den); }
inline Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num * b.num, a.den * b.den);
}
inline Rational operator/(const Rational& a, const Rational& b) {
  if (b.num == 0) throw config_error("rational division by zero");
  return Rational(a.num * b.den, a.den * b.num);
}
inline bool operator==(const Rational& a, const Rational& b) {
  return a.num == b.num && a.den == b.den;
}
inline bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
inline bool operator<(const Rational& a, const Rational& b) {
  return a.num * b.den < b.num * a.den;
}

/// Exact 3-vector.
using Vec3Q = std::array<Rational, 3>;

inline Vec3Q operator+(const Vec3Q& a, const Vec3Q& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3Q operator-(const Vec3Q& a, const Vec3Q& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3Q operator-(const Vec3Q& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec3Q operator*(const Rational& s, const Vec3Q& v) {
  return {s * v[0], s * v[1], s * v[2]};
}

inline Rational dot(const Vec3Q& a, const Vec3Q& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3Q cross(const Vec3Q& a, const Vec3Q& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline bool is_zero(const Vec3Q& v) { return v[0].is_zero() && v[1].is_zero() && v[2].is_zero(); }

/// e^{2 pi i t} for a rational angle t in turns.
inline std::complex<double> unit_phase(const Rational& t) {
  const double arg = 2.0 * M_PI * t.to_double();
  return {std::cos(arg), std::sin(arg)};
}

/// e^{i x} for an angle x in radians.
inline std::complex<double> unit_phase_radians(double x) { return {std::cos(x), std::sin(x)}; }

}  // namespace nct
