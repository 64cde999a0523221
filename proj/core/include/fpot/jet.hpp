#pragma once

#include <cmath>

namespace fpot {

/// Second-order truncated Taylor jet: (f, f', f'') at a point.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
  static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }

  bool is_finite() const {
    return std::isfinite(value) && std::isfinite(d1) && std::isfinite(d2);
  }
};

constexpr Jet2 operator+(Jet2 u, Jet2 v) { return {u.value + v.value, u.d1 + v.d1, u.d2 + v.d2}; }
constexpr Jet2 operator-(Jet2 u, Jet2 v) { return {u.value - v.value, u.d1 - v.d1, u.d2 - v.d2}; }
constexpr Jet2 operator-(Jet2 u) { return {-u.value, -u.d1, -u.d2}; }
constexpr Jet2 operator*(double a, Jet2 u) { return {a * u.value, a * u.d1, a * u.d2}; }
constexpr Jet2 operator*(Jet2 u, double a) { return a * u; }

constexpr Jet2 operator*(Jet2 u, Jet2 v) {
  return {u.value * v.value, u.d1 * v.value + u.value * v.d1,
          u.d2 * v.value + 2.0 * u.d1 * v.d1 + u.value * v.d2};
}

/// Composition g(u) given g, g', g'' evaluated at u.value.
constexpr Jet2 chain(Jet2 u, double g0, double g1, double g2) {
  return {g0, g1 * u.d1, g2 * u.d1 * u.d1 + g1 * u.d2};
}

/// 1/v; caller guarantees v.value != 0.
inline Jet2 reciprocal(Jet2 v) {
  const double r = 1.0 / v.value;
  return chain(v, r, -r * r, 2.0 * r * r * r);
}

inline Jet2 operator/(Jet2 u, Jet2 v) { return u * reciprocal(v); }

/// u^n for integer n by repeated squaring; negative n via reciprocal.
inline Jet2 ipow(Jet2 u, long long n) {
  if (n < 0) {
    return reciprocal(ipow(u, -n));
  }
  Jet2 result = Jet2::constant(1.0);
  Jet2 base = u;
  while (n > 0) {
    if (n & 1) {
      result = result * base;
    }
    n >>= 1;
    if (n > 0) {
      base = base * base;
    }
  }
  return result;
}

}  // namespace fpot
