#pragma once

#include <cmath>

namespace tcone {

// Second-order forward-mode jet in one variable: value, first and second
// derivative. Used to differentiate the radial profiles in log-radius without
// hand-expanding every chain rule.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
  static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }
};

inline Jet2 operator+(Jet2 a, Jet2 b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet2 operator-(Jet2 a, Jet2 b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet2 operator-(Jet2 a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet2 operator*(Jet2 a, Jet2 b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
inline Jet2 operator*(double c, Jet2 a) { return {c * a.v, c * a.d1, c * a.d2}; }
inline Jet2 operator*(Jet2 a, double c) { return c * a; }
inline Jet2 operator+(Jet2 a, double c) { return {a.v + c, a.d1, a.d2}; }
inline Jet2 operator+(double c, Jet2 a) { return a + c; }
inline Jet2 operator-(double c, Jet2 a) { return {c - a.v, -a.d1, -a.d2}; }
inline Jet2 operator-(Jet2 a, double c) { return {a.v - c, a.d1, a.d2}; }

// Applies a scalar function given its value and first two derivatives at a.v.
inline Jet2 chain(Jet2 a, double f0, double f1, double f2) {
  return {f0, f1 * a.d1, f2 * a.d1 * a.d1 + f1 * a.d2};
}

inline Jet2 recip(Jet2 a) {
  const double r = 1.0 / a.v;
  return chain(a, r, -r * r, 2.0 * r * r * r);
}
inline Jet2 operator/(Jet2 a, Jet2 b) { return a * recip(b); }
inline Jet2 operator/(double c, Jet2 a) { return c * recip(a); }
inline Jet2 operator/(Jet2 a, double c) { return (1.0 / c) * a; }

inline Jet2 log(Jet2 a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet2 exp(Jet2 a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Jet2 sin(Jet2 a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet2 cos(Jet2 a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet2 cosh(Jet2 a) { return chain(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v)); }

}  // namespace tcone
