// Floating-point quadrature: adaptive Simpson on segments and an adaptive
// symmetric rule on triangles.  Exact integrals live in poly.hpp; these
// routines serve the smooth (non-polynomial) test functions and the surface
// integrals of the 3D construction.
#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "ceq/errors.hpp"

namespace ceq {

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-14) return left + right + delta / 15.0;
  if (depth <= 0) throw QuadratureTolNotMet("adaptive Simpson: depth exhausted");
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Integral of f over [a, b] to absolute tolerance tol.
template <class F>
double integrate(const F& f, double a, double b, double tol, int max_depth = 52) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

struct Vec2 {
  double x = 0, y = 0;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
};

}  // namespace ceq
