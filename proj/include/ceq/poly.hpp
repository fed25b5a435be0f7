// Small exact polynomial kit: dense univariate and bivariate polynomials
// with rational coefficients, plus C^1 piecewise-polynomial cutoffs with
// rational knots.  Everything needed to integrate weak-form residuals in
// closed form.
#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <vector>

#include "ceq/rational.hpp"

namespace ceq {

// -- univariate ---------------------------------------------------------------

struct Poly {
  std::vector<Rational> c;  // c[i] * x^i; empty means the zero polynomial

  static Poly zero() { return {}; }
  static Poly constant(Rational a) { return a == 0 ? Poly{} : Poly{{std::move(a)}}; }
  // a + b x
  static Poly linear(Rational a, Rational b) { return Poly{{std::move(a), std::move(b)}}.trim(); }

  Poly& trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
    return *this;
  }

  bool is_zero() const { return c.empty(); }
  std::size_t degree() const { return c.empty() ? 0 : c.size() - 1; }

  Rational operator()(const Rational& x) const {
    Rational acc(0);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  }
  double operator()(double x) const {
    double acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + to_double(c[i]);
    return acc;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Rational(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    return r.trim();
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Rational(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    return r.trim();
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly r;
    r.c.resize(a.c.size() + b.c.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r.trim();
  }
  friend Poly operator*(const Rational& s, const Poly& a) {
    Poly r = a;
    for (auto& x : r.c) x *= s;
    return r.trim();
  }

  Poly derivative() const {
    if (c.size() <= 1) return {};
    Poly r;
    r.c.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) r.c[i - 1] = Rational(i) * c[i];
    return r;
  }

  // p(a + b x)
  Poly compose_linear(const Rational& a, const Rational& b) const {
    Poly arg = Poly::linear(a, b);
    Poly acc = Poly::zero();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * arg + Poly::constant(c[i]);
    return acc;
  }

  // definite integral over [lo, hi]
  Rational integral(const Rational& lo, const Rational& hi) const {
    Rational acc(0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      Rational p(1), q(1);
      for (std::size_t m = 0; m <= i; ++m) { p *= hi; q *= lo; }
      acc += c[i] * (p - q) / Rational(i + 1);
    }
    return acc;
  }
};

// -- bivariate ----------------------------------------------------------------

// q(t, x) = sum c[i][j] t^i x^j (dense, small degrees).
struct BivarPoly {
  std::vector<std::vector<Rational>> c;

  static BivarPoly zero() { return {}; }

  static BivarPoly monomial(unsigned dt, unsigned dx, Rational coeff) {
    BivarPoly p;
    p.c.assign(dt + 1, {});
    p.c[dt].assign(dx + 1, Rational(0));
    p.c[dt][dx] = std::move(coeff);
    return p;
  }

  BivarPoly& add_term(unsigned dt, unsigned dx, Rational coeff) {
    if (c.size() <= dt) c.resize(dt + 1);
    if (c[dt].size() <= dx) c[dt].resize(dx + 1, Rational(0));
    c[dt][dx] += std::move(coeff);
    return *this;
  }

  Rational operator()(const Rational& t, const Rational& x) const {
    Rational acc(0), tp(1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      Rational xp(1), row(0);
      for (std::size_t j = 0; j < c[i].size(); ++j) {
        row += c[i][j] * xp;
        xp *= x;
      }
      acc += row * tp;
      tp *= t;
    }
    return acc;
  }

  BivarPoly d_t() const {
    BivarPoly r;
    if (c.size() <= 1) return r;
    r.c.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) {
      r.c[i - 1] = c[i];
      for (auto& coeff : r.c[i - 1]) coeff *= Rational(i);
    }
    return r;
  }

  BivarPoly d_x() const {
    BivarPoly r;
    r.c.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i].size() <= 1) continue;
      r.c[i].resize(c[i].size() - 1);
      for (std::size_t j = 1; j < c[i].size(); ++j) r.c[i][j - 1] = Rational(j) * c[i][j];
    }
    return r;
  }

  // substitute t := a + b x, producing a univariate polynomial in x
  Poly substitute_t_linear(const Rational& a, const Rational& b) const {
    Poly acc = Poly::zero();
    Poly tp = Poly::constant(Rational(1));
    Poly lin = Poly::linear(a, b);
    for (std::size_t i = 0; i < c.size(); ++i) {
      Poly row;
      row.c = c[i];
      row.trim();
      acc = acc + row * tp;
      tp = tp * lin;
    }
    return acc;
  }

  // univariate slice q(t, x0) as a polynomial in t
  Poly slice_x(const Rational& x0) const {
    Poly r;
    r.c.resize(c.size(), Rational(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      Rational xp(1), row(0);
      for (std::size_t j = 0; j < c[i].size(); ++j) {
        row += c[i][j] * xp;
        xp *= x0;
      }
      r.c[i] = row;
    }
    return r.trim();
  }
};

// -- C^1 piecewise polynomial -------------------------------------------------

// Defined on all of R: constant 0 left of the first knot and right of the
// last knot unless pieces say otherwise.  Pieces are polynomials in the
// global variable.
struct PiecewisePoly {
  std::vector<Rational> knots;  // sorted, size n+1 for n pieces
  std::vector<Poly> pieces;     // value on [knots[i], knots[i+1]]

  std::size_t piece_index(const Rational& t) const {
    auto it = std::upper_bound(knots.begin(), knots.end(), t);
    if (it == knots.begin()) return npos;
    std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
    if (i >= pieces.size()) {
      // t == last knot belongs to the last piece; beyond it is outside
      if (t == knots.back() && !pieces.empty()) return pieces.size() - 1;
      return npos;
    }
    return i;
  }

  Rational operator()(const Rational& t) const {
    std::size_t i = piece_index(t);
    return i == npos ? Rational(0) : pieces[i](t);
  }
  double operator()(double t) const {
    // float path: locate by comparing against float knots
    if (knots.empty()) return 0.0;
    if (t < to_double(knots.front()) || t > to_double(knots.back())) return 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (t <= to_double(knots[i + 1])) return pieces[i](t);
    return 0.0;
  }

  PiecewisePoly derivative() const {
    PiecewisePoly d;
    d.knots = knots;
    d.pieces.reserve(pieces.size());
    for (const auto& p : pieces) d.pieces.push_back(p.derivative());
    return d;
  }

  Rational integral(const Rational& lo, const Rational& hi) const {
    assert(lo <= hi);
    Rational acc(0);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      Rational a = std::max(lo, knots[i]);
      Rational b = std::min(hi, knots[i + 1]);
      if (a < b) acc += pieces[i].integral(a, b);
    }
    return acc;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// C^1 plateau cutoff: 0 before a, cubic smoothstep up on [a,b], 1 on [b,c],
// cubic smoothstep down on [c,d], 0 after d.
inline PiecewisePoly smoothstep_cutoff(const Rational& a, const Rational& b, const Rational& c,
                                       const Rational& d) {
  assert(a < b && b <= c && c < d);
  auto smooth_up = [](const Rational& lo, const Rational& hi) {
    // s(u) = 3u^2 - 2u^3 with u = (t - lo) / (hi - lo)
    Rational w = hi - lo;
    Poly u = Poly::linear(-lo / w, Rational(1) / w);
    return Rational(3) * (u * u) - Rational(2) * (u * u * u);
  };
  PiecewisePoly psi;
  psi.knots = {a, b, c, d};
  psi.pieces = {smooth_up(a, b), Poly::constant(Rational(1))};
  Poly down = Poly::constant(Rational(1)) - smooth_up(c, d);
  psi.pieces.push_back(down);
  return psi;
}

}  // namespace ceq
