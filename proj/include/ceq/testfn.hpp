// Test functions for the weak formulation.  The canonical 1D suite consists
// of bivariate rational polynomials under a C^1 piecewise-polynomial time
// cutoff (fully exact residuals); smooth compactly supported bumps cover the
// floating-point path.
#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "ceq/poly.hpp"
#include "ceq/rational.hpp"

namespace ceq {

// phi(t, x) = q(t, x) * psi(t) with rational q and C^1 cutoff psi.
struct ProductTest1D {
  std::string id;
  BivarPoly q;
  PiecewisePoly psi;

  Rational eval(const Rational& t, const Rational& x) const { return q(t, x) * psi(t); }

  double eval(double t, double x) const;
  double d_t(double t, double x) const;
  double d_x(double t, double x) const;
};

inline double ProductTest1D::eval(double t, double x) const {
  double acc = 0, tp = 1;
  for (std::size_t i = 0; i < q.c.size(); ++i) {
    double xp = 1, row = 0;
    for (std::size_t j = 0; j < q.c[i].size(); ++j) {
      row += to_double(q.c[i][j]) * xp;
      xp *= x;
    }
    acc += row * tp;
    tp *= t;
  }
  return acc * psi(t);
}

inline double ProductTest1D::d_t(double t, double x) const {
  BivarPoly qt = q.d_t();
  double a = 0, tp = 1;
  for (std::size_t i = 0; i < qt.c.size(); ++i) {
    double xp = 1, row = 0;
    for (std::size_t j = 0; j < qt.c[i].size(); ++j) {
      row += to_double(qt.c[i][j]) * xp;
      xp *= x;
    }
    a += row * tp;
    tp *= t;
  }
  double b = 0;
  tp = 1;
  for (std::size_t i = 0; i < q.c.size(); ++i) {
    double xp = 1, row = 0;
    for (std::size_t j = 0; j < q.c[i].size(); ++j) {
      row += to_double(q.c[i][j]) * xp;
      xp *= x;
    }
    b += row * tp;
    tp *= t;
  }
  return a * psi(t) + b * psi.derivative()(t);
}

inline double ProductTest1D::d_x(double t, double x) const {
  BivarPoly qx = q.d_x();
  double a = 0, tp = 1;
  for (std::size_t i = 0; i < qx.c.size(); ++i) {
    double xp = 1, row = 0;
    for (std::size_t j = 0; j < qx.c[i].size(); ++j) {
      row += to_double(qx.c[i][j]) * xp;
      xp *= x;
    }
    a += row * tp;
    tp *= t;
  }
  return a * psi(t);
}

// Standard mollifier profile: exp(1 / (u^2 - 1)) on (-1, 1), 0 outside.
inline double bump_profile(double u) {
  double s = u * u - 1.0;
  return s < 0 ? std::exp(1.0 / s) : 0.0;
}
inline double bump_profile_d(double u) {
  double s = u * u - 1.0;
  if (s >= 0) return 0.0;
  return std::exp(1.0 / s) * (-2.0 * u / (s * s));
}

// phi(t, x) = bump((t - tc)/rt) * bump((x - xc)/rx): C^inf, tensor support box.
struct BumpTest1D {
  std::string id;
  double tc, rt, xc, rx;

  double eval(double t, double x) const {
    return bump_profile((t - tc) / rt) * bump_profile((x - xc) / rx);
  }
  double d_t(double t, double x) const {
    return bump_profile_d((t - tc) / rt) / rt * bump_profile((x - xc) / rx);
  }
  double d_x(double t, double x) const {
    return bump_profile((t - tc) / rt) * bump_profile_d((x - xc) / rx) / rx;
  }
};

using TestFunction1D = std::variant<ProductTest1D, BumpTest1D>;

inline const std::string& test_id(const TestFunction1D& fn) {
  return std::visit([](const auto& f) -> const std::string& { return f.id; }, fn);
}

// The canonical exact suite: twelve monomial shapes across three cutoffs.
// One cutoff ramps inside the graph's level range [1, 3], exercising
// nontrivial psi' on the curve.
inline std::vector<ProductTest1D> canonical_product_suite() {
  PiecewisePoly wide = smoothstep_cutoff(Rational(1, 4), Rational(3, 4), Rational(13, 4),
                                         Rational(15, 4));
  PiecewisePoly tight = smoothstep_cutoff(Rational(1, 8), Rational(1, 2), Rational(7, 2),
                                          Rational(31, 8));
  PiecewisePoly inner = smoothstep_cutoff(Rational(3, 2), Rational(2), Rational(5, 2),
                                          Rational(3));
  auto mono = [](unsigned dt, unsigned dx) { return BivarPoly::monomial(dt, dx, Rational(1)); };
  std::vector<ProductTest1D> suite;
  suite.push_back({"P01_x", mono(0, 1), wide});
  suite.push_back({"P02_x2", mono(0, 2), wide});
  suite.push_back({"P03_x3", mono(0, 3), tight});
  suite.push_back({"P04_1", mono(0, 0), wide});
  suite.push_back({"P05_t", mono(1, 0), tight});
  suite.push_back({"P06_tx", mono(1, 1), wide});
  suite.push_back({"P07_t2x", mono(2, 1), tight});
  suite.push_back({"P08_t2x2", mono(2, 2), wide});
  suite.push_back({"P09_x4", mono(0, 4), inner});
  suite.push_back({"P10_tx3", mono(1, 3), inner});
  suite.push_back({"P11_t3", mono(3, 0), inner});
  BivarPoly mixed = BivarPoly::monomial(0, 0, Rational(1));
  mixed.add_term(1, 1, Rational(-2, 3)).add_term(2, 0, Rational(1, 5)).add_term(0, 3, Rational(7, 2));
  suite.push_back({"P12_mixed", mixed, wide});
  return suite;
}

inline std::vector<BumpTest1D> canonical_bump_suite() {
  return {
      {"B01", 2.2, 0.9, 0.5, 0.6},
      {"B02", 2.5, 1.2, 0.4, 0.7},
      {"B03", 1.8, 0.5, 0.7, 0.5},
  };
}

}  // namespace ceq
