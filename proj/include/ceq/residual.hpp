// Weak-form residual engine for the 1D counterexample.  The field rides the
// graph {(f(x), x)}; pairing the uncorrected measure family against a test
// function telescopes to the boundary defect, and the corrected family pairs
// to zero.  Residuals are exact for the polynomial-product suite and
// quadrature-based for smooth bumps.
#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "ceq/errors.hpp"
#include "ceq/pwl.hpp"
#include "ceq/quadrature.hpp"
#include "ceq/rational.hpp"
#include "ceq/testfn.hpp"

namespace ceq {

struct GraphField {
  PwlFunction f;
  Rational T = Rational(4);

  explicit GraphField(PwlFunction fn) : f(std::move(fn)) {
    if (!(f.min_value() > 0 && f.max_value() < T))
      throw DomainViolation("GraphField: range must lie inside (0, T)");
  }
};

// b(t, x): reciprocal slope on the graph, zero elsewhere (and zero at
// breakpoints, where the slope is 0 by convention).  Exact.
inline Rational field_at(const GraphField& gf, const Rational& t, const Rational& x) {
  if (x < gf.f.domain_lo() || x > gf.f.domain_hi()) return Rational(0);
  if (gf.f.is_breakpoint(x)) return Rational(0);
  if (gf.f(x) != t) return Rational(0);
  auto it = std::upper_bound(gf.f.breakpoints.begin(), gf.f.breakpoints.end(), x);
  Rational sl = gf.f.slope(static_cast<std::size_t>(it - gf.f.breakpoints.begin()) - 1);
  return 1 / sl;
}

// --- defect ------------------------------------------------------------------

// phi(f(1), 1) - phi(f(0), 0): what the uncorrected family produces.
inline Rational defect(const GraphField& gf, const ProductTest1D& phi) {
  return phi.eval(gf.f(Rational(1)), Rational(1)) - phi.eval(gf.f(Rational(0)), Rational(0));
}

inline double defect(const GraphField& gf, const BumpTest1D& phi) {
  return phi.eval(to_double(gf.f(Rational(1))), 1.0) - phi.eval(to_double(gf.f(Rational(0))), 0.0);
}

inline double defect_value(const GraphField& gf, const TestFunction1D& phi) {
  if (const auto* p = std::get_if<ProductTest1D>(&phi)) return to_double(defect(gf, *p));
  return defect(gf, std::get<BumpTest1D>(phi));
}

// --- residual of the uncorrected family --------------------------------------
//
// integral over the curve: int_0^1 [f'(x) phi_t(f(x), x) + phi_x(f(x), x)] dx,
// taken piece by piece over the linear segments of f.

// Exact path.  On each segment t = c + m (x - a); splitting at cutoff-knot
// pullbacks leaves a polynomial integrand per sub-segment.
inline Rational residual_tilde(const GraphField& gf, const ProductTest1D& phi) {
  const PwlFunction& f = gf.f;
  PiecewisePoly dpsi = phi.psi.derivative();
  BivarPoly q_t = phi.q.d_t();
  BivarPoly q_x = phi.q.d_x();
  Rational acc(0);

  for (std::size_t i = 0; i < f.cells(); ++i) {
    const Rational& a = f.breakpoints[i];
    const Rational& b = f.breakpoints[i + 1];
    const Rational& c = f.values[i];
    Rational m = f.slope(i);

    // cut points: pullbacks of psi knots through t = c + m (x - a)
    std::vector<Rational> cuts{a, b};
    for (const auto& knot : phi.psi.knots) {
      Rational x = a + (knot - c) / m;
      if (a < x && x < b) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());

    Rational a0 = c - m * a;  // t = a0 + m x
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const Rational& xa = cuts[s];
      const Rational& xb = cuts[s + 1];
      Rational t_mid = a0 + m * ((xa + xb) / 2);
      std::size_t piece = phi.psi.piece_index(t_mid);
      if (piece == PiecewisePoly::npos) continue;  // cutoff vanishes here
      Poly psi_x = phi.psi.pieces[piece].compose_linear(a0, m);
      Poly dpsi_x = dpsi.pieces[piece].compose_linear(a0, m);
      Poly qt_x = q_t.substitute_t_linear(a0, m);
      Poly q_xx = phi.q.substitute_t_linear(a0, m);
      Poly qx_x = q_x.substitute_t_linear(a0, m);
      Poly integrand = m * (qt_x * psi_x + q_xx * dpsi_x) + qx_x * psi_x;
      acc += integrand.integral(xa, xb);
    }
  }
  return acc;
}

// Floating path for smooth test functions.
inline double residual_tilde(const GraphField& gf, const BumpTest1D& phi, double tol) {
  const PwlFunction& f = gf.f;
  double acc = 0;
  double per_piece = tol / static_cast<double>(f.cells());
  for (std::size_t i = 0; i < f.cells(); ++i) {
    double a = to_double(f.breakpoints[i]);
    double b = to_double(f.breakpoints[i + 1]);
    double c = to_double(f.values[i]);
    double m = to_double(f.slope(i));
    acc += integrate(
        [&](double x) {
          double t = c + m * (x - a);
          return m * phi.d_t(t, x) + phi.d_x(t, x);
        },
        a, b, per_piece);
  }
  return acc;
}

// Floating route for the product functions: same curve integral by adaptive
// Simpson, split at cutoff-knot pullbacks.  Serves as an independent check
// of the exact polynomial path.
inline double residual_tilde(const GraphField& gf, const ProductTest1D& phi, double tol) {
  const PwlFunction& f = gf.f;
  double acc = 0;
  for (std::size_t i = 0; i < f.cells(); ++i) {
    const Rational& a = f.breakpoints[i];
    const Rational& b = f.breakpoints[i + 1];
    const Rational& c = f.values[i];
    Rational m = f.slope(i);
    std::vector<Rational> cuts{a, b};
    for (const auto& knot : phi.psi.knots) {
      Rational x = a + (knot - c) / m;
      if (a < x && x < b) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    double ad = to_double(a), cd = to_double(c), md = to_double(m);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
      acc += integrate(
          [&](double x) {
            double t = cd + md * (x - ad);
            return md * phi.d_t(t, x) + phi.d_x(t, x);
          },
          to_double(cuts[s]), to_double(cuts[s + 1]), tol / static_cast<double>(f.cells()));
  }
  return acc;
}

// --- residual of the corrected family -----------------------------------------
//
// adds the two constant correction trajectories; the total weak-form pairing
// of the corrected solution with zero initial data.

namespace detail {

inline void check_support_product(const ProductTest1D& phi, const Rational& T) {
  if (phi.psi(T) != 0)
    throw SupportViolation("test function " + phi.id + " does not vanish at t = T");
}

inline void check_support_bump(const BumpTest1D& phi, double T) {
  if (!(phi.tc + phi.rt <= T) || !(phi.tc - phi.rt >= 0))
    throw SupportViolation("bump " + phi.id + " not supported inside [0, T)");
}

}  // namespace detail

inline Rational residual_full(const GraphField& gf, const ProductTest1D& phi) {
  detail::check_support_product(phi, gf.T);
  PiecewisePoly dpsi = phi.psi.derivative();
  // d/dt phi(t, x0) as a piecewise polynomial in t
  auto time_integral = [&](const Rational& from, const Rational& x0) {
    Poly q_slice = phi.q.slice_x(x0);
    Poly qt_slice = phi.q.d_t().slice_x(x0);
    Rational acc(0);
    for (std::size_t i = 0; i < phi.psi.pieces.size(); ++i) {
      Rational lo = std::max(from, phi.psi.knots[i]);
      Rational hi = std::min(gf.T, phi.psi.knots[i + 1]);
      if (lo >= hi) continue;
      Poly integrand = qt_slice * phi.psi.pieces[i] + q_slice * dpsi.pieces[i];
      acc += integrand.integral(lo, hi);
    }
    return acc;
  };
  return residual_tilde(gf, phi) + time_integral(gf.f(Rational(1)), Rational(1)) -
         time_integral(gf.f(Rational(0)), Rational(0));
}

inline double residual_full(const GraphField& gf, const BumpTest1D& phi, double tol) {
  double T = to_double(gf.T);
  detail::check_support_bump(phi, T);
  double f1 = to_double(gf.f(Rational(1)));
  double f0 = to_double(gf.f(Rational(0)));
  double corr1 = integrate([&](double t) { return phi.d_t(t, 1.0); }, f1, T, tol / 3);
  double corr0 = integrate([&](double t) { return phi.d_t(t, 0.0); }, f0, T, tol / 3);
  return residual_tilde(gf, phi, tol / 3) + corr1 - corr0;
}

// --- report rows ---------------------------------------------------------------

struct ResidualRow {
  int stage;
  std::string test_id;
  std::string mode;  // "exact" | "float"
  double residual_tilde_value;
  double defect_value;
  double residual_full_value;
  double tol;  // 0 for exact rows
  bool exact_match;
};

inline ResidualRow evaluate_residual(const GraphField& gf, int stage, const ProductTest1D& phi) {
  Rational rt = residual_tilde(gf, phi);
  Rational d = defect(gf, phi);
  Rational rf = residual_full(gf, phi);
  return ResidualRow{stage,          phi.id,        "exact", to_double(rt), to_double(d),
                     to_double(rf),  0.0,           rt == d && rf == 0};
}

inline ResidualRow evaluate_residual(const GraphField& gf, int stage, const BumpTest1D& phi,
                                     double tol) {
  double rt = residual_tilde(gf, phi, tol);
  double d = defect(gf, phi);
  double rf = residual_full(gf, phi, tol);
  return ResidualRow{stage, phi.id, "float", rt, d, rf, tol, false};
}

}  // namespace ceq
