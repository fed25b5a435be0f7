// Flow machinery for continuous 1D fields (time-change construction
// F, F^-1, X) and finite-stage characteristics of the graph field, including
// the non-uniqueness branch that rides the graph between two constant
// trajectories.
#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ceq/errors.hpp"
#include "ceq/measure.hpp"
#include "ceq/pwl.hpp"
#include "ceq/quadrature.hpp"
#include "ceq/rational.hpp"
#include "ceq/residual.hpp"

namespace ceq {

// Continuous field with one sign interval: b(alpha) = b(beta) = 0 and b > 0
// on (alpha, beta).  Quadrature is clamped away from the endpoints where
// 1/b blows up.
struct ContinuousField1D {
  std::function<double(double)> b;
  double alpha, beta;
  double bound;         // sup |b|
  double clamp = 1e-6;  // distance kept from alpha and beta, where 1/b blows up
  double quad_tol = 1e-12;

  double lo() const { return alpha + clamp; }
  double hi() const { return beta - clamp; }
};

// F(x) = int_{x0}^x dz / b(z), strictly increasing on (alpha, beta).
inline double F_of(const ContinuousField1D& cf, double x0, double x) {
  if (x0 < cf.lo() || x0 > cf.hi() || x < cf.lo() || x > cf.hi())
    throw DomainViolation("F_of: point outside clamped sign interval");
  double s = x >= x0 ? 1.0 : -1.0;
  double a = std::min(x0, x), b = std::max(x0, x);
  return s * integrate([&](double z) { return 1.0 / cf.b(z); }, a, b, cf.quad_tol);
}

// X(t, x) = F^-1(F(x) + t), with F^-1 by monotone bisection on the clamped
// interval.  Tolerance 1e-12 on x.  F is accumulated incrementally from the
// previous query point, so each step integrates only a short smooth piece.
inline double flow(const ContinuousField1D& cf, double t, double x) {
  if (x < cf.lo() || x > cf.hi()) throw DomainViolation("flow: x outside clamped sign interval");
  if (t == 0.0) return x;

  double y_ref = x, F_ref = 0.0;  // F measured from x, so the target is t
  auto F_at = [&](double y) {
    F_ref += F_of(cf, y_ref, y);
    y_ref = y;
    return F_ref;
  };

  // expand geometrically toward the relevant end until the target is bracketed
  double edge = t > 0 ? cf.hi() : cf.lo();
  double lo = x, hi = x, Flo = 0.0, Fhi = 0.0;
  double step = 1.0 / 64.0 * (cf.hi() - cf.lo());
  for (;;) {
    if (t > 0) {
      lo = hi;
      Flo = Fhi;
      hi = std::min(hi + step, edge);
      Fhi = F_at(hi);
      if (Fhi >= t) break;
      if (hi == edge) throw BracketFailure("flow: target outside clamped bracket");
    } else {
      hi = lo;
      Fhi = Flo;
      lo = std::max(lo - step, edge);
      Flo = F_at(lo);
      if (Flo <= t) break;
      if (lo == edge) throw BracketFailure("flow: target outside clamped bracket");
    }
    step *= 2;
  }

  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    if (F_at(mid) < t) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// <X(tau,.)# mubar, omega> : pushforward pairing of an atomic initial
// measure under the flow.
template <class Omega>
double pushforward_pair(const ContinuousField1D& cf, double tau, const AtomicMeasure& mubar,
                        Omega&& omega) {
  double acc = 0;
  for (const auto& a : mubar.atoms)
    acc += static_cast<double>(a.w) * omega(flow(cf, tau, to_double(a.x)));
  return acc;
}

// Transported test function phi(t, x) = omega(X(tau - t, x)) solves the
// adjoint transport equation, so t |-> <mu_t, phi(t, .)> is constant along
// the pushforward solution.  Returns the worst deviation of that pairing
// from its final value over a uniform grid of intermediate times.
template <class Omega>
double transport_test(const ContinuousField1D& cf, Omega&& omega, double tau,
                      const AtomicMeasure& mubar, int grid = 16) {
  double ref = pushforward_pair(cf, tau, mubar, omega);
  double worst = 0;
  for (int i = 0; i <= grid; ++i) {
    double t = tau * i / grid;
    double acc = 0;
    for (const auto& a : mubar.atoms) {
      double xt = flow(cf, t, to_double(a.x));          // mu_t atom position
      acc += static_cast<double>(a.w) * omega(flow(cf, tau - t, xt));  // phi(t, .) at it
    }
    worst = std::max(worst, std::abs(acc - ref));
  }
  return worst;
}

// --- characteristics of the graph field ---------------------------------------

// Piecewise-described curve: constant plateaus and graph-riding pieces with
// exact rational knots.  A ride starts at (t0, x0) and moves with slope
// dir/1 in (t, x) until t1.
struct CharacteristicPiece {
  Rational t0, t1;
  Rational x0;
  int dir;  // 0 constant, +1 or -1 graph ride

  Rational at(const Rational& t) const { return x0 + Rational(dir) * (t - t0); }
};

struct Characteristic {
  std::vector<CharacteristicPiece> pieces;

  Rational start_time() const { return pieces.front().t0; }
  Rational end_time() const { return pieces.back().t1; }

  Rational at(const Rational& t) const {
    for (const auto& p : pieces)
      if (p.t0 <= t && t <= p.t1) return p.at(t);
    throw DomainViolation("characteristic evaluated outside its time span");
  }
};

// The non-uniqueness branch: constant at x until t = f(x), ride the graph to
// y, constant afterwards.  Requires [x, y] inside one monotone run.
inline Characteristic branch_characteristic(const StageState& s, const PwlFunction& f,
                                            const Rational& x, const Rational& y) {
  if (f.breakpoints != s.slopes.breakpoints)
    throw std::invalid_argument("branch_characteristic: f does not match the stage state");
  if (x > y) throw std::invalid_argument("branch_characteristic: need x <= y");
  Characteristic g;
  Rational T(4);
  if (x == y) {
    g.pieces.push_back({Rational(0), T, x, 0});
    return g;
  }
  auto runs = monotone_runs(f);
  const Run* run = nullptr;
  for (const auto& r : runs)
    if (r.lo <= x && y <= r.hi) {
      run = &r;
      break;
    }
  if (run == nullptr) throw NotMonotoneRun("[x, y] spans more than one monotone run");
  Rational fx = f(x), fy = f(y);
  if (run->slope_sign > 0) {
    g.pieces.push_back({Rational(0), fx, x, 0});
    g.pieces.push_back({fx, fy, x, +1});  // x = x0 + (t - f(x)), i.e. f^{-1}(t)
    g.pieces.push_back({fy, T, y, 0});
  } else {
    g.pieces.push_back({Rational(0), fy, y, 0});
    g.pieces.push_back({fy, fx, y, -1});
    g.pieces.push_back({fx, T, x, 0});
  }
  return g;
}

// Checks (a) the Lipschitz bound, (b) the ODE against the field at rational
// sample times on every piece, (c) continuity at the knots.  Constant pieces
// must sit off the graph at sample times (the single graph crossing of a
// plateau is measure zero and skipped); rides must sit on the graph with the
// matching slope.  Returns the worst violation; exactly 0 for a valid curve.
inline Rational verify_characteristic(const Characteristic& g, const GraphField& gf,
                                      int samples = 7) {
  Rational worst(0);
  auto bump = [&](const Rational& v) {
    if (v > worst) worst = v;
  };
  for (std::size_t i = 0; i < g.pieces.size(); ++i) {
    const auto& p = g.pieces[i];
    // Lipschitz constant of the piece is |dir| <= 1 by representation.
    if (p.dir != 0 && p.dir != 1 && p.dir != -1) bump(Rational(1));
    if (i + 1 < g.pieces.size()) {
      const auto& nxt = g.pieces[i + 1];
      if (p.t1 != nxt.t0) bump(abs(p.t1 - nxt.t0));
      bump(abs(p.at(p.t1) - nxt.x0));
    }
    if (p.t1 <= p.t0) continue;
    for (int sidx = 1; sidx <= samples; ++sidx) {
      Rational t = p.t0 + (p.t1 - p.t0) * Rational(sidx, samples + 1);
      Rational x = p.at(t);
      if (p.dir == 0) {
        // skip the lone time where the plateau meets the graph
        if (x >= gf.f.domain_lo() && x <= gf.f.domain_hi() && gf.f(x) == t) continue;
        bump(abs(field_at(gf, t, x)));  // field must vanish off the graph
      } else {
        bump(abs(field_at(gf, t, x) - Rational(p.dir)));
      }
    }
  }
  return worst;
}

inline std::string characteristic_csv(const Characteristic& g, int samples_per_piece = 8) {
  std::ostringstream os;
  os << "t,x\n";
  for (const auto& p : g.pieces)
    for (int i = 0; i <= samples_per_piece; ++i) {
      Rational t = p.t0 + (p.t1 - p.t0) * Rational(i, samples_per_piece);
      os << format_double(to_double(t)) << ',' << format_double(to_double(p.at(t))) << '\n';
    }
  return os.str();
}

}  // namespace ceq
