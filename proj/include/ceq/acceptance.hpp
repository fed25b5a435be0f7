// The project's verification gate: nine numbered criteria covering the exact
// mass identity, level multiplicity growth, the weak-form residual
// identities, the cone gap, monotone-run analysis, the continuous flow
// machinery, finite-stage non-uniqueness, and the 3D construction's geometry
// and integral identities.  Each criterion produces one report row.
#pragma once

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ceq/flow1d.hpp"
#include "ceq/measure.hpp"
#include "ceq/octa.hpp"
#include "ceq/pwl.hpp"
#include "ceq/rational.hpp"
#include "ceq/report.hpp"
#include "ceq/residual.hpp"
#include "ceq/stage.hpp"

namespace ceq::acceptance {

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline PwlFunction stage_f(const StageState& s) { return integrate_slopes(s.slopes, Rational(2)); }

// Stage cache so criteria do not rebuild the construction repeatedly.
inline const StageState& stage(int K) {
  static std::vector<StageState> cache = [] {
    std::vector<StageState> v;
    v.push_back(init_stage());
    return v;
  }();
  while (static_cast<int>(cache.size()) <= K) cache.push_back(advance(cache.back()));
  return cache[static_cast<std::size_t>(K)];
}

}  // namespace detail

// AC1: the time integral of the total variation of the uncorrected family is
// exactly 1 at every stage K <= 12, in under five seconds.
inline ReportRow criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  for (int K = 0; K <= 12 && pass; ++K) {
    PwlFunction f = detail::stage_f(detail::stage(K));
    pass = tv_time_integral(f) == 1 && area_formula_check(f) == 1;
  }
  double secs = detail::seconds_since(t0);
  pass = pass && secs < 5.0;
  std::ostringstream os;
  os << "TV time integral = 1/1 exactly for K=0..12; " << format_double(secs) << " s (limit 5)";
  return {"AC1", "acceptance", "exact L1 mass identity", pass, os.str(), secs};
}

// AC2: level multiplicity checkpoints 1, 3, 5 at K = 0, 1, 2; non-decreasing
// through K = 12; and multiplicity >= 11 at some stage found by the exact
// sweep (searched up to the stage cap).
inline ReportRow criterion_2(int sweep_cap = 64) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<int> counts;
  bool monotone = true;
  int first_target = -1;
  for (int K = 0; K <= sweep_cap; ++K) {
    auto [c, w] = sup_preimage_count(detail::stage_f(detail::stage(K)));
    if (!counts.empty() && c < counts.back() && K <= 12) monotone = false;
    counts.push_back(c);
    if (c >= 11 && first_target < 0) first_target = K;
  }
  bool checkpoints = counts[0] == 1 && counts[1] == 3 && counts[2] == 5;
  bool target = first_target >= 0;
  std::ostringstream os;
  os << "counts(K=0,1,2)=" << counts[0] << "," << counts[1] << "," << counts[2]
     << "; non-decreasing<=12: " << (monotone ? "yes" : "no") << "; max count "
     << *std::max_element(counts.begin(), counts.end()) << " within K<=" << sweep_cap << "; ";
  if (target)
    os << ">=11 first reached at K=" << first_target;
  else
    os << ">=11 not reached: multiplicity stalls at 7 from K=12 (a +2 step requires a dyadic "
          "center inside a level window of width eps_12 ~ 5e-28, i.e. enumeration index ~2^88)";
  return {"AC2", "acceptance", "level multiplicity growth", checkpoints && monotone && target,
          os.str(), detail::seconds_since(t0)};
}

// AC3: the uncorrected residual equals the boundary defect exactly on the
// polynomial-product suite for K <= 8 (and the corrected residual is exactly
// zero); smooth bumps agree within 1e-8 at quadrature tolerance 1e-10.
inline ReportRow criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  auto products = canonical_product_suite();
  auto bumps = canonical_bump_suite();
  bool exact_ok = products.size() >= 10;
  bool float_ok = true;
  for (int K = 0; K <= 8; ++K) {
    GraphField gf(detail::stage_f(detail::stage(K)));
    for (const auto& phi : products) {
      if (residual_tilde(gf, phi) != defect(gf, phi)) exact_ok = false;
      if (residual_full(gf, phi) != 0) exact_ok = false;
    }
    for (const auto& phi : bumps) {
      if (std::abs(residual_tilde(gf, phi, 1e-10) - defect(gf, phi)) > 1e-8) float_ok = false;
      if (std::abs(residual_full(gf, phi, 1e-10)) > 1e-8) float_ok = false;
    }
  }
  std::ostringstream os;
  os << products.size() << " exact test functions x K=0..8: residual==defect and full==0 "
     << (exact_ok ? "exact" : "MISMATCH") << "; " << bumps.size() << " bumps within 1e-8: "
     << (float_ok ? "yes" : "no");
  return {"AC3", "acceptance", "defect identity and zero-data solution", exact_ok && float_ok,
          os.str(), detail::seconds_since(t0)};
}

// AC4: the cone-gap inequality over every breakpoint pair with positive
// masses, exactly, for K <= 8.
inline ReportRow criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  long checked = 0;
  for (int K = 0; K <= 8; ++K) {
    const StageState& s = detail::stage(K);
    PwlFunction f = detail::stage_f(s);
    const auto& bp = f.breakpoints;
    for (std::size_t i = 0; i < bp.size() && pass; ++i)
      for (std::size_t j = i + 1; j < bp.size() && pass; ++j) {
        auto [lhs, rhs] = cone_gap(f, s, bp[i], bp[j]);
        auto [p, n] = interval_mass(s, bp[i], bp[j]);
        if (lhs > rhs) pass = false;
        if (p > 0 && n > 0 && !(lhs < bp[j] - bp[i])) pass = false;
        ++checked;
      }
  }
  std::ostringstream os;
  os << checked << " breakpoint pairs over K=0..8, all exact";
  return {"AC4", "acceptance", "cone-gap inequality", pass, os.str(),
          detail::seconds_since(t0)};
}

// AC5: longest-run length is non-increasing through K = 12 with the
// enumerated stage values 1, 5/12, 5/12 at K = 0, 1, 2, and the constructive
// monotone-interval search lands inside a brute-force run at every stage.
inline ReportRow criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  Rational prev(2);
  std::vector<Rational> firsts;
  for (int K = 0; K <= 12; ++K) {
    PwlFunction f = detail::stage_f(detail::stage(K));
    auto [len, iv] = max_monotone_run(f);
    if (len > prev) pass = false;
    prev = len;
    if (K <= 2) firsts.push_back(len);

    auto [count, w] = sup_preimage_count(f);
    Interval mono = find_monotone_interval(f, count);
    bool inside = false;
    for (const auto& r : monotone_runs(f))
      if (r.lo <= mono.lo && mono.hi <= r.hi && r.lo < r.hi) inside = true;
    if (!inside || !(mono.lo < mono.hi)) pass = false;
  }
  pass = pass && firsts[0] == 1 && firsts[1] == Rational(5, 12) && firsts[2] == Rational(5, 12);
  std::ostringstream os;
  os << "run lengths " << to_string(firsts[0]) << ", " << to_string(firsts[1]) << ", "
     << to_string(firsts[2]) << " at K=0,1,2; non-increasing through K=12; monotone witness "
        "verified at every stage";
  return {"AC5", "acceptance", "monotone-run monotonicity", pass, os.str(),
          detail::seconds_since(t0)};
}

// AC6: continuous-field flow machinery on the logistic field.
inline ReportRow criterion_6() {
  auto t0 = std::chrono::steady_clock::now();
  ContinuousField1D cf;
  cf.b = [](double x) { return x * (1.0 - x); };
  cf.alpha = 0.0;
  cf.beta = 1.0;
  cf.bound = 0.25;

  auto closed = [](double t, double x) {
    return 1.0 / (1.0 + std::exp(-(std::log(x / (1.0 - x)) + t)));
  };

  double worst_closed = 0;
  for (int i = 1; i <= 50; ++i) {
    double x = 0.08 + 0.84 * i / 51.0;
    worst_closed = std::max(worst_closed, std::abs(flow(cf, 0.7, x) - closed(0.7, x)));
  }

  double worst_semi = 0;
  for (int i = 1; i <= 100; ++i) {
    double x = 0.1 + 0.8 * i / 101.0;
    worst_semi =
        std::max(worst_semi, std::abs(flow(cf, 0.25, flow(cf, 0.35, x)) - flow(cf, 0.6, x)));
  }

  AtomicMeasure atom;
  atom.add(Rational(1, 2), +1);
  auto omega = [](double x) { return bump_profile((x - 0.6) / 0.25); };
  double transport = transport_test(cf, omega, 0.7, atom);
  double push = std::abs(pushforward_pair(cf, 0.8, atom, omega) - omega(closed(0.8, 0.5)));

  bool pass = worst_closed <= 1e-9 && worst_semi <= 1e-8 && transport <= 1e-7 && push <= 1e-7;
  std::ostringstream os;
  os << "closed-form dev " << format_double(worst_closed) << " (50 pts; tol 1e-9); semigroup dev "
     << format_double(worst_semi) << " (100 pts; tol 1e-8); transport residual "
     << format_double(transport) << " (tol 1e-7); pushforward dev " << format_double(push)
     << " (tol 1e-7)";
  return {"AC6", "acceptance", "continuous flow machinery", pass, os.str(),
          detail::seconds_since(t0)};
}

// AC7: two distinct characteristics through (t, x) = (17/8, 1/8) at stage 1,
// both verifying exactly.
inline ReportRow criterion_7() {
  auto t0 = std::chrono::steady_clock::now();
  const StageState& s = detail::stage(1);
  PwlFunction f = detail::stage_f(s);
  GraphField gf(f);
  Characteristic riding = branch_characteristic(s, f, Rational(1, 8), Rational(1, 3));
  Characteristic constant = branch_characteristic(s, f, Rational(1, 8), Rational(1, 8));
  Rational meet(17, 8);
  bool pass = riding.at(meet) == Rational(1, 8) && constant.at(meet) == Rational(1, 8) &&
              verify_characteristic(riding, gf) == 0 && verify_characteristic(constant, gf) == 0 &&
              riding.at(Rational(3)) != constant.at(Rational(3));
  return {"AC7", "acceptance", "finite-stage non-uniqueness demo", pass,
          "two verified curves through (17/8, 1/8), residual exactly 0, diverging afterwards",
          detail::seconds_since(t0)};
}

// AC8: frame geometry and slice bounds of the 3D construction.
inline ReportRow criterion_8(unsigned seed = 0xCE9) {
  auto t0 = std::chrono::steady_clock::now();
  bool frame_ok = Frame3::dir_dot(0, 1) == 0 && Frame3::dir_dot(0, 2) == 0 &&
                  Frame3::dir_dot(1, 2) == 0 && Frame3::dir_dot(0, 0) == 2 &&
                  Frame3::dir_dot(1, 1) == 6 && Frame3::dir_dot(2, 2) == 3;

  OctField of(detail::stage(3));
  std::mt19937_64 rng(seed);
  auto rnd = [&](long long den) {
    return Rational(static_cast<long long>(rng() % (2 * den + 1)) - den, den);
  };
  bool b3_ok = true;
  int sampled = 0;
  while (sampled < 10000) {
    RVec3 p;
    if (sampled % 2 == 0) {
      p = {rnd(499) * 2, rnd(503) * 2, rnd(509) * 2};
    } else {
      Rational a = (rnd(997) + 1) / 2, b = (rnd(1009) + 1) / 2;
      if (a <= 0 || b <= 0 || a + b >= 1 || a + b == 1) continue;
      int s1 = (rng() & 1) ? 1 : -1, s2 = (rng() & 1) ? 1 : -1, s3 = (rng() & 1) ? 1 : -1;
      p = {s1 * a, s2 * b, s3 * (1 - a - b)};
    }
    FieldSample fs = field_B(of, p);
    if (!(fs.on_surface && fs.u == 0) && fs.B.t != 1.0) b3_ok = false;
    ++sampled;
  }

  double peak = 4.0 * std::sqrt(3.0);
  double worst_tv = 0, sup_tv = 0;
  for (int i = 0; i <= 100; ++i) {
    double t = -1.0 + 0.02 * i;
    double reference = Frame3::alpha() * 4.0 * std::sqrt(2.0) * (1.0 - std::abs(t));
    worst_tv = std::max(worst_tv, std::abs(slice_tv(t) - reference));
    sup_tv = std::max(sup_tv, slice_tv(t));
  }
  bool tv_ok = worst_tv <= 1e-12 && sup_tv <= peak + 1e-12 &&
               std::abs(slice_tv(0.0) - peak) <= 1e-12;

  bool pass = frame_ok && b3_ok && tv_ok;
  std::ostringstream os;
  os << "frame dot products exact; B_3=1 at 10000 points; slice TV matches the closed form "
        "within 1e-12 on 101 levels, peak "
     << format_double(slice_tv(0.0));
  return {"AC8", "acceptance", "frame geometry and uniform bounds", pass, os.str(),
          detail::seconds_since(t0)};
}

// AC9: the weak identity of the 3D construction: Gauss-Green strip sums,
// edge cancellation, and the surface divergence pairing, at stage 6.
inline ReportRow criterion_9() {
  auto t0 = std::chrono::steady_clock::now();
  bool gg_ok = true;
  for (int K = 0; K <= 6; ++K) {
    OctField of(detail::stage(K));
    for (const auto& phi : canonical_plane_suite()) {
      auto [lhs, rhs] = face_gauss_green(of, phi, 1e-12);
      if (std::abs(lhs - rhs) > 1e-8) gg_ok = false;
    }
  }

  OctField of6(detail::stage(6));
  SpaceTest one{"one", [](Vec3) { return 1.0; }, [](Vec3) { return Vec3{0, 0, 0}; }};
  bool edge_ok = std::abs(edge_cancellation(of6, one, 1e-12)) <= 1e-10;
  double worst_edge = 0;
  for (const auto& phi : canonical_space_suite())
    worst_edge = std::max(worst_edge, std::abs(edge_cancellation(of6, phi, 1e-12)));
  edge_ok = edge_ok && worst_edge <= 1e-8;

  double worst_div = 0;
  for (int K = 0; K <= 6; ++K) {
    OctField of(detail::stage(K));
    for (const auto& phi : canonical_space_suite())
      worst_div = std::max(worst_div, std::abs(divergence_pairing(of, phi, 1e-8)));
  }
  bool div_ok = worst_div <= 1e-6;

  double secs = detail::seconds_since(t0);
  bool pass = gg_ok && edge_ok && div_ok && secs < 60.0;
  std::ostringstream os;
  os << "Gauss-Green K=0..6 within 1e-8; edge cancellation worst " << format_double(worst_edge)
     << "; divergence pairing worst " << format_double(worst_div)
     << " (5 functions, K=0..6; tol 1e-6); " << format_double(secs) << " s (limit 60)";
  return {"AC9", "acceptance", "surface weak identity", pass, os.str(), secs};
}

inline Report run_all() {
  Report r;
  r.rows = {criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(),
            criterion_6(), criterion_7(), criterion_8(), criterion_9()};
  return r;
}

}  // namespace ceq::acceptance
