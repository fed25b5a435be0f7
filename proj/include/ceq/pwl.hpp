// Exact piecewise-linear functions on [0,1]: evaluation, level-set preimage
// enumeration, monotone-run analysis, the constructive somewhere-monotone
// search, and the two-route area-formula identity.
#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ceq/errors.hpp"
#include "ceq/rational.hpp"
#include "ceq/stage.hpp"

namespace ceq {

// Continuous piecewise-linear function: value v_i at breakpoint x_i, affine
// in between.  General rational slopes are allowed; stage functions have
// slope +-1 on every cell.
struct PwlFunction {
  std::vector<Rational> breakpoints;
  std::vector<Rational> values;

  std::size_t cells() const { return breakpoints.size() - 1; }

  Rational slope(std::size_t cell) const {
    return (values[cell + 1] - values[cell]) / (breakpoints[cell + 1] - breakpoints[cell]);
  }

  Rational domain_lo() const { return breakpoints.front(); }
  Rational domain_hi() const { return breakpoints.back(); }

  Rational operator()(const Rational& x) const {
    if (x < domain_lo() || x > domain_hi())
      throw DomainViolation("pwl eval outside domain");
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    std::size_t i = static_cast<std::size_t>(it - breakpoints.begin());
    if (i == breakpoints.size()) return values.back();
    if (i == 0) return values.front();
    --i;
    return values[i] + slope(i) * (x - breakpoints[i]);
  }

  Rational min_value() const { return *std::min_element(values.begin(), values.end()); }
  Rational max_value() const { return *std::max_element(values.begin(), values.end()); }

  // True if x is one of the breakpoints.
  bool is_breakpoint(const Rational& x) const {
    return std::binary_search(breakpoints.begin(), breakpoints.end(), x);
  }

  // Sign of the slope at a non-breakpoint x (0 on breakpoints / outside).
  int slope_sign_at(const Rational& x) const {
    if (x <= domain_lo() || x >= domain_hi() || is_breakpoint(x)) return 0;
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    return sign(slope(static_cast<std::size_t>(it - breakpoints.begin()) - 1));
  }
};

// Exact antiderivative of a sign pattern, anchored at base on the left end.
inline PwlFunction integrate_slopes(const SlopeFunction& s, const Rational& base) {
  PwlFunction f;
  f.breakpoints = s.breakpoints;
  f.values.reserve(s.breakpoints.size());
  f.values.push_back(base);
  for (std::size_t i = 0; i < s.signs.size(); ++i)
    f.values.push_back(f.values.back() + s.signs[i] * (s.breakpoints[i + 1] - s.breakpoints[i]));
  return f;
}

struct Preimage {
  Rational location;
  int slope_sign;  // +1 or -1
  friend bool operator==(const Preimage&, const Preimage&) = default;
};

// All solutions of f(x) = t, sorted by location.  Rejects critical levels
// (t equal to any breakpoint value) -- the measures are only needed a.e.
inline std::vector<Preimage> preimages(const PwlFunction& f, const Rational& t) {
  for (const auto& v : f.values)
    if (v == t) throw CriticalLevel("level " + to_string(t) + " hits a breakpoint value");
  std::vector<Preimage> out;
  for (std::size_t i = 0; i < f.cells(); ++i) {
    const Rational& va = f.values[i];
    const Rational& vb = f.values[i + 1];
    if ((va < t && t < vb) || (vb < t && t < va)) {
      Rational sl = f.slope(i);
      out.push_back(Preimage{f.breakpoints[i] + (t - va) / sl, sign(sl)});
    }
  }
  return out;
}

struct LevelWindow {
  Rational lo, hi;  // open interval of levels
  friend bool operator==(const LevelWindow&, const LevelWindow&) = default;
};

namespace detail {

inline std::vector<Rational> sorted_distinct_values(const PwlFunction& f) {
  std::vector<Rational> v = f.values;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Number of cells strictly crossing level t.
inline int crossing_count(const PwlFunction& f, const Rational& t) {
  int c = 0;
  for (std::size_t i = 0; i < f.cells(); ++i) {
    const Rational& va = f.values[i];
    const Rational& vb = f.values[i + 1];
    if ((va < t && t < vb) || (vb < t && t < va)) ++c;
  }
  return c;
}

}  // namespace detail

// Essential supremum over levels t of #f^-1(t), by sweeping the finitely
// many gaps between consecutive critical values (the count is constant on
// each gap).  Returns the first gap achieving the maximum.
inline std::pair<int, LevelWindow> sup_preimage_count(const PwlFunction& f) {
  std::vector<Rational> crit = detail::sorted_distinct_values(f);
  int best = 0;
  LevelWindow win{crit.front(), crit.back()};
  for (std::size_t i = 0; i + 1 < crit.size(); ++i) {
    Rational mid = (crit[i] + crit[i + 1]) / 2;
    int c = detail::crossing_count(f, mid);
    if (c > best) {
      best = c;
      win = LevelWindow{crit[i], crit[i + 1]};
    }
  }
  if (crit.size() == 1) return {0, LevelWindow{crit.front(), crit.front()}};
  return {best, win};
}

struct Run {
  Rational lo, hi;
  int slope_sign;
  Rational length() const { return hi - lo; }
};

// Maximal intervals of constant slope sign.  Cells of equal sign merge;
// zero-slope cells separate runs and are not themselves runs.
inline std::vector<Run> monotone_runs(const PwlFunction& f) {
  std::vector<Run> runs;
  for (std::size_t i = 0; i < f.cells(); ++i) {
    int s = sign(f.slope(i));
    if (s == 0) continue;
    if (!runs.empty() && runs.back().slope_sign == s && runs.back().hi == f.breakpoints[i])
      runs.back().hi = f.breakpoints[i + 1];
    else
      runs.push_back(Run{f.breakpoints[i], f.breakpoints[i + 1], s});
  }
  return runs;
}

// Longest run (first one on ties).
inline std::pair<Rational, Interval> max_monotone_run(const PwlFunction& f) {
  auto runs = monotone_runs(f);
  if (runs.empty()) throw Error("max_monotone_run: no nonzero-slope cell");
  const Run* best = &runs.front();
  for (const auto& r : runs)
    if (r.length() > best->length()) best = &r;
  return {best->length(), Interval{best->lo, best->hi}};
}

// Constructive somewhere-monotone search: pick a level t with the maximal
// preimage count inside a window clear of critical values, isolate the
// branch through each preimage, shrink to the sub-level-window
// [t - eps, t + eps], and return the first branch interval.  On it every
// level of the window has exactly one preimage, so the function is strictly
// monotone there.
inline Interval find_monotone_interval(const PwlFunction& f, int M) {
  auto [count, window] = sup_preimage_count(f);
  if (count > M)
    throw HypothesisViolated("preimage count " + std::to_string(count) + " exceeds bound " +
                             std::to_string(M));
  if (count == 0) throw Error("find_monotone_interval: constant function");
  Rational t = (window.lo + window.hi) / 2;
  Rational eps = std::min(t - window.lo, window.hi - t) / 2;

  auto pre = preimages(f, t);
  assert(static_cast<int>(pre.size()) == count);
  const Preimage& first = pre.front();

  // Run containing the first preimage.
  auto runs = monotone_runs(f);
  const Run* run = nullptr;
  for (const auto& r : runs)
    if (r.lo <= first.location && first.location <= r.hi) {
      run = &r;
      break;
    }
  assert(run != nullptr);

  // Invert the two shrunk levels along the run (strictly monotone there).
  auto invert_on_run = [&](const Rational& level) {
    for (std::size_t i = 0; i < f.cells(); ++i) {
      if (f.breakpoints[i] < run->lo || f.breakpoints[i + 1] > run->hi) continue;
      const Rational& va = f.values[i];
      const Rational& vb = f.values[i + 1];
      if ((va <= level && level <= vb) || (vb <= level && level <= va))
        return f.breakpoints[i] + (level - va) / f.slope(i);
    }
    throw Error("find_monotone_interval: level escaped the run");
  };
  Rational a = invert_on_run(t - eps);
  Rational b = invert_on_run(t + eps);
  if (b < a) std::swap(a, b);
  assert(run->lo <= a && b <= run->hi && a < b);
  return Interval{a, b};
}

// Integral of the preimage-count function over levels, computed two ways:
// (a) sum over critical-value gaps of width * count, (b) integral of |f'|
// over the domain.  Equality is the exact area formula; a mismatch means a
// broken sweep and is a fatal internal error.
inline Rational area_formula_check(const PwlFunction& f) {
  std::vector<Rational> crit = detail::sorted_distinct_values(f);
  Rational by_levels(0);
  for (std::size_t i = 0; i + 1 < crit.size(); ++i) {
    Rational mid = (crit[i] + crit[i + 1]) / 2;
    by_levels += (crit[i + 1] - crit[i]) * detail::crossing_count(f, mid);
  }
  Rational by_slopes(0);
  for (std::size_t i = 0; i < f.cells(); ++i)
    by_slopes += abs(f.values[i + 1] - f.values[i]);
  if (by_levels != by_slopes)
    throw Error("area formula mismatch: " + to_string(by_levels) + " vs " + to_string(by_slopes));
  return by_levels;
}

// Quantitative core of the uniqueness argument: over (x, y) the function can
// climb at most the unbalanced part of the sign masses, so
// |f(y) - f(x)| = (y - x) - 2 min(p, n) for stage functions.  Returns
// (|f(y)-f(x)|, (y-x) - 2 min(p,n)).
inline std::pair<Rational, Rational> cone_gap(const PwlFunction& f, const StageState& s,
                                              const Rational& x, const Rational& y) {
  if (!(Rational(0) <= x && x < y && y <= Rational(1)))
    throw std::invalid_argument("cone_gap: need 0 <= x < y <= 1");
  auto [p, n] = interval_mass(s, x, y);
  Rational lhs = abs(f(y) - f(x));
  Rational rhs = (y - x) - 2 * std::min(p, n);
  return {lhs, rhs};
}

// Graph polyline {(f(x), x)} as CSV: exact rational columns plus floats.
// seg_sign annotates the segment opened by the row (empty on the last row).
inline std::string polyline_csv(const PwlFunction& f) {
  std::ostringstream os;
  os << "t,x,t_float,x_float,seg_sign\n";
  for (std::size_t i = 0; i < f.breakpoints.size(); ++i) {
    os << to_string(f.values[i]) << ',' << to_string(f.breakpoints[i]) << ','
       << format_double(to_double(f.values[i])) << ','
       << format_double(to_double(f.breakpoints[i])) << ',';
    if (i + 1 < f.breakpoints.size()) os << (sign(f.slope(i)) >= 0 ? '+' : '-');
    os << '\n';
  }
  return os.str();
}

}  // namespace ceq
