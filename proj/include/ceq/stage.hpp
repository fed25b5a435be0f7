// Iterative construction of the alternating sign pattern on [0,1]: at every
// stage the next dyadic rational q (breadth-first order 1/2, 1/4, 3/4, 1/8, ...)
// receives a small interval I = (q - eps/2, q + eps/2) on which the sign is
// flipped.  All arithmetic is exact; interval endpoints carry a factor 3 in
// the denominator and therefore never collide with later dyadic centers.
#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ceq/errors.hpp"
#include "ceq/rational.hpp"

namespace ceq {

// Piecewise-constant sign pattern on [0,1].  signs[i] is the value on the
// open cell (breakpoints[i], breakpoints[i+1]); the value on the finite
// breakpoint set itself is 0 by convention.
struct SlopeFunction {
  std::vector<Rational> breakpoints;  // sorted, first 0, last 1
  std::vector<int> signs;             // one per cell, each +1 or -1

  std::size_t cells() const { return signs.size(); }

  // Sign at a point: 0 on breakpoints, cell sign otherwise.
  int at(const Rational& x) const {
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
    if (it != breakpoints.end() && *it == x) return 0;
    if (it == breakpoints.begin() || it == breakpoints.end()) return 0;  // outside [0,1]
    return signs[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
  }
};

struct Interval {
  Rational lo, hi;
  Rational width() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct StageState {
  int k = 0;
  std::vector<Rational> eps;      // eps[0..k], eps[0] = 1
  std::vector<Interval> flips;    // I_1..I_k in construction order
  std::vector<Rational> boundary; // E_k sorted: {0, 1} plus all flip endpoints
  SlopeFunction slopes;
};

// q_k for k >= 1: the k-th dyadic of (0,1) in breadth-first order.
inline Rational dyadic_center(int k) {
  assert(k >= 1);
  unsigned level = 0;
  std::uint64_t first = 1;  // index of 1/2^level's first entry
  while (first * 2 <= static_cast<std::uint64_t>(k)) {
    first *= 2;
    ++level;
  }
  std::uint64_t pos = static_cast<std::uint64_t>(k) - first;  // 0-based within level
  return Rational(BigInt(2 * pos + 1), BigInt(1) << (level + 1));
}

inline StageState init_stage() {
  StageState s;
  s.k = 0;
  s.eps = {Rational(1)};
  s.boundary = {Rational(0), Rational(1)};
  s.slopes.breakpoints = {Rational(0), Rational(1)};
  s.slopes.signs = {+1};
  return s;
}

namespace detail {

// True iff the open interval (lo, hi) misses every element of the sorted set.
inline bool misses_sorted(const std::vector<Rational>& set, const Rational& lo,
                          const Rational& hi) {
  auto it = std::upper_bound(set.begin(), set.end(), lo);
  return it == set.end() || *it >= hi;
}

}  // namespace detail

// One construction step.  Picks q_{k+1}, the maximal admissible
// eps_{k+1} = 2^-j / 3 (j >= 1) with eps_{k+1} < 2^-(k+1) eps_k and
// (q - eps, q + eps) disjoint from E_k, then flips (q - eps/2, q + eps/2).
inline StageState advance(const StageState& s) {
  StageState next = s;
  int k1 = s.k + 1;
  Rational q = dyadic_center(k1);

  // Smallest j honouring the strict shrink bound; grow j further until the
  // double-width interval clears E_k.  Both conditions are monotone in j, so
  // the first admissible j gives the maximal eps of the required form.
  Rational bound = pow2_neg(static_cast<unsigned>(k1)) * s.eps.back();
  unsigned j = 1;
  while (pow2_neg(j) / 3 >= bound) ++j;
  Rational eps = pow2_neg(j) / 3;
  // E_k contains 0 and 1, so this check also keeps the interval inside (0,1).
  int guard = 0;
  while (!detail::misses_sorted(s.boundary, q - eps, q + eps)) {
    ++j;
    eps = pow2_neg(j) / 3;
    if (++guard > 100000) throw Error("advance: no admissible eps found");
  }

  Rational a = q - eps / 2;
  Rational b = q + eps / 2;

  next.k = k1;
  next.eps.push_back(eps);
  next.flips.push_back(Interval{a, b});

  // Insert the new cell boundaries; both must land inside one existing cell.
  auto& bp = next.slopes.breakpoints;
  auto& sg = next.slopes.signs;
  auto it = std::upper_bound(bp.begin(), bp.end(), a);
  std::size_t cell = static_cast<std::size_t>(it - bp.begin()) - 1;
  assert(cell + 1 < bp.size() && bp[cell] < a && b < bp[cell + 1]);
  int host = sg[cell];
  bp.insert(bp.begin() + static_cast<std::ptrdiff_t>(cell) + 1, {a, b});
  sg.insert(sg.begin() + static_cast<std::ptrdiff_t>(cell) + 1, {-host, host});

  auto& e = next.boundary;
  e.insert(std::upper_bound(e.begin(), e.end(), a), a);
  e.insert(std::upper_bound(e.begin(), e.end(), b), b);
  return next;
}

// Stage-K state; deterministic.  The cap bounds the denominator blow-up
// (digit counts grow quadratically in K).
inline StageState build(int K, int max_stage = 256) {
  if (K < 0) throw std::invalid_argument("build: K must be >= 0");
  if (K > max_stage) throw Error("build: stage cap exceeded (" + std::to_string(K) + " > " +
                                 std::to_string(max_stage) + ")");
  StageState s = init_stage();
  for (int i = 0; i < K; ++i) s = advance(s);
  return s;
}

// Exact Lebesgue measure of {slopes = +1} and {slopes = -1} inside (a, b).
inline std::pair<Rational, Rational> interval_mass(const StageState& s, const Rational& a,
                                                   const Rational& b) {
  if (!(Rational(0) <= a && a < b && b <= Rational(1)))
    throw std::invalid_argument("interval_mass: need 0 <= a < b <= 1");
  Rational p(0), n(0);
  const auto& bp = s.slopes.breakpoints;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    Rational lo = std::max(bp[i], a);
    Rational hi = std::min(bp[i + 1], b);
    if (lo >= hi) continue;
    (s.slopes.signs[i] > 0 ? p : n) += hi - lo;
  }
  return {p, n};
}

// eps_k / 2: all later flips together fit inside this much measure.
inline Rational tail_bound(const StageState& s) { return s.eps.back() / 2; }

// --- serialization ---------------------------------------------------------
//
// {"k": K, "eps": ["1/1", ...], "flips": [["a", "b"], ...]}
// Rationals in canonical "num/den" form; round-trips are bit-exact.

inline nlohmann::json stage_to_json(const StageState& s) {
  nlohmann::json j;
  j["k"] = s.k;
  auto& eps = j["eps"] = nlohmann::json::array();
  for (const auto& e : s.eps) eps.push_back(to_string(e));
  auto& flips = j["flips"] = nlohmann::json::array();
  for (const auto& f : s.flips)
    flips.push_back(nlohmann::json::array({to_string(f.lo), to_string(f.hi)}));
  return j;
}

inline StageState stage_from_json(const nlohmann::json& j) {
  StageState s = init_stage();
  int k = j.at("k").get<int>();
  const auto& eps = j.at("eps");
  const auto& flips = j.at("flips");
  if (static_cast<int>(eps.size()) != k + 1 || static_cast<int>(flips.size()) != k)
    throw Error("stage_from_json: inconsistent lengths");
  for (int i = 1; i <= k; ++i) {
    s = advance(s);
    if (s.eps[static_cast<std::size_t>(i)] != parse_rational(eps[i].get<std::string>()) ||
        s.flips[static_cast<std::size_t>(i - 1)].lo !=
            parse_rational(flips[i - 1][0].get<std::string>()) ||
        s.flips[static_cast<std::size_t>(i - 1)].hi !=
            parse_rational(flips[i - 1][1].get<std::string>()))
      throw Error("stage_from_json: document disagrees with deterministic construction");
  }
  if (parse_rational(eps[0].get<std::string>()) != Rational(1))
    throw Error("stage_from_json: eps[0] must be 1");
  return s;
}

}  // namespace ceq
