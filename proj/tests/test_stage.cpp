#include <catch2/catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include "ceq/rational.hpp"
#include "ceq/stage.hpp"

using namespace ceq;

namespace {

Rational rat(long long n, long long d) { return Rational(n, d); }

// Independent oracle for the eps selection rule: scan a wide j range and
// keep the maximal admissible 2^-j / 3 instead of the first-hit search used
// by advance().
Rational oracle_eps(const StageState& prev, const Rational& q) {
  Rational bound = pow2_neg(static_cast<unsigned>(prev.k) + 1) * prev.eps.back();
  Rational best(0);
  for (unsigned j = 1; j <= 300; ++j) {
    Rational eps = pow2_neg(j) / 3;
    if (eps >= bound) continue;
    bool clear = true;
    for (const auto& e : prev.boundary)
      if (q - eps < e && e < q + eps) clear = false;
    if (clear && eps > best) best = eps;
  }
  return best;
}

}  // namespace

TEST_CASE("initial stage") {
  StageState s = init_stage();
  REQUIRE(s.k == 0);
  REQUIRE(s.eps == std::vector<Rational>{Rational(1)});
  REQUIRE(s.boundary == std::vector<Rational>{Rational(0), Rational(1)});
  REQUIRE(s.slopes.breakpoints == std::vector<Rational>{Rational(0), Rational(1)});
  REQUIRE(s.slopes.signs == std::vector<int>{+1});

  auto [p, n] = interval_mass(s, Rational(0), Rational(1));
  REQUIRE(p == 1);
  REQUIRE(n == 0);
  REQUIRE(tail_bound(s) == rat(1, 2));
}

TEST_CASE("dyadic enumeration is breadth-first") {
  REQUIRE(dyadic_center(1) == rat(1, 2));
  REQUIRE(dyadic_center(2) == rat(1, 4));
  REQUIRE(dyadic_center(3) == rat(3, 4));
  REQUIRE(dyadic_center(4) == rat(1, 8));
  REQUIRE(dyadic_center(7) == rat(7, 8));
  REQUIRE(dyadic_center(8) == rat(1, 16));
  REQUIRE(dyadic_center(12) == rat(9, 16));
  REQUIRE(dyadic_center(39) == rat(15, 64));
}

TEST_CASE("first advance") {
  StageState s = advance(init_stage());
  REQUIRE(s.k == 1);
  REQUIRE(s.eps.back() == rat(1, 6));
  REQUIRE(s.flips == std::vector<Interval>{Interval{rat(5, 12), rat(7, 12)}});
  REQUIRE(s.slopes.signs == std::vector<int>{+1, -1, +1});
  REQUIRE(s.slopes.breakpoints ==
          std::vector<Rational>{Rational(0), rat(5, 12), rat(7, 12), Rational(1)});
}

TEST_CASE("second advance") {
  StageState s = advance(advance(init_stage()));
  REQUIRE(s.eps.back() == rat(1, 48));
  REQUIRE(s.flips.back() == Interval{rat(23, 96), rat(25, 96)});
  REQUIRE(s.slopes.breakpoints == std::vector<Rational>{Rational(0), rat(23, 96), rat(25, 96),
                                                        rat(5, 12), rat(7, 12), Rational(1)});
  REQUIRE(s.slopes.signs == std::vector<int>{+1, -1, +1, -1, +1});
}

TEST_CASE("eps selection matches the maximal-admissible oracle") {
  StageState s = init_stage();
  for (int k = 1; k <= 16; ++k) {
    Rational expected = oracle_eps(s, dyadic_center(k));
    s = advance(s);
    REQUIRE(s.eps.back() == expected);
  }
}

TEST_CASE("build basics") {
  REQUIRE(build(0).slopes.signs == init_stage().slopes.signs);
  REQUIRE(build(1).flips == std::vector<Interval>{Interval{rat(5, 12), rat(7, 12)}});
  REQUIRE(build(2).slopes.signs.size() == 5);
  REQUIRE_THROWS_AS(build(-1), std::invalid_argument);
  REQUIRE_THROWS_AS(build(10, 5), Error);  // configurable cap
}

TEST_CASE("interval_mass") {
  StageState s1 = build(1);
  auto [p, n] = interval_mass(s1, Rational(0), Rational(1));
  REQUIRE(p == rat(5, 6));
  REQUIRE(n == rat(1, 6));

  auto [p2, n2] = interval_mass(s1, rat(5, 12), rat(7, 12));
  REQUIRE(p2 == 0);
  REQUIRE(n2 == rat(1, 6));

  auto [p3, n3] = interval_mass(build(0), rat(1, 3), rat(3, 4));
  REQUIRE(p3 == rat(3, 4) - rat(1, 3));
  REQUIRE(n3 == 0);

  // mass is additive and fills the interval
  auto [pa, na] = interval_mass(s1, rat(1, 5), rat(4, 5));
  REQUIRE(pa + na == rat(4, 5) - rat(1, 5));

  REQUIRE_THROWS_AS(interval_mass(s1, rat(1, 2), rat(1, 2)), std::invalid_argument);
  REQUIRE_THROWS_AS(interval_mass(s1, rat(-1, 2), rat(1, 2)), std::invalid_argument);
}

TEST_CASE("tail bounds") {
  REQUIRE(tail_bound(build(0)) == rat(1, 2));
  REQUIRE(tail_bound(build(1)) == rat(1, 12));
  REQUIRE(tail_bound(build(2)) == rat(1, 96));
}

TEST_CASE("stage invariants up to K = 12") {
  const int K = 12;
  StageState s = build(K);

  // strict shrink rule
  for (int j = 1; j <= K; ++j)
    REQUIRE(s.eps[static_cast<std::size_t>(j)] <
            pow2_neg(static_cast<unsigned>(j)) * s.eps[static_cast<std::size_t>(j) - 1]);

  // closure of I_j misses E_{j-1}
  StageState prev = init_stage();
  for (int j = 1; j <= K; ++j) {
    const Interval& I = s.flips[static_cast<std::size_t>(j) - 1];
    for (const auto& e : prev.boundary) REQUIRE((e < I.lo || e > I.hi));
    prev = advance(prev);
  }

  // flips after stage k fit inside the stage-k tail bound
  for (int k = 0; k < K; ++k) {
    Rational later(0);
    for (int j = k + 1; j <= K; ++j) later += s.flips[static_cast<std::size_t>(j) - 1].width();
    REQUIRE(later <= tail_bound(build(k)));
  }

  // alternating signs, odd cell count, never-dyadic endpoints
  REQUIRE(s.slopes.signs.size() == 2 * static_cast<std::size_t>(K) + 1);
  for (std::size_t i = 0; i + 1 < s.slopes.signs.size(); ++i)
    REQUIRE(s.slopes.signs[i] == -s.slopes.signs[i + 1]);
  REQUIRE(s.slopes.signs.front() == +1);
  for (const auto& f : s.flips) {
    REQUIRE(denominator(f.lo) % 3 == 0);
    REQUIRE(denominator(f.hi) % 3 == 0);
  }
}

TEST_CASE("determinism") {
  StageState a = build(9), b = build(9);
  REQUIRE(a.slopes.breakpoints == b.slopes.breakpoints);
  REQUIRE(a.eps == b.eps);
  REQUIRE(stage_to_json(a).dump() == stage_to_json(b).dump());
}

TEST_CASE("serialization round-trip is bit-exact") {
  for (int K : {0, 1, 2, 7}) {
    StageState s = build(K);
    std::string doc = stage_to_json(s).dump();
    StageState back = stage_from_json(nlohmann::json::parse(doc));
    REQUIRE(stage_to_json(back).dump() == doc);
    REQUIRE(back.slopes.breakpoints == s.slopes.breakpoints);
  }

  nlohmann::json bad = stage_to_json(build(2));
  bad["flips"][1][0] = "1/7";
  REQUIRE_THROWS_AS(stage_from_json(bad), Error);
}

TEST_CASE("sign value on boundary points is zero") {
  StageState s = build(2);
  REQUIRE(s.slopes.at(rat(23, 96)) == 0);
  REQUIRE(s.slopes.at(rat(5, 12)) == 0);
  REQUIRE(s.slopes.at(rat(1, 10)) == +1);
  REQUIRE(s.slopes.at(rat(24, 96)) == -1);
  REQUIRE(s.slopes.at(rat(1, 2)) == -1);
}

// Density at the 1/32 scale: every dyadic cell eventually carries both signs
// with margin above the tail bound, and keeps both signs afterwards.
TEST_CASE("density over 1/32 cells") {
  const int kmax_search = 70;
  std::vector<StageState> stages;
  stages.push_back(init_stage());
  for (int k = 1; k <= kmax_search + 5; ++k) stages.push_back(advance(stages.back()));

  int kstar = 0;
  for (int m = 0; m < 32; ++m) {
    Rational a(m, 32), b(m + 1, 32);
    int found = -1;
    for (int k = 0; k <= kmax_search; ++k) {
      auto [p, n] = interval_mass(stages[static_cast<std::size_t>(k)], a, b);
      if (std::min(p, n) > tail_bound(stages[static_cast<std::size_t>(k)])) {
        found = k;
        break;
      }
    }
    REQUIRE(found >= 0);
    kstar = std::max(kstar, found);
    // positivity persists
    for (int k = found; k <= kmax_search + 5; ++k) {
      auto [p, n] = interval_mass(stages[static_cast<std::size_t>(k)], a, b);
      REQUIRE(p > 0);
      REQUIRE(n > 0);
    }
  }
  REQUIRE(kstar <= 63);  // the midpoint of the last 1/32 cell flips at index 63
}
