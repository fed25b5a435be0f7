#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ceq/measure.hpp"
#include "ceq/pwl.hpp"
#include "ceq/stage.hpp"

using namespace ceq;

namespace {

Rational rat(long long n, long long d) { return Rational(n, d); }

PwlFunction stage_f(int K) { return integrate_slopes(build(K).slopes, Rational(2)); }

}  // namespace

TEST_CASE("mu~ at stage-1 levels") {
  PwlFunction f1 = stage_f(1);
  AtomicMeasure m = mu_tilde_at(f1, rat(7, 3));
  REQUIRE(m.atoms == std::vector<Atom>{{rat(1, 3), +1}, {rat(1, 2), -1}, {rat(2, 3), +1}});
  REQUIRE(total_variation(m) == 3);

  REQUIRE(mu_tilde_at(stage_f(0), rat(5, 2)).atoms == std::vector<Atom>{{rat(1, 2), +1}});
  REQUIRE(mu_tilde_at(f1, rat(7, 2)).empty());
  REQUIRE_THROWS_AS(mu_tilde_at(f1, rat(9, 4)), CriticalLevel);
}

TEST_CASE("mu with boundary corrections") {
  PwlFunction f1 = stage_f(1);

  REQUIRE(mu_full_at(f1, Rational(1)).empty());  // below the range, no corrections yet

  AtomicMeasure top = mu_full_at(f1, Rational(3));  // above the range: the two plateaus
  REQUIRE(top.atoms == std::vector<Atom>{{Rational(1), +1}, {Rational(0), -1}});
  REQUIRE(total_variation(top) == 2);

  AtomicMeasure mid = mu_full_at(f1, rat(7, 3));
  REQUIRE(mid.atoms == std::vector<Atom>{{rat(1, 3), +1}, {rat(1, 2), -1}, {rat(2, 3), +1},
                                         {Rational(0), -1}});

  REQUIRE_THROWS_AS(mu_full_at(f1, Rational(5)), DomainViolation);
}

TEST_CASE("total variation basics") {
  REQUIRE(total_variation(AtomicMeasure{}) == 0);
  PwlFunction f2 = stage_f(2);
  Rational witness = (rat(213, 96) + rat(215, 96)) / 2;
  REQUIRE(total_variation(mu_tilde_at(f2, witness)) == 5);
}

TEST_CASE("pairing") {
  AtomicMeasure d;
  d.add(rat(2, 7), +1);
  auto g = [](const Rational& x) { return x * x; };
  REQUIRE(pair(d, g) == rat(4, 49));

  AtomicMeasure m;
  m.add(rat(1, 3), +1).add(rat(1, 2), -1).add(rat(2, 3), +1);
  REQUIRE(pair(m, [](const Rational& x) { return x; }) == rat(1, 2));

  REQUIRE(pair(AtomicMeasure{}, g) == 0);

  // float pairing
  double v = pair(m, [](const Rational& x) { return to_double(x) * 2.0; });
  REQUIRE(v == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("TV equals preimage count at sampled levels") {
  std::mt19937_64 rng(11);
  for (int K : {0, 1, 3, 6, 9}) {
    PwlFunction f = stage_f(K);
    for (int trial = 0; trial < 25; ++trial) {
      Rational t = Rational(2) + Rational(static_cast<long long>(rng() % 9973) + 1, 10007);
      try {
        REQUIRE(total_variation(mu_tilde_at(f, t)) ==
                static_cast<long long>(preimages(f, t).size()));
      } catch (const CriticalLevel&) {
      }
    }
  }
}

TEST_CASE("L1 mass identity: integral of TV over time is exactly 1") {
  for (int K = 0; K <= 12; ++K) {
    PwlFunction f = stage_f(K);
    REQUIRE(tv_time_integral(f) == 1);
    REQUIRE(tv_time_integral(f) == area_formula_check(f));  // two routes agree
  }
}

TEST_CASE("corrected family has zero total mass at every sampled level") {
  std::mt19937_64 rng(13);
  for (int K : {0, 1, 2, 5, 8}) {
    PwlFunction f = stage_f(K);
    for (int trial = 0; trial < 40; ++trial) {
      Rational t = Rational(4) * Rational(static_cast<long long>(rng() % 9973) + 1, 10007);
      try {
        REQUIRE(pair(mu_full_at(f, t), [](const Rational&) { return Rational(1); }) == 0);
      } catch (const CriticalLevel&) {
      }
    }
  }
}

TEST_CASE("measure JSON round-trip") {
  AtomicMeasure m;
  m.add(rat(1, 3), +1).add(rat(1, 2), -1);
  nlohmann::json j = measure_to_json(m);
  REQUIRE(j.dump() == R"([{"w":1,"x":"1/3"},{"w":-1,"x":"1/2"}])");
  REQUIRE(measure_from_json(j).atoms == m.atoms);
}
