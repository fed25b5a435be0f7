#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ceq/measure.hpp"
#include "ceq/residual.hpp"
#include "ceq/stage.hpp"

using namespace ceq;

namespace {

Rational rat(long long n, long long d) { return Rational(n, d); }

GraphField stage_field(int K) {
  return GraphField(integrate_slopes(build(K).slopes, Rational(2)));
}

// x * psi(t) with psi == 1 on the whole graph range [1, 3]
ProductTest1D x_times_cutoff() {
  return {"x_psi", BivarPoly::monomial(0, 1, Rational(1)),
          smoothstep_cutoff(rat(1, 4), rat(3, 4), rat(13, 4), rat(15, 4))};
}

}  // namespace

TEST_CASE("field values on and off the graph") {
  GraphField gf1 = stage_field(1);
  REQUIRE(field_at(gf1, rat(7, 3), rat(1, 3)) == 1);    // rising branch
  REQUIRE(field_at(gf1, rat(7, 3), rat(1, 2)) == -1);   // flipped branch
  REQUIRE(field_at(gf1, rat(7, 3), rat(9, 10)) == 0);   // off graph
  REQUIRE(field_at(gf1, rat(1, 2), rat(1, 4)) == 0);    // level below the range
  REQUIRE(field_at(gf1, rat(9, 4), rat(7, 12)) == 0);   // breakpoint convention
  REQUIRE(field_at(gf1, rat(7, 3), rat(3, 2)) == 0);    // outside [0, 1]
}

TEST_CASE("field magnitude never exceeds 1 and is supported on the graph") {
  GraphField gf = stage_field(4);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    Rational x(static_cast<long long>(rng() % 1009), 1009);
    Rational t = Rational(4) * Rational(static_cast<long long>(rng() % 1013), 1013);
    Rational b = field_at(gf, t, x);
    REQUIRE(abs(b) <= 1);
    if (b != 0) {
      REQUIRE(gf.f(x) == t);
      REQUIRE_FALSE(gf.f.is_breakpoint(x));
    }
  }
  // on-graph sampling
  for (int trial = 0; trial < 100; ++trial) {
    Rational x(static_cast<long long>(rng() % 1009), 1009);
    if (gf.f.is_breakpoint(x)) continue;
    REQUIRE(abs(field_at(gf, gf.f(x), x)) == 1);
  }
}

TEST_CASE("defect on canonical examples") {
  GraphField gf1 = stage_field(1);
  REQUIRE(defect(gf1, x_times_cutoff()) == 1);

  // phi vanishing at both graph endpoints
  ProductTest1D hi{"x_high", BivarPoly::monomial(0, 1, Rational(1)),
                   smoothstep_cutoff(Rational(3), rat(13, 4), rat(7, 2), rat(15, 4))};
  REQUIRE(defect(gf1, hi) == 0);

  ProductTest1D x2{"x2_psi", BivarPoly::monomial(0, 2, Rational(1)),
                   smoothstep_cutoff(rat(1, 4), rat(3, 4), rat(13, 4), rat(15, 4))};
  REQUIRE(defect(gf1, x2) == 1);
}

TEST_CASE("uncorrected residual equals the defect exactly") {
  auto suite = canonical_product_suite();
  REQUIRE(suite.size() >= 10);
  for (int K = 0; K <= 12; ++K) {
    GraphField gf = stage_field(K);
    for (const auto& phi : suite) {
      REQUIRE(residual_tilde(gf, phi) == defect(gf, phi));
    }
  }
}

TEST_CASE("stage-1 canonical value") {
  GraphField gf1 = stage_field(1);
  REQUIRE(residual_tilde(gf1, x_times_cutoff()) == 1);

  // constant in x: both sides vanish
  ProductTest1D c{"const", BivarPoly::monomial(0, 0, Rational(1)),
                  smoothstep_cutoff(rat(1, 4), rat(3, 4), rat(13, 4), rat(15, 4))};
  REQUIRE(residual_tilde(gf1, c) == 0);
  REQUIRE(defect(gf1, c) == 0);
}

TEST_CASE("corrected residual vanishes exactly") {
  auto suite = canonical_product_suite();
  for (int K = 0; K <= 8; ++K) {
    GraphField gf = stage_field(K);
    for (const auto& phi : suite) REQUIRE(residual_full(gf, phi) == 0);
  }
}

TEST_CASE("exact and quadrature routes agree on the product suite") {
  for (int K : {0, 1, 4, 9}) {
    GraphField gf = stage_field(K);
    for (const auto& phi : canonical_product_suite()) {
      double exact = to_double(residual_tilde(gf, phi));
      double quad = residual_tilde(gf, phi, 1e-11);
      REQUIRE(std::abs(exact - quad) <= 1e-9);
    }
  }
}

TEST_CASE("float path on smooth bumps") {
  auto bumps = canonical_bump_suite();
  for (int K : {1, 3, 8}) {
    GraphField gf = stage_field(K);
    for (const auto& phi : bumps) {
      double rt = residual_tilde(gf, phi, 1e-10);
      double d = defect(gf, phi);
      REQUIRE(std::abs(rt - d) <= 1e-8);
      REQUIRE(std::abs(residual_full(gf, phi, 1e-10)) <= 1e-8);
    }
  }
}

TEST_CASE("support violations are rejected") {
  GraphField gf = stage_field(0);
  ProductTest1D bad{"no_decay", BivarPoly::monomial(0, 1, Rational(1)),
                    smoothstep_cutoff(rat(1, 4), rat(3, 4), Rational(4), Rational(5))};
  REQUIRE_THROWS_AS(residual_full(gf, bad), SupportViolation);

  BumpTest1D late{"late", 3.8, 0.5, 0.5, 0.4};  // support reaches past T = 4
  REQUIRE_THROWS_AS(residual_full(gf, late, 1e-10), SupportViolation);
}

TEST_CASE("graph field demands range inside (0, T)") {
  REQUIRE_THROWS_AS(GraphField(integrate_slopes(build(0).slopes, Rational(7, 2))),
                    DomainViolation);
}

TEST_CASE("quadrature reports unreachable tolerance") {
  auto nasty = [](double x) { return x > 0.3141592 ? 1.0 : 0.0; };
  REQUIRE_THROWS_AS(integrate(nasty, 0.0, 1.0, 1e-18, 8), QuadratureTolNotMet);
}

TEST_CASE("report rows") {
  GraphField gf = stage_field(2);
  ResidualRow row = evaluate_residual(gf, 2, canonical_product_suite().front());
  REQUIRE(row.mode == "exact");
  REQUIRE(row.exact_match);
  REQUIRE(row.residual_tilde_value == row.defect_value);

  ResidualRow brow = evaluate_residual(gf, 2, canonical_bump_suite().front(), 1e-10);
  REQUIRE(brow.mode == "float");
  REQUIRE(std::abs(brow.residual_tilde_value - brow.defect_value) <= 1e-8);
}
