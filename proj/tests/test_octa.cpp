#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ceq/octa.hpp"
#include "ceq/stage.hpp"

using namespace ceq;

namespace {

Rational rat(long long n, long long d) { return Rational(n, d); }

OctField stage_oct(int K) { return OctField(build(K)); }

double max_on_triangle_boundary(const PlaneTest& phi) {
  auto tri = face_triangle_plane();
  double m = 0;
  for (std::size_t e = 0; e < 3; ++e) {
    Vec2 a = tri[e], b = tri[(e + 1) % 3];
    for (int i = 0; i <= 64; ++i) {
      double r = i / 64.0;
      m = std::max(m, std::abs(phi.f(a.x + r * (b.x - a.x), a.y + r * (b.y - a.y))));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("frame axes are orthogonal with the stated norms") {
  REQUIRE(Frame3::dir_dot(0, 1) == 0);
  REQUIRE(Frame3::dir_dot(0, 2) == 0);
  REQUIRE(Frame3::dir_dot(1, 2) == 0);
  REQUIRE(Frame3::dir_dot(0, 0) == 2);
  REQUIRE(Frame3::dir_dot(1, 1) == 6);
  REQUIRE(Frame3::dir_dot(2, 2) == 3);
}

TEST_CASE("frame coordinates") {
  auto o = Frame3::to_frame({0.5, 0.5, 0.0});
  REQUIRE(o[0] == 0.0);
  REQUIRE(o[1] == 0.0);
  REQUIRE(o[2] == 0.0);

  auto e = Frame3::to_frame({1.0, 0.0, 0.0});
  REQUIRE(e[0] == Catch::Approx(-std::sqrt(2.0) / 2).margin(1e-15));
  REQUIRE(e[1] == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(e[2] == Catch::Approx(0.0).margin(1e-15));

  // the positive face lies in {zeta = 0}: zetahat = x + y + t - 1
  auto fs = Frame3::to_frame_scaled({rat(1, 5), rat(3, 10), rat(1, 2)});
  REQUIRE(fs[2] == 0);
}

TEST_CASE("frame round trips") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Vec3 p{rng() % 100 / 50.0 - 1.0, rng() % 100 / 50.0 - 1.0, rng() % 100 / 50.0 - 1.0};
    Vec3 q = Frame3::from_frame(Frame3::to_frame(p));
    REQUIRE(q.x == Catch::Approx(p.x).margin(1e-14));
    REQUIRE(q.y == Catch::Approx(p.y).margin(1e-14));
    REQUIRE(q.t == Catch::Approx(p.t).margin(1e-14));

    RVec3 rp{Rational(static_cast<long long>(rng() % 201) - 100, 100),
             Rational(static_cast<long long>(rng() % 201) - 100, 100),
             Rational(static_cast<long long>(rng() % 201) - 100, 100)};
    RVec3 rq = Frame3::from_frame_scaled(Frame3::to_frame_scaled(rp));
    REQUIRE(rq.x == rp.x);  // exact
    REQUIRE(rq.y == rp.y);
    REQUIRE(rq.t == rp.t);
  }
}

TEST_CASE("planar field has unit time component") {
  REQUIRE(field_V(+1).t == 1.0);
  REQUIRE(field_V(-1).t == -1.0);
  // tangent to the face plane: V . (1,1,1) = 0
  REQUIRE(std::abs(field_V(+1).x + field_V(+1).y + field_V(+1).t) <= 1e-15);
  REQUIRE(std::abs(field_V(-1).x + field_V(-1).y + field_V(-1).t) <= 1e-15);
}

TEST_CASE("B off the surface is vertical unit") {
  OctField of = stage_oct(1);
  FieldSample fs = field_B(of, {Rational(2), Rational(2), Rational(0)});
  REQUIRE_FALSE(fs.on_surface);
  REQUIRE(fs.B.x == 0.0);
  REQUIRE(fs.B.y == 0.0);
  REQUIRE(fs.B.t == 1.0);

  FieldSample inside = field_B(of, {rat(1, 10), rat(1, 10), rat(1, 10)});
  REQUIRE(inside.B.t == 1.0);  // strict interior of the solid is off the surface set

  auto [B, b2] = field_b(of, {rat(1, 4), rat(1, 4), rat(1, 2)});
  REQUIRE(b2.x == B.x);
  REQUIRE(b2.y == B.y);
  REQUIRE(b2.t == 0.0);
}

TEST_CASE("B on the stage-0 positive face is the unreflected V") {
  OctField of = stage_oct(0);
  FieldSample fs = field_B(of, {rat(1, 4), rat(1, 4), rat(1, 2)});
  REQUIRE(fs.on_surface);
  REQUIRE(fs.u == +1);
  Vec3 v = field_V(+1);
  REQUIRE(fs.B.x == v.x);
  REQUIRE(fs.B.y == v.y);
  REQUIRE(fs.B.t == v.t);
}

TEST_CASE("B_3 equals one at 10^4 random points") {
  OctField of = stage_oct(3);
  std::mt19937_64 rng(99);
  auto rnd = [&](long long den) {
    return Rational(static_cast<long long>(rng() % (2 * den + 1)) - den, den);
  };
  int on_surface_checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    RVec3 p;
    if (trial % 2 == 0) {
      // arbitrary point in the box [-2, 2]^3 (almost surely off the surface)
      p = {rnd(500) * 2, rnd(500) * 2, rnd(500) * 2};
    } else {
      // on-surface point: sample the positive face, then reflect
      Rational a = (rnd(997) + 1) / 2, b = (rnd(1009) + 1) / 2;
      if (a <= 0 || b <= 0 || a + b >= 1) continue;
      RVec3 q{a, b, 1 - a - b};
      if (q.t == 0) continue;
      int s1 = (rng() & 1) ? 1 : -1, s2 = (rng() & 1) ? 1 : -1, s3 = (rng() & 1) ? 1 : -1;
      p = {s1 * q.x, s2 * q.y, s3 * q.t};
    }
    FieldSample fs = field_B(of, p);
    if (fs.on_surface && fs.u == 0) continue;  // measure-zero convention set
    REQUIRE(fs.B.t == 1.0);
    if (fs.on_surface) ++on_surface_checked;
  }
  REQUIRE(on_surface_checked > 2000);
}

TEST_CASE("face Gauss-Green at stage 0 reduces to the classical identity") {
  OctField of = stage_oct(0);
  for (const auto& phi : canonical_plane_suite()) {
    auto [lhs, rhs] = face_gauss_green(of, phi, 1e-12);
    REQUIRE(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("face Gauss-Green with strip decompositions") {
  for (int K : {1, 2, 3}) {
    OctField of = stage_oct(K);
    for (const auto& phi : canonical_plane_suite()) {
      auto [lhs, rhs] = face_gauss_green(of, phi, 1e-12);
      REQUIRE(std::abs(lhs - rhs) <= 1e-8);
    }
  }
}

TEST_CASE("constant test function gives zero flux balance") {
  OctField of = stage_oct(2);
  auto [lhs, rhs] = face_gauss_green(of, canonical_plane_suite().front(), 1e-12);
  REQUIRE(std::abs(lhs) <= 1e-10);
  REQUIRE(std::abs(rhs) <= 1e-10);
}

TEST_CASE("consecutive stages agree within the tail bound estimate") {
  for (int K : {0, 1, 2}) {
    OctField a = stage_oct(K), b = stage_oct(K + 1);
    double tail = to_double(tail_bound(a.stage));
    for (const auto& phi : canonical_plane_suite()) {
      auto [lhsa, rhsa] = face_gauss_green(a, phi, 1e-12);
      auto [lhsb, rhsb] = face_gauss_green(b, phi, 1e-12);
      double bound =
          2 * tail * max_on_triangle_boundary(phi) * Frame3::alpha() * 3 * std::sqrt(2.0) + 1e-10;
      REQUIRE(std::abs(rhsa - rhsb) <= bound);
      REQUIRE(std::abs(lhsa - lhsb) <= bound);
    }
  }
}

TEST_CASE("edge cancellation") {
  OctField of = stage_oct(2);
  SpaceTest one{"one", [](Vec3) { return 1.0; }, [](Vec3) { return Vec3{0, 0, 0}; }};
  REQUIRE(std::abs(edge_cancellation(of, one, 1e-12)) <= 1e-10);

  for (const auto& phi : canonical_space_suite())
    REQUIRE(std::abs(edge_cancellation(of, phi, 1e-12)) <= 1e-8);
}

TEST_CASE("odd test function cancels the first edge family by symmetry") {
  OctField of = stage_oct(1);
  auto fams = edge_cancellation_families(of, odd_in_x_test(), 1e-12);
  REQUIRE(std::abs(fams[0]) <= 1e-10);
}

TEST_CASE("divergence pairing vanishes") {
  SpaceTest constant{"c", [](Vec3) { return 2.5; }, [](Vec3) { return Vec3{0, 0, 0}; }};
  REQUIRE(divergence_pairing(stage_oct(1), constant, 1e-9) == 0.0);

  OctField of0 = stage_oct(0);
  for (const auto& phi : canonical_space_suite())
    REQUIRE(std::abs(divergence_pairing(of0, phi, 1e-9)) <= 1e-9);

  OctField of4 = stage_oct(4);
  REQUIRE(std::abs(divergence_pairing(of4, canonical_space_suite().back(), 1e-8)) <= 1e-6);
}

TEST_CASE("slice total variation") {
  REQUIRE(slice_tv(0.0) == Catch::Approx(4.0 * std::sqrt(3.0)).margin(1e-14));
  REQUIRE(slice_tv(1.0) == 0.0);
  REQUIRE(slice_tv(-1.3) == 0.0);
  REQUIRE(slice_tv(0.5) == Catch::Approx(2.0 * std::sqrt(3.0)).margin(1e-14));

  // geometric route: alpha times the summed length of the four segments
  for (int i = 0; i <= 100; ++i) {
    double t = -1.0 + 0.02 * i;
    double r = 1.0 - std::abs(t);
    double perimeter = 4.0 * std::hypot(r, r);
    REQUIRE(slice_tv(t) == Catch::Approx(Frame3::alpha() * perimeter).margin(1e-12));
  }
}

TEST_CASE("slice pairings") {
  OctField of0 = stage_oct(0);
  auto one = [](double, double) { return 1.0; };
  // opposite quadrants carry opposite u: the uniform pairing cancels
  REQUIRE(std::abs(mu2d_pair(of0, rat(1, 2), one)) <= 1e-12);
  REQUIRE(std::abs(mu2d_pair(of0, rat(-2, 5), one)) <= 1e-12);
  REQUIRE(mu2d_pair(of0, Rational(0), one) == 0.0);

  auto zero = [](double, double) { return 0.0; };
  REQUIRE(mu2d_pair(of0, rat(1, 3), zero) == 0.0);

  // phi = x y survives the quadrant signs: 4 alpha sqrt2 int a (len - a) da
  auto xy = [](double x, double y) { return x * y; };
  REQUIRE(mu2d_pair(of0, rat(1, 2), xy) ==
          Catch::Approx(std::sqrt(3.0) / 12.0).margin(1e-10));

  REQUIRE_THROWS_AS(mu2d_pair(of0, Rational(2), one), DomainViolation);
}

TEST_CASE("TV bound for slice pairings") {
  OctField of = stage_oct(2);
  std::mt19937_64 rng(17);
  auto phi = [](double x, double y) { return std::sin(3 * x) + y * y; };
  for (int trial = 0; trial < 20; ++trial) {
    Rational t(static_cast<long long>(rng() % 1999) - 999, 1000);
    if (t == 0) continue;
    double v = mu2d_pair(of, t, phi, 1e-11);
    double r = 1.0 - std::abs(to_double(t));
    double maxphi = 1.0 + r * r;  // |sin| <= 1, y^2 <= r^2 on the diamond
    REQUIRE(std::abs(v) <= slice_tv(to_double(t)) * maxphi + 1e-9);
  }
}

TEST_CASE("plot data exports") {
  OctField of = stage_oct(1);
  std::string flux = face_flux_csv(of);
  REQUIRE(flux.rfind("s1,s2,s3,strip,u_lo,u_hi,area,U_x,U_y,U_t\n", 0) == 0);
  REQUIRE(std::count(flux.begin(), flux.end(), '\n') == 1 + 8 * 3);  // 3 strips per face

  std::string tv = slice_tv_csv();
  REQUIRE(std::count(tv.begin(), tv.end(), '\n') == 102);

  std::string wf = wireframe_csv();
  REQUIRE(wf.rfind("x,y,t\n", 0) == 0);
  REQUIRE(wf.find("\n\n") != std::string::npos);
}
