// The 2D counterexample embedded in R^3: a planar field on the tilted frame,
// reflected onto the eight faces of the octahedron |x|+|y|+|t| <= 1, the
// scalar weight u with B_3 = 1, slice measures along t, and the surface
// Gauss-Green / edge-cancellation / divergence checks.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ceq/errors.hpp"
#include "ceq/quadrature.hpp"
#include "ceq/rational.hpp"
#include "ceq/stage.hpp"

namespace ceq {

struct Vec3 {
  double x = 0, y = 0, t = 0;
  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.t + b.t}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.t - b.t}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.t}; }
  double dot(Vec3 o) const { return x * o.x + y * o.y + t * o.t; }
};

struct RVec3 {
  Rational x, y, t;
};

// Orthonormal frame of the tilted plane: origin (1/2, 1/2, 0), axes along
// (-1,1,0), (-1,-1,2), (1,1,1).  Directions are kept as exact integer
// vectors; the normalizers sqrt(2), sqrt(6), sqrt(3) enter only in the
// floating-point coordinates.
struct Frame3 {
  static constexpr std::array<std::array<int, 3>, 3> dirs{{{-1, 1, 0}, {-1, -1, 2}, {1, 1, 1}}};
  static constexpr std::array<int, 3> norm2{2, 6, 3};

  static RVec3 origin() { return {Rational(1, 2), Rational(1, 2), Rational(0)}; }
  static double alpha() { return std::sqrt(1.5); }

  // Exact pairwise dot products of the axis directions.
  static int dir_dot(int i, int j) {
    int acc = 0;
    for (int c = 0; c < 3; ++c) acc += dirs[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] *
                                       dirs[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
    return acc;
  }

  // Scaled frame coordinates (sqrt-free): xihat = sqrt(2) xi, etahat =
  // sqrt(6) eta, zetahat = sqrt(3) zeta.  Exact for rational points.
  static std::array<Rational, 3> to_frame_scaled(const RVec3& p) {
    RVec3 o = origin();
    Rational dx = p.x - o.x, dy = p.y - o.y, dt = p.t - o.t;
    std::array<Rational, 3> out;
    for (int i = 0; i < 3; ++i) {
      const auto& d = dirs[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = Rational(d[0]) * dx + Rational(d[1]) * dy + Rational(d[2]) * dt;
    }
    return out;
  }

  static RVec3 from_frame_scaled(const std::array<Rational, 3>& f) {
    RVec3 o = origin();
    RVec3 p = o;
    for (int i = 0; i < 3; ++i) {
      const auto& d = dirs[static_cast<std::size_t>(i)];
      Rational w = f[static_cast<std::size_t>(i)] / Rational(norm2[static_cast<std::size_t>(i)]);
      p.x += Rational(d[0]) * w;
      p.y += Rational(d[1]) * w;
      p.t += Rational(d[2]) * w;
    }
    return p;
  }

  static std::array<double, 3> to_frame(Vec3 p) {
    Vec3 rel = p - Vec3{0.5, 0.5, 0.0};
    std::array<double, 3> out;
    for (int i = 0; i < 3; ++i) {
      const auto& d = dirs[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] =
          (d[0] * rel.x + d[1] * rel.y + d[2] * rel.t) / std::sqrt(double(norm2[static_cast<std::size_t>(i)]));
    }
    return out;
  }

  static Vec3 from_frame(const std::array<double, 3>& f) {
    Vec3 p{0.5, 0.5, 0.0};
    for (int i = 0; i < 3; ++i) {
      const auto& d = dirs[static_cast<std::size_t>(i)];
      double w = f[static_cast<std::size_t>(i)] / std::sqrt(double(norm2[static_cast<std::size_t>(i)]));
      p = p + w * Vec3{double(d[0]), double(d[1]), double(d[2])};
    }
    return p;
  }
};

// Field data on the octahedron at a fixed construction stage.  The stage
// sign pattern lives on the parameter u in [0,1]; a face point with
// positive-octant coordinates (a, b, c) carries u = (1 + b - a) / 2, the
// affine pullback of the xi coordinate onto [0,1] (fixed once).
struct OctField {
  StageState stage;

  explicit OctField(StageState s) : stage(std::move(s)) {}

  int sign_at_param(const Rational& u) const { return stage.slopes.at(u); }

  // Interior breakpoints of the sign pattern (excluding 0 and 1).
  std::vector<Rational> param_breakpoints() const {
    std::vector<Rational> v(stage.slopes.breakpoints.begin() + 1, stage.slopes.breakpoints.end() - 1);
    return v;
  }
};

// Ambient components of the planar field for sign s: closed forms keep the
// t-component exactly +-1.
inline Vec3 field_V(int s) {
  const double r3 = std::sqrt(3.0);
  return {-(r3 + s) / 2.0, (r3 - s) / 2.0, double(s)};
}

struct FieldSample {
  Vec3 B;
  int u = 0;          // +-1 on the generic surface, 0 on the null set
  bool on_surface = false;
};

// B at an exact rational point: (0,0,1) off the surface |x|+|y|+|t| = 1;
// u * U at generic surface points (then B_3 = u^2 = 1 exactly); zero vector
// on the measure-zero edge/breakpoint set where u := 0.
inline FieldSample field_B(const OctField& of, const RVec3& p) {
  Rational l1 = abs(p.x) + abs(p.y) + abs(p.t);
  if (l1 != 1) return {{0, 0, 1}, 0, false};
  if (p.x == 0 || p.y == 0 || p.t == 0) return {{0, 0, 0}, 0, true};
  int s1 = sign(p.x), s2 = sign(p.y), s3 = sign(p.t);
  Rational a = abs(p.x), b = abs(p.y);
  Rational u_param = (1 + b - a) / 2;
  int s = of.sign_at_param(u_param);
  if (s == 0) return {{0, 0, 0}, 0, true};
  Vec3 V = field_V(s);
  Vec3 U{s2 * s3 * V.x, s1 * s3 * V.y, double(s1 * s2) * V.t};
  int u = s1 * s2 * s;  // = U_3, exactly +-1
  return {double(u) * U, u, true};
}

inline std::pair<Vec3, Vec3> field_b(const OctField& of, const RVec3& p) {
  FieldSample fs = field_B(of, p);
  return {fs.B, Vec3{fs.B.x, fs.B.y, 0}};
}

// --- planar Gauss-Green over the positive face ---------------------------------

struct PlaneTest {
  std::string id;
  std::function<double(double, double)> f;           // phi(xi, eta)
  std::function<std::array<double, 2>(double, double)> grad;
};

namespace detail {

// Convex polygon clip against { keep * (x - c) >= 0 }.
inline std::vector<Vec2> clip_halfplane_x(const std::vector<Vec2>& poly, double c, int keep) {
  std::vector<Vec2> out;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 p = poly[i], q = poly[(i + 1) % n];
    double sp = keep * (p.x - c), sq = keep * (q.x - c);
    if (sp >= 0) out.push_back(p);
    if ((sp < 0) != (sq < 0)) {
      double w = sp / (sp - sq);
      out.push_back(p + w * (q - p));
    }
  }
  return out;
}

inline double polygon_area(const std::vector<Vec2>& poly) {
  double a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Vec2 p = poly[i], q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

}  // namespace detail

// The positive face in frame coordinates: equilateral triangle with base
// [-1/sqrt2, 1/sqrt2] x {0} and apex (0, sqrt6/2), counterclockwise.
inline std::vector<Vec2> face_triangle_plane() {
  double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  return {{-1.0 / s2, 0.0}, {1.0 / s2, 0.0}, {0.0, s6 / 2.0}};
}

// Interior integral of W . grad(phi) over the face, where W = alpha (1, s(xi)).
// W is constant on each xi strip, so the strip integral equals the boundary
// integral of phi W . nu over the strip polygon; that is the lhs.  The rhs
// integrates phi W . nu over the triangle boundary directly.  Both use
// adaptive Simpson along segments split so no segment straddles a sign jump.
inline std::pair<double, double> face_gauss_green(const OctField& of, const PlaneTest& phi,
                                                  double tol = 1e-10) {
  double alpha = Frame3::alpha();
  double s2 = std::sqrt(2.0);
  auto tri = face_triangle_plane();

  // xi positions of the cell boundaries; cell i has sign signs[i]
  const auto& slopes = of.stage.slopes;
  std::vector<double> cuts;
  cuts.reserve(slopes.breakpoints.size());
  for (const auto& u : slopes.breakpoints) cuts.push_back((2 * to_double(u) - 1) / s2);

  auto seg_integral = [&](Vec2 p, Vec2 q, double wx, double wy) {
    // int over segment of phi * (W . nu) ds, nu = outward normal for ccw order
    double dx = q.x - p.x, dy = q.y - p.y;
    double len = std::hypot(dx, dy);
    if (len == 0) return 0.0;
    double nx = dy / len, ny = -dx / len;
    double wn = wx * nx + wy * ny;
    if (wn == 0.0) return 0.0;
    return wn * integrate([&](double r) { return phi.f(p.x + r * dx, p.y + r * dy) * len; },
                          0.0, 1.0, tol);
  };

  double lhs = 0;
  for (std::size_t i = 0; i < slopes.signs.size(); ++i) {
    int s = slopes.signs[i];
    auto poly = detail::clip_halfplane_x(tri, cuts[i], +1);
    poly = detail::clip_halfplane_x(poly, cuts[i + 1], -1);
    if (poly.size() < 3) continue;
    for (std::size_t e = 0; e < poly.size(); ++e)
      lhs += seg_integral(poly[e], poly[(e + 1) % poly.size()], alpha, alpha * s);
  }

  double rhs = 0;
  for (std::size_t e = 0; e < tri.size(); ++e) {
    Vec2 p = tri[e], q = tri[(e + 1) % tri.size()];
    // split the edge at xi-cut crossings so W is constant per sub-segment
    std::vector<double> rs{0.0, 1.0};
    double dx = q.x - p.x;
    if (dx != 0)
      for (double c : cuts) {
        double r = (c - p.x) / dx;
        if (r > 0 && r < 1) rs.push_back(r);
      }
    std::sort(rs.begin(), rs.end());
    for (std::size_t s_i = 0; s_i + 1 < rs.size(); ++s_i) {
      Vec2 a = p + rs[s_i] * (q - p);
      Vec2 b = p + rs[s_i + 1] * (q - p);
      double xi_mid = 0.5 * (a.x + b.x);
      auto it = std::upper_bound(cuts.begin(), cuts.end(), xi_mid);
      std::size_t cell = it == cuts.begin() ? 0
                         : std::min(static_cast<std::size_t>(it - cuts.begin()) - 1,
                                    slopes.signs.size() - 1);
      rhs += seg_integral(a, b, alpha, alpha * slopes.signs[cell]);
    }
  }
  return {lhs, rhs};
}

// --- reflected edge integrals ---------------------------------------------------

struct SpaceTest {
  std::string id;
  std::function<double(Vec3)> f;
  std::function<Vec3(Vec3)> grad;
};

namespace detail {

struct EdgeFamily {
  // p(tau) on the positive-octant edge, tau in (0,1); u(tau) = u0 + du*tau.
  std::function<Vec3(double)> point;
  Rational u0, du;
  // V . n for sign s (exact closed forms times alpha)
  std::function<double(int)> v_dot_n;
};

inline std::array<EdgeFamily, 3> edge_families() {
  double alpha = Frame3::alpha();
  double r3 = std::sqrt(3.0);
  std::array<EdgeFamily, 3> fams;
  // E1 = {(0, tau, 1-tau)}: u = (1 + tau) / 2
  fams[0] = {[](double tau) { return Vec3{0, tau, 1 - tau}; }, Rational(1, 2), Rational(1, 2),
             [alpha, r3](int s) { return alpha * (r3 + s) / 2.0; }};
  // E2 = {(tau, 0, 1-tau)}: u = (1 - tau) / 2
  fams[1] = {[](double tau) { return Vec3{tau, 0, 1 - tau}; }, Rational(1, 2), Rational(-1, 2),
             [alpha, r3](int s) { return alpha * (s - r3) / 2.0; }};
  // E3 = {(tau, 1-tau, 0)}: u = 1 - tau
  fams[2] = {[](double tau) { return Vec3{tau, 1 - tau, 0}; }, Rational(1), Rational(-1),
             [alpha](int s) { return -alpha * s; }};
  return fams;
}

}  // namespace detail

// Signed sums over the eight reflections of int phi (V . n) dH^1, one total
// per edge family.  Mirror symmetry cancels each family; the totals are the
// numerical residue of that cancellation.
inline std::array<double, 3> edge_cancellation_families(const OctField& of, const SpaceTest& phi,
                                                        double tol = 1e-10) {
  auto fams = detail::edge_families();
  auto bps = of.param_breakpoints();
  std::array<double, 3> totals{0, 0, 0};
  std::size_t fam_idx = 0;
  for (const auto& fam : fams) {
    // pullbacks of sign breakpoints to tau
    std::vector<Rational> taus{Rational(0), Rational(1)};
    for (const auto& u : bps) {
      Rational tau = (u - fam.u0) / fam.du;
      if (tau > 0 && tau < 1) taus.push_back(tau);
    }
    std::sort(taus.begin(), taus.end());
    for (int s1 : {+1, -1})
      for (int s2 : {+1, -1})
        for (int s3 : {+1, -1}) {
          double patt = s1 * s2 * s3;
          double acc = 0;
          for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
            Rational u_mid = fam.u0 + fam.du * ((taus[i] + taus[i + 1]) / 2);
            int s = of.sign_at_param(u_mid);
            double vn = fam.v_dot_n(s);
            double a = to_double(taus[i]), b = to_double(taus[i + 1]);
            acc += vn * integrate(
                            [&](double tau) {
                              Vec3 p = fam.point(tau);
                              return phi.f({s1 * p.x, s2 * p.y, s3 * p.t}) * std::sqrt(2.0);
                            },
                            a, b, tol / 24.0);
          }
          totals[fam_idx] += patt * acc;
        }
    ++fam_idx;
  }
  return totals;
}

inline double edge_cancellation(const OctField& of, const SpaceTest& phi, double tol = 1e-10) {
  auto fams = edge_cancellation_families(of, phi, tol);
  return fams[0] + fams[1] + fams[2];
}

// --- surface divergence pairing -------------------------------------------------

// int over the octahedron surface of u B . grad(phi) dH^2 = sum over the 8
// faces, each decomposed into strips where the reflected field U is
// constant.  Expected to vanish.
//
// Strips on the projected face triangle {a, b > 0, a + b < 1} are diagonal
// bands 2u_i - 1 < b - a < 2u_{i+1} - 1.  At later stages they are extreme
// slivers, so each strip is integrated as a nested 1D quadrature: fixed
// Gauss nodes across the band coordinate d = b - a, adaptive Simpson along
// the cross-sections a in [max(0, -d), (1 - d)/2].
inline double divergence_pairing(const OctField& of, const SpaceTest& phi, double tol = 1e-8) {
  static constexpr std::array<double, 4> gl_x{0.06943184420297371239, 0.33000947820757186760,
                                              0.66999052179242813240, 0.93056815579702628761};
  static constexpr std::array<double, 4> gl_w{0.17392742256872692869, 0.32607257743127307131,
                                              0.32607257743127307131, 0.17392742256872692869};
  const auto& slopes = of.stage.slopes;
  double r3 = std::sqrt(3.0);
  double total = 0;
  std::size_t n_strips = slopes.signs.size();
  double tol_inner = tol / (8.0 * static_cast<double>(n_strips) * 8.0);

  for (std::size_t i = 0; i < n_strips; ++i) {
    double c1 = 2 * to_double(slopes.breakpoints[i]) - 1;
    double c2 = 2 * to_double(slopes.breakpoints[i + 1]) - 1;
    Vec3 V = field_V(slopes.signs[i]);

    // the cross-section lower bound max(0, -d) has a kink at d = 0
    std::vector<double> dr{c1, c2};
    if (c1 < 0 && 0 < c2) dr.insert(dr.begin() + 1, 0.0);

    for (int s1 : {+1, -1})
      for (int s2 : {+1, -1})
        for (int s3 : {+1, -1}) {
          Vec3 U{s2 * s3 * V.x, s1 * s3 * V.y, double(s1 * s2) * V.t};
          for (std::size_t r = 0; r + 1 < dr.size(); ++r) {
            double width = dr[r + 1] - dr[r];
            if (width <= 0) continue;
            for (std::size_t g = 0; g < gl_x.size(); ++g) {
              double d = dr[r] + width * gl_x[g];
              double a_lo = std::max(0.0, -d);
              double a_hi = 0.5 * (1.0 - d);
              if (a_hi <= a_lo) continue;
              double inner = integrate(
                  [&](double a) {
                    Vec3 p{s1 * a, s2 * (a + d), s3 * (1.0 - 2.0 * a - d)};
                    return U.dot(phi.grad(p));
                  },
                  a_lo, a_hi, tol_inner);
              total += width * gl_w[g] * inner * r3;
            }
          }
        }
  }
  return total;
}

// --- slice measures --------------------------------------------------------------

// Total variation of the slice measure nu_t (and of mu_t = u nu_t, since
// |u| = 1 a.e. on the surface): alpha * perimeter of the diamond
// {|x|+|y| = 1-|t|}.
inline double slice_tv(double t) {
  double at = std::abs(t);
  if (at >= 1.0) return 0.0;
  return Frame3::alpha() * 4.0 * std::sqrt(2.0) * (1.0 - at);
}

// <mu_t, phi> = alpha int over the diamond of u phi dH^1, piecewise along
// the four quadrant segments split at sign breakpoints.
inline double mu2d_pair(const OctField& of, const Rational& t,
                        const std::function<double(double, double)>& phi, double tol = 1e-10) {
  if (t <= -1 || t >= 1) throw DomainViolation("mu2d_pair: t outside (-1, 1)");
  if (t == 0) return 0.0;  // the t = 0 ring is the edge set, where u = 0
  // u = U_3 does not depend on the sign of t, so both half-slices share the
  // positive-face parametrization below.
  Rational att = abs(t);
  Rational len = 1 - att;  // a ranges over (0, len)
  auto bps = of.param_breakpoints();
  double alpha = Frame3::alpha();
  double total = 0;
  for (int s1 : {+1, -1})
    for (int s2 : {+1, -1}) {
      // a -> u = 1 - |t|/2 - a
      std::vector<Rational> as{Rational(0), len};
      for (const auto& u : bps) {
        Rational a = 1 - att / 2 - u;
        if (a > 0 && a < len) as.push_back(a);
      }
      std::sort(as.begin(), as.end());
      for (std::size_t i = 0; i + 1 < as.size(); ++i) {
        Rational u_mid = 1 - att / 2 - (as[i] + as[i + 1]) / 2;
        int s = of.sign_at_param(u_mid);
        int u_field = s1 * s2 * s;
        if (u_field == 0) continue;
        double a0 = to_double(as[i]), a1 = to_double(as[i + 1]);
        double lend = to_double(len);
        total += u_field * alpha * std::sqrt(2.0) *
                 integrate([&](double a) { return phi(s1 * a, s2 * (lend - a)); }, a0, a1,
                           tol / 8.0);
      }
    }
  return total;
}

// --- canonical test suites --------------------------------------------------------

inline std::vector<PlaneTest> canonical_plane_suite() {
  auto poly = [](std::string id, std::function<double(double, double)> f,
                 std::function<std::array<double, 2>(double, double)> g) {
    return PlaneTest{std::move(id), std::move(f), std::move(g)};
  };
  std::vector<PlaneTest> v;
  v.push_back(poly("Q01_1", [](double, double) { return 1.0; },
                   [](double, double) { return std::array<double, 2>{0, 0}; }));
  v.push_back(poly("Q02_xi", [](double xi, double) { return xi; },
                   [](double, double) { return std::array<double, 2>{1, 0}; }));
  v.push_back(poly("Q03_eta", [](double, double eta) { return eta; },
                   [](double, double) { return std::array<double, 2>{0, 1}; }));
  v.push_back(poly("Q04_xieta", [](double xi, double eta) { return xi * eta; },
                   [](double xi, double eta) { return std::array<double, 2>{eta, xi}; }));
  v.push_back(poly("Q05_quad", [](double xi, double eta) { return xi * xi - 2 * eta * eta; },
                   [](double xi, double eta) { return std::array<double, 2>{2 * xi, -4 * eta}; }));
  v.push_back(poly("Q06_cubic", [](double xi, double eta) { return xi * xi * xi + eta * eta; },
                   [](double xi, double eta) {
                     return std::array<double, 2>{3 * xi * xi, 2 * eta};
                   }));
  return v;
}

inline std::vector<SpaceTest> canonical_space_suite() {
  std::vector<SpaceTest> v;
  v.push_back({"S01_1", [](Vec3) { return 1.0; }, [](Vec3) { return Vec3{0, 0, 0}; }});
  v.push_back({"S02_x", [](Vec3 p) { return p.x; }, [](Vec3) { return Vec3{1, 0, 0}; }});
  v.push_back({"S03_xyt", [](Vec3 p) { return p.x * p.y * p.t; },
               [](Vec3 p) { return Vec3{p.y * p.t, p.x * p.t, p.x * p.y}; }});
  v.push_back({"S04_quad", [](Vec3 p) { return p.x * p.x + 2 * p.y * p.y - p.t * p.t; },
               [](Vec3 p) { return Vec3{2 * p.x, 4 * p.y, -2 * p.t}; }});
  v.push_back({"S05_gauss",
               [](Vec3 p) { return std::exp(-(p.x * p.x + p.y * p.y + p.t * p.t)); },
               [](Vec3 p) {
                 double g = std::exp(-(p.x * p.x + p.y * p.y + p.t * p.t));
                 return Vec3{-2 * p.x * g, -2 * p.y * g, -2 * p.t * g};
               }});
  return v;
}

// Odd-in-x control for the edge-cancellation identity.
inline SpaceTest odd_in_x_test() {
  return {"S06_odd_x", [](Vec3 p) { return p.x * (1.0 + p.y * p.y + p.t * p.t) + p.x * p.x * p.x; },
          [](Vec3 p) {
            return Vec3{1.0 + p.y * p.y + p.t * p.t + 3 * p.x * p.x, 2 * p.x * p.y, 2 * p.x * p.t};
          }};
}

// --- plot data -------------------------------------------------------------------

// Strip decomposition table of all eight faces: the constant field vector
// and area per strip.
inline std::string face_flux_csv(const OctField& of) {
  const auto& slopes = of.stage.slopes;
  std::vector<double> cuts;
  cuts.reserve(slopes.breakpoints.size());
  for (const auto& u : slopes.breakpoints) cuts.push_back(2 * to_double(u) - 1);
  std::ostringstream os;
  os << "s1,s2,s3,strip,u_lo,u_hi,area,U_x,U_y,U_t\n";
  const std::vector<Vec2> tri{{0, 0}, {1, 0}, {0, 1}};
  for (int s1 : {+1, -1})
    for (int s2 : {+1, -1})
      for (int s3 : {+1, -1})
        for (std::size_t i = 0; i < slopes.signs.size(); ++i) {
          std::vector<Vec2> poly = tri;
          auto clip = [&](std::vector<Vec2> in, double c, int keep) {
            std::vector<Vec2> out;
            for (std::size_t e = 0; e < in.size(); ++e) {
              Vec2 p = in[e], q = in[(e + 1) % in.size()];
              double sp = keep * ((p.y - p.x) - c), sq = keep * ((q.y - q.x) - c);
              if (sp >= 0) out.push_back(p);
              if ((sp < 0) != (sq < 0)) out.push_back(p + (sp / (sp - sq)) * (q - p));
            }
            return out;
          };
          poly = clip(poly, cuts[i], +1);
          if (poly.size() >= 3) poly = clip(poly, cuts[i + 1], -1);
          if (poly.size() < 3) continue;
          Vec3 V = field_V(slopes.signs[i]);
          Vec3 U{s2 * s3 * V.x, s1 * s3 * V.y, double(s1 * s2) * V.t};
          os << s1 << ',' << s2 << ',' << s3 << ',' << i << ','
             << format_double(to_double(slopes.breakpoints[i])) << ','
             << format_double(to_double(slopes.breakpoints[i + 1])) << ','
             << format_double(std::abs(detail::polygon_area(poly)) * std::sqrt(3.0)) << ','
             << format_double(U.x) << ',' << format_double(U.y) << ',' << format_double(U.t) << '\n';
        }
  return os.str();
}

inline std::string slice_tv_csv(int grid = 101) {
  std::ostringstream os;
  os << "t,tv\n";
  for (int i = 0; i < grid; ++i) {
    double t = -1.0 + 2.0 * i / (grid - 1);
    os << format_double(t) << ',' << format_double(slice_tv(t)) << '\n';
  }
  return os.str();
}

// Octahedron wireframe and a few slice diamonds as (x, y, t) polylines,
// blank-line separated.
inline std::string wireframe_csv() {
  std::ostringstream os;
  os << "x,y,t\n";
  const std::array<Vec3, 6> verts{{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  auto emit = [&](Vec3 a, Vec3 b) {
    os << format_double(a.x) << ',' << format_double(a.y) << ',' << format_double(a.t) << '\n'
       << format_double(b.x) << ',' << format_double(b.y) << ',' << format_double(b.t) << "\n\n";
  };
  for (int i = 0; i < 4; ++i)
    for (int j = 4; j < 6; ++j) emit(verts[static_cast<std::size_t>(i)], verts[static_cast<std::size_t>(j)]);
  emit(verts[0], verts[2]);
  emit(verts[2], verts[1]);
  emit(verts[1], verts[3]);
  emit(verts[3], verts[0]);
  for (double t : {-0.5, 0.0, 0.5}) {
    double r = 1.0 - std::abs(t);
    const std::array<Vec3, 5> ring{{{r, 0, t}, {0, r, t}, {-r, 0, t}, {0, -r, t}, {r, 0, t}}};
    for (const auto& p : ring)
      os << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.t) << '\n';
    os << '\n';
  }
  return os.str();
}

}  // namespace ceq
