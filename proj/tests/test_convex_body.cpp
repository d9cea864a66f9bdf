#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gcflow/convex_body.hpp"
#include "gcflow/entropy.hpp"
#include "gcflow/errors.hpp"

using namespace gcf;
constexpr double kPi = std::numbers::pi;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("support_about shifts by a linear function") {
  auto g = build_grid(1, 16);
  auto u = ball(g);
  auto same = support_about(u, vec2(0, 0));
  CHECK(same.values == u.values);
  auto s = support_about(u, vec2(0.5, 0));
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(std::abs(s.values[i] - (1 - 0.5 * g->coord(i, 0))) < 1e-15);
  CHECK(s.basepoint[0] == 0.5);
  auto back = support_about(s, vec2(-0.5, 0));
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(std::abs(back.values[i] - 1.0) < 1e-15);
}

TEST_CASE("curvature of balls and the ellipse") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    auto geo = curvature_data(ball(g, 1.7));
    for (double k : geo.K) CHECK(k == doctest::Approx(std::pow(1.7, -dim)).epsilon(1e-13));
    for (std::size_t i = 0; i < geo.K.size(); ++i) CHECK(geo.K[i] * geo.f[i] == 1.0);
  }
  // The ellipse support function has a complex singularity at distance
  // atanh(1/4) from the real axis; L = 128 resolves u'' to ~1e-10.
  auto g = build_grid(1, 128);
  auto e = ellipsoid(g, {2.0, 0.5});
  auto geo = curvature_data(e);
  // Node 0 is theta = 0; the radius of curvature there is b^2/a.
  CHECK(std::abs(geo.f[0] - 0.125) < 1e-8);
  CHECK(std::abs(geo.f[g->size() / 4] - 8.0) < 1e-8);
}

TEST_CASE("strong degree-4 perturbation loses convexity") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    std::vector<double> c(g->coeff_count(), 0.0);
    c[dim == 1 ? 7 : 16] = 2.0;
    auto v = g->synthesize(c);
    for (double& x : v) x += 1.0;
    CHECK_THROWS_AS(curvature_data(make_support(g, v)), ConvexityLost);
  }
}

TEST_CASE("volume, surface area and affine surface area") {
  auto c = build_grid(1, 16);
  auto s = build_grid(2, 12);
  CHECK(volume(ball(c)) == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(volume(ball(s)) == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
  CHECK(volume(ball(s, 1.5)) == doctest::Approx(std::pow(1.5, 3) * 4 * kPi / 3).epsilon(1e-12));
  CHECK(surface_area(ball(c)) == doctest::Approx(2 * kPi).epsilon(1e-13));
  CHECK(affine_surface_area(ball(c)) == doctest::Approx(2 * kPi).epsilon(1e-13));
  CHECK(surface_area(ball(s)) == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(affine_surface_area(ball(s)) == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(affine_surface_area(ball(s, 2.0)) == doctest::Approx(4 * kPi * std::pow(2.0, 1.5)).epsilon(1e-12));
  auto e = ellipsoid(build_grid(1, 64), {2.0, 0.5});
  CHECK(std::abs(volume(e) - kPi) < 1e-10);
  auto el = ellipsoid(build_grid(2, 48), {1.2, 1.0, 1.0 / 1.2});
  CHECK(std::abs(volume(el) - 4 * kPi / 3) < 1e-9);
}

TEST_CASE("widths and radii") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    auto r = width_radii(ball(g));
    CHECK(r.w_plus == doctest::Approx(2.0));
    CHECK(r.w_minus == doctest::Approx(2.0));
    CHECK(r.rho_plus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.rho_minus == doctest::Approx(1.0).epsilon(1e-12));
  }
  auto g = build_grid(1, 64);
  auto r = width_radii(ellipsoid(g, {2.0, 0.5}));
  CHECK(std::abs(r.rho_plus - 2.0) < 1e-10);
  CHECK(std::abs(r.rho_minus - 0.5) < 1e-10);
  CHECK(std::abs(r.w_plus - 4.0) < 1e-12);
  CHECK(std::abs(r.w_minus - 1.0) < 1e-12);
  // Off-centre: radii unchanged, centres move with the body.
  auto shifted = support_about(ellipsoid(g, {2.0, 0.5}), vec2(-0.3, 0.2));
  auto rs = width_radii(shifted);
  CHECK(std::abs(rs.rho_plus - 2.0) < 1e-10);
  CHECK(std::abs(rs.rho_minus - 0.5) < 1e-10);
  auto rb = width_radii(ball(g, 0.8, vec2(0.3, -0.2)));
  CHECK(std::abs(rb.rho_plus - 0.8) < 1e-12);
  CHECK((rb.outer_center - vec2(0.3, -0.2)).norm() < 1e-12);
  CHECK((rb.inner_center - vec2(0.3, -0.2)).norm() < 1e-12);
}

TEST_CASE("dual volume") {
  auto c = build_grid(1, 32);
  CHECK(dual_volume(ball(c), vec2(0, 0)) == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(dual_volume(ball(c, 2.0), vec2(0, 0)) == doctest::Approx(kPi / 4).epsilon(1e-13));
  CHECK(std::abs(dual_volume(ball(c), vec2(0.5, 0)) - kPi * std::pow(0.75, -1.5)) < 1e-10);
  auto s = build_grid(2, 8);
  CHECK(dual_volume(ball(s, 0.5), vec3(0, 0, 0)) == doctest::Approx(8 * 4 * kPi / 3).epsilon(1e-12));
  CHECK_THROWS_AS(dual_volume(ball(c), vec2(1.0, 0)), NotInterior);
}

TEST_CASE("boundary points") {
  auto c = build_grid(1, 16);
  auto pts = boundary_points(ball(c));
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK((pts[i] - c->node(i)).norm() < 1e-13);
  auto s = build_grid(2, 8);
  const Vec z = vec3(0.2, -0.1, 0.3);
  auto sp = boundary_points(ball(s, 1.0, z));
  for (std::size_t i = 0; i < sp.size(); ++i) CHECK((sp[i] - s->node(i) - z).norm() < 1e-12);
  auto e = boundary_points(ellipsoid(build_grid(1, 128), {2.0, 0.5}));
  double m = 0.0;
  for (const auto& p : e) m = std::max(m, p.norm());
  CHECK(std::abs(m - 2.0) < 1e-8);
}

TEST_CASE("Hausdorff distance") {
  auto c = build_grid(1, 16);
  CHECK(hausdorff_distance(ball(c), ball(c)) == 0.0);
  CHECK(hausdorff_distance(ball(c), ball(c, 1.1)) == doctest::Approx(0.1).epsilon(1e-14));
  // Along a node direction the grid sees the full |z|.
  const Vec z = 0.5 * c->node(5);
  CHECK(std::abs(hausdorff_distance(ball(c), ball(c, 1.0, z)) - 0.5) < 1e-12);
  auto s = build_grid(2, 8);
  const Vec zs = 0.3 * s->node(40);
  CHECK(std::abs(hausdorff_distance(ball(s), ball(s, 1.0, zs)) - 0.3) < 1e-12);
  CHECK_THROWS_AS(hausdorff_distance(ball(c), ball(build_grid(1, 8))), GridMismatch);
  CHECK_THROWS_AS(hausdorff_distance(ball(c), support_about(ball(c), z)), GridMismatch);
}

TEST_CASE("random bodies") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 12);
    auto zero = random_body(3, g, 0.0, false);
    for (double v : zero.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto u = random_body(seed, g, 0.8, false);
      CHECK(std::abs(volume(u) / unit_ball_volume(dim) - 1.0) < 1e-12);
      auto geo = curvature_data(u);
      for (double l : geo.lambda_min) CHECK(l > 0.0);
      auto sym = random_body(seed, g, 0.8, true);
      for (std::size_t i = 0; i < g->size(); ++i)
        CHECK(std::abs(sym.values[i] - sym.values[g->antipode(i)]) < 1e-14);
    }
    auto a = random_body(42, g, 0.5, false);
    auto b = random_body(42, g, 0.5, false);
    CHECK(a.values == b.values);
  }
  CHECK_THROWS_AS(random_body(1, build_grid(1, 8), 1.0, false), std::invalid_argument);
}

TEST_CASE("translation invariance and scaling laws") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 12);
    auto u = random_body(7, g, 0.7, false);
    Vec z = Vec::Zero(dim + 1);
    z[0] = 0.13;
    z[dim] = -0.07;
    auto v = support_about(u, z);
    CHECK(std::abs(volume(v) - volume(u)) < 1e-10);
    CHECK(std::abs(surface_area(v) - surface_area(u)) < 1e-10);
    CHECK(std::abs(affine_surface_area(v) - affine_surface_area(u)) < 1e-10);
    auto r1 = width_radii(u), r2 = width_radii(v);
    CHECK(std::abs(r1.w_plus - r2.w_plus) < 1e-10);
    CHECK(std::abs(r1.w_minus - r2.w_minus) < 1e-10);
    CHECK(std::abs(r1.rho_plus - r2.rho_plus) < 1e-10);
    CHECK(std::abs(r1.rho_minus - r2.rho_minus) < 1e-10);

    auto s = scaled(u, 2.0);
    CHECK(volume(s) / volume(u) == doctest::Approx(std::pow(2.0, dim + 1)).epsilon(1e-10));
    CHECK(surface_area(s) / surface_area(u) == doctest::Approx(std::pow(2.0, dim)).epsilon(1e-10));
    CHECK(affine_surface_area(s) / affine_surface_area(u) ==
          doctest::Approx(std::pow(2.0, dim * (dim + 1.0) / (dim + 2.0))).epsilon(1e-10));
  }
}

TEST_CASE("dual volume: convex along segments, minimal at the Santalo point") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 12);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto u = random_body(seed, g, 0.7, false);
      const auto sp = santalo_point(u);
      std::mt19937_64 rng(seed);
      for (int t = 0; t < 20; ++t) {
        Vec a(dim + 1), b(dim + 1);
        for (int k = 0; k <= dim; ++k) {
          a[k] = 0.4 * (2 * uniform01(rng) - 1);
          b[k] = 0.4 * (2 * uniform01(rng) - 1);
        }
        const double da = dual_volume(u, a), db = dual_volume(u, b);
        CHECK(dual_volume(u, 0.5 * (a + b)) <= 0.5 * (da + db) + 1e-12);
        CHECK(sp.dual_volume <= da + 1e-12);
      }
    }
  }
}

TEST_CASE("body files round-trip bit-exactly") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    Vec z = Vec::Zero(dim + 1);
    z[0] = 0.1;
    auto u = support_about(random_body(11, g, 0.6, false), z);
    std::stringstream ss;
    write_body(ss, u, {{"tool", "test"}});
    auto v = read_body(ss);
    CHECK(v.dim() == dim);
    CHECK(v.grid->bandlimit() == 8);
    CHECK(v.values == u.values);
    CHECK(v.basepoint == u.basepoint);
    std::stringstream again;
    write_body(again, v, {{"tool", "test"}});
    std::stringstream first;
    write_body(first, u, {{"tool", "test"}});
    CHECK(again.str() == first.str());
  }
  std::stringstream bad("dim=1\nbandlimit=8\ncount=3\n1\n2\n3\n");
  CHECK_THROWS(read_body(bad));
}
