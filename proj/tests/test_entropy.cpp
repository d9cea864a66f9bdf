#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gcflow/entropy.hpp"
#include "gcflow/errors.hpp"

using namespace gcf;
constexpr double kPi = std::numbers::pi;

namespace {

Vec at(int dim, double x, double y = 0.0) {
  Vec v = Vec::Zero(dim + 1);
  v[0] = x;
  v[1] = y;
  return v;
}

}  // namespace

TEST_CASE("entropy of balls and of the shifted disk") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    for (double a : {-1.0, 0.25, 0.5, 1.0, 2.0}) {
      CHECK(std::abs(entropy_at(ball(g), at(dim, 0), a)) < 1e-14);
      CHECK(entropy_at(ball(g, 1.7), at(dim, 0), a) == doctest::Approx(std::log(1.7)).epsilon(1e-13));
    }
  }
  auto g = build_grid(1, 32);
  const double want = std::log((1 + std::sqrt(0.75)) / 2);
  CHECK(std::abs(entropy_at(ball(g), at(1, 0.5), 1.0) - want) < 1e-10);
  CHECK(std::abs(entropy_at(ball(g), at(1, 0.5), 1.0 + 5e-10) - want) < 1e-10);
  CHECK_THROWS_AS(entropy_at(ball(g), at(1, 0), 0.0), AlphaZero);
  CHECK_THROWS_AS(entropy_at(ball(g), at(1, 1.2), 1.0), NotInterior);
}

TEST_CASE("entropy point: symmetry, equivariance, stationarity") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 12);
    for (double a : {-1.0, 1.0 / (dim + 2), 0.5, 1.0, 2.0, 5.0}) {
      auto sym = random_body(5, g, 0.7, true);
      auto e = entropy_point(sym, a);
      CHECK(e.point.norm() < 1e-10);
      CHECK(e.gradient_norm <= 1e-10);
      CHECK(e.iterations < 20);

      auto u = random_body(9, g, 0.8, false);
      auto eu = entropy_point(u, a);
      CHECK(eu.gradient_norm <= 1e-10);
      Vec v = Vec::Zero(dim + 1);
      v[0] = 0.21;
      v[dim] = -0.12;
      // The body moves by v relative to the basepoint, i.e. u(x) + <v, x>.
      auto moved = support_about(u, -v);
      auto em = entropy_point(moved, a);
      CHECK((em.point - (eu.point + v)).norm() < 1e-10);
      CHECK(std::abs(em.value - eu.value) < 1e-10);
    }
  }
  auto g = build_grid(1, 16);
  auto e = entropy_point(ball(g), 1.0);
  CHECK(e.point.norm() < 1e-14);
  CHECK(std::abs(e.value) < 1e-15);
}

TEST_CASE("extremal property: max for alpha > 0, min for alpha < 0") {
  auto g = build_grid(2, 10);
  auto u = random_body(21, g, 0.8, false);
  for (double a : {0.5, 2.0, -1.0}) {
    auto e = entropy_point(u, a);
    for (int k = 0; k < 3; ++k) {
      Vec d = Vec::Zero(3);
      d[k] = 0.05;
      const double side = entropy_at(u, e.point + d, a);
      if (a > 0)
        CHECK(side < e.value);
      else
        CHECK(side > e.value);
    }
  }
}

TEST_CASE("monotone in alpha, non-negative at unit volume, scaling") {
  const std::vector<double> grid_a = {0.15, 0.25, 0.5, 1.0, 2.0, 5.0};
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 12);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto u = random_body(seed, g, 0.8, false);
      const Vec z = entropy_point(u, 1.0).point;
      double prev = -1e300;
      for (double a : grid_a) {
        const double e = entropy_at(u, z, a);
        CHECK(e > prev);
        prev = e;
      }
      for (double a : {-1.0, 1.0 / (dim + 2), 1.0 / dim, 0.5, 1.0, 2.0, 5.0}) {
        const auto e = entropy_point(u, a);
        CHECK(e.value >= -1e-10);
        const auto s = entropy_point(scaled(u, 1.5), a);
        CHECK(std::abs(s.value - e.value - std::log(1.5)) < 1e-10);
      }
    }
    // Balls are flat in alpha.
    double prev = entropy_at(ball(g, 1.3), at(dim, 0), 0.15);
    for (double a : grid_a) CHECK(std::abs(entropy_at(ball(g, 1.3), at(dim, 0), a) - prev) < 1e-12);
  }
}

TEST_CASE("Santalo point") {
  auto g = build_grid(1, 64);
  auto s = santalo_point(ball(g));
  CHECK(s.point.norm() < 1e-14);
  CHECK(s.dual_volume == doctest::Approx(kPi).epsilon(1e-13));
  auto e = ellipsoid(g, {2.0, 0.5});
  auto se = santalo_point(e);
  CHECK(se.point.norm() < 1e-10);
  CHECK(std::abs(volume(e) * se.dual_volume - kPi * kPi) < 1e-8 * kPi * kPi);
  auto g2 = build_grid(2, 12);
  auto u = random_body(4, g2, 0.8, false);
  auto su = santalo_point(u);
  for (int k = 0; k < 3; ++k) {
    Vec d = Vec::Zero(3);
    d[k] = 0.01;
    CHECK(dual_volume(u, su.point + d) > su.dual_volume);
    CHECK(dual_volume(u, su.point - d) > su.dual_volume);
  }
}

TEST_CASE("Z_alpha") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    for (double a : {0.5, 1.0, 2.0}) {
      CHECK(zalpha(ball(g), a) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(zalpha(ball(g, 1.4), a) == doctest::Approx(std::pow(1.4, -dim)).epsilon(1e-13));
    }
  }
  auto g = build_grid(1, 16);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto u = random_body(seed, g, 0.8, false);
    for (double a : {0.5, 2.0}) CHECK(zalpha(u, a) >= std::exp(entropy_point(u, a).value) * (1 - 1e-10));
  }
}

TEST_CASE("weighted dual identities") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 12);
    auto w = weighted_dual_identities(ball(g), at(dim, 0), 0.5);
    const double omega = sphere_measure(dim);
    CHECK(w.lhs == doctest::Approx(omega).epsilon(1e-13));
    CHECK(w.rhs == doctest::Approx(omega).epsilon(1e-13));
    CHECK(std::abs(w.symmetric_difference_term) < 1e-14);
    auto shifted = weighted_dual_identities(ball(g), at(dim, 0.3), 0.5);
    CHECK(std::abs(shifted.lhs - shifted.rhs) < 1e-10 * shifted.lhs);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto u = random_body(seed, g, 0.8, false);
      for (double a : {-1.0, 1.0 / (dim + 2), 0.5, 2.0, 5.0}) {
        const Vec z = entropy_point(u, a).point;
        auto r = weighted_dual_identities(u, z, a);
        CHECK(std::abs(r.lhs - r.rhs) <= 1e-10 * std::abs(r.lhs));
        CHECK(r.decomposition_applies);
        CHECK(std::abs(r.average - r.decomposition) <= 1e-10 * std::abs(r.average));
        // Entropy recovered from the integral.
        CHECK(std::abs(r.lhs - omega * std::exp((a - 1) / a * entropy_at(u, z, a))) < 1e-10 * r.lhs);
      }
    }
  }
  auto g = build_grid(1, 8);
  CHECK_THROWS_AS(weighted_dual_identities(ball(g), at(1, 0), 1.0), std::invalid_argument);
}

TEST_CASE("weighted identity against a radial quadrature oracle") {
  // Polar-body weighted volume integrated directly in polar form, radial
  // integral by quadrature on [0, 1/u_z] per direction.
  auto g = build_grid(1, 16);
  auto u = random_body(3, g, 0.8, false);
  const double a = 0.5;
  const Vec z = entropy_point(u, a).point;
  auto r = weighted_dual_identities(u, z, a);
  const auto uz = support_about(u, z);
  // Substituting r = R s^{1/gamma} removes the endpoint singularity.
  const double gamma = 1 / a - 1;
  double vol = 0.0;
  const auto w = g->weights();
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double R = 1.0 / uz.values[i];
    double acc = 0.0;
    const int m = 64;
    for (int k = 0; k < m; ++k) {
      const double s = (k + 0.5) / m;
      const double rr = R * std::pow(s, 1 / gamma);
      acc += std::pow(rr, gamma - 1) * R * std::pow(s, 1 / gamma - 1) / gamma / m;
    }
    vol += w[i] * acc;
  }
  CHECK(std::abs(gamma * vol - r.rhs) < 1e-10 * r.rhs);
}

TEST_CASE("concavity probe") {
  auto g = build_grid(2, 10);
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto u = random_body(seed, g, 0.8, false);
    for (double a : {0.5, 1.0, 2.0}) {
      const Vec z = entropy_point(u, a).point;
      CHECK(concavity_probe(u, a, z, z));
      for (int t = 0; t < 30; ++t) {
        Vec z1(3), z2(3);
        for (int k = 0; k < 3; ++k) {
          z1[k] = 0.5 * (2 * uniform01(rng) - 1);
          z2[k] = 0.5 * (2 * uniform01(rng) - 1);
        }
        CHECK(concavity_probe(u, a, z1, z2));
      }
      // Along a line through z_e the entropy falls off on both sides.
      Vec d = Vec::Zero(3);
      d[1] = 0.1;
      const double e0 = entropy_at(u, z, a);
      CHECK(entropy_at(u, z + d, a) < e0);
      CHECK(entropy_at(u, z + 2 * d, a) < entropy_at(u, z + d, a));
      CHECK(entropy_at(u, z - d, a) < e0);
    }
  }
}
