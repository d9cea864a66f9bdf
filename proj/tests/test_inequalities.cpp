#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "doctest.h"
#include "gcflow/entropy.hpp"
#include "gcflow/errors.hpp"
#include "gcflow/flow.hpp"
#include "gcflow/inequalities.hpp"

using namespace gcf;

namespace {

std::vector<double> alpha_grid(int dim) {
  return {-1.0, 1.0 / (dim + 2), 1.0 / dim, 0.5, 1.0, 2.0, 5.0};
}

void require_all_pass(const std::vector<CheckReport>& reps) {
  for (const auto& r : reps) {
    INFO(r.name, " ", r.inputs, " lhs=", r.lhs, " rhs=", r.rhs, " ", r.note);
    if (!r.informational) CHECK(r.pass);
  }
}

}  // namespace

TEST_CASE("report shapes") {
  auto a = inequality_report("x", "", 1.0, 2.0, 0.0);
  CHECK(a.pass);
  CHECK(a.slack == 1.0);
  auto b = inequality_report("x", "", 2.0, 1.0, 0.5);
  CHECK(!b.pass);
  auto c = identity_report("x", "", 2.0, 1.0, 1.5);
  CHECK(c.slack == -1.0);
  CHECK(c.pass);
  CHECK(c.identity);
  CHECK(count_failures({a, b, c}) == 1);
  b.informational = true;
  CHECK(count_failures({a, b, c}) == 0);
}

TEST_CASE("body digest") {
  auto g = build_grid(1, 8);
  auto d = body_digest(ball(g));
  CHECK(d.size() == 16);
  CHECK(d == body_digest(ball(g)));
  CHECK(d != body_digest(ball(g, 1.0 + 1e-15)));
  CHECK(d != body_digest(ball(build_grid(1, 9))));
}

TEST_CASE("every check is an equality on the unit ball") {
  const std::set<std::string> strict = {"jung_upper", "steinhagen_lower"};
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    const auto reps = check_all(ball(g), alpha_grid(dim));
    CHECK(reps.size() > 10);
    for (const auto& r : reps) {
      INFO(dim, " ", r.name, " ", r.inputs, " ", r.note);
      CHECK(r.pass);
      if (!strict.count(r.name)) CHECK(std::abs(r.slack) <= 1e-10);
    }
  }
}

TEST_CASE("ellipse equalities") {
  auto g = build_grid(1, 128);
  auto e = ellipsoid(g, {2.0, 0.5});
  auto bs = check_blaschke_santalo(e);
  CHECK(bs.pass);
  CHECK(std::abs(bs.slack) <= 1e-8 * bs.rhs);
  auto ai = check_affine_isoperimetric(e);
  CHECK(ai.pass);
  CHECK(std::abs(ai.slack) <= 1e-8 * ai.rhs);
  auto st = check_entropy_stability(e, 1.0 / 3);
  CHECK(st.pass);
  CHECK(std::abs(st.slack) <= 1e-8);
}

TEST_CASE("affine invariance on ellipses") {
  auto g1 = build_grid(1, 128);
  auto g2 = build_grid(2, 24);
  auto quantities = [](const SupportFunction& u) {
    const int n = u.dim();
    const double e = entropy_point(u, 1.0 / (n + 2)).value;
    const double a = std::pow(affine_surface_area(u), n + 2) / std::pow(volume(u), n);
    return std::pair{e, a};
  };
  const auto [e1, a1] = quantities(ball(g1));
  for (double s : {1.5, 2.0}) {
    const auto [e, a] = quantities(ellipsoid(g1, {s, 1 / s}));
    CHECK(std::abs(e - e1) <= 1e-8);
    CHECK(std::abs(a / a1 - 1) <= 1e-8);
  }
  const auto [e2, a2] = quantities(ball(g2));
  const auto [e, a] = quantities(ellipsoid(g2, {1.2, 1.0, 1 / 1.2}));
  CHECK(std::abs(e - e2) <= 1e-8);
  CHECK(std::abs(a / a2 - 1) <= 1e-8);
}

TEST_CASE("curvature image") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    for (double a : {0.5, 1.0, 2.0}) {
      auto ci = curvature_image(ball(g), a);
      for (double f : ci.density) CHECK(std::abs(f - 1) <= 1e-13);
      CHECK(ci.mixed_volume == doctest::Approx(unit_ball_volume(dim)).epsilon(1e-13));
      CHECK(ci.has_body == (dim == 1));
      if (ci.has_body) CHECK(hausdorff_distance(ci.body, ball(g)) <= 1e-13);
    }
  }
  auto g = build_grid(1, 16);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto u = random_body(seed, g, 0.8, false);
    for (double a : {-1.0, 0.5, 3.0}) require_all_pass(check_curvature_image(u, a));
  }
  auto u = random_body(2, g, 0.8, false);
  Vec z = entropy_point(u, 0.5).point;
  z[0] += 0.05;
  CHECK_THROWS_AS(curvature_image_about(u, 0.5, z), CompatibilityViolation);
}

TEST_CASE("entropy stability: dimension and alpha range") {
  auto g = build_grid(2, 8);
  CHECK_THROWS_AS(check_entropy_stability(ball(g), 1.0), UnsupportedDimension);
  auto g1 = build_grid(1, 16);
  CHECK_THROWS_AS(check_entropy_stability(ball(g1), 0.2), std::invalid_argument);
  auto b = check_entropy_stability(ball(g1), -1.0);
  CHECK(b.name == "entropy_stability_reverse");
  CHECK(b.pass);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto u = random_body(seed, g1, 0.8, false);
    for (double a : {0.5, 1.0, 3.0, -1.0}) CHECK(check_entropy_stability(u, a).pass);
  }
}

TEST_CASE("entropy non-negativity needs a normalized body") {
  auto g = build_grid(1, 8);
  CHECK_THROWS_AS(check_entropy_nonneg(ball(g, 1.1), 1.0), std::invalid_argument);
  auto r = check_entropy_nonneg(ball(g), 0.2);
  CHECK(r.informational);
}

TEST_CASE("soliton properties") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    const auto reps = check_soliton_properties(ball(g), 2.0);
    CHECK(reps.size() == 5);
    for (const auto& r : reps) {
      INFO(r.name, " ", r.note);
      CHECK(r.pass);
      CHECK(std::abs(r.slack) <= 1e-10);
    }
    std::vector<double> axes(dim + 1, 1.0);
    axes[0] = 1.3;
    CHECK_THROWS_AS(check_soliton_properties(ellipsoid(g, axes), 2.0), NotASoliton);
  }

  auto g = build_grid(1, 16);
  FlowOptions o;
  o.alpha = 1.0;
  o.t_end = 30.0;
  o.sample_every = 1.0;
  o.full_diagnostics = false;
  auto r = run(random_body(5, g, 0.7, true), o);
  REQUIRE(r.status == RunStatus::converged);
  require_all_pass(check_soliton_properties(r.final_state.u, 1.0));

  auto g32 = build_grid(1, 32);
  auto e = normalize_volume(ellipsoid(g32, {1.3, 1 / 1.3}));
  const auto reps = check_soliton_properties(e, 1.0 / 3);
  CHECK(reps[0].pass);
  CHECK(reps[1].pass);
  for (std::size_t i = 2; i < reps.size(); ++i) CHECK(reps[i].informational);
  CHECK_THROWS_AS(check_soliton_properties(random_body(3, g, 0.8, false), 1.0), NotASoliton);
}

TEST_CASE("small fuzz run") {
  for (int dim : {1, 2}) {
    FuzzOptions f;
    f.dim = dim;
    f.bandlimit = dim == 1 ? 16 : 10;
    f.count = dim == 1 ? 10 : 3;
    f.alphas = alpha_grid(dim);
    const auto reps = fuzz_suite(f);
    CHECK(reps.size() > static_cast<std::size_t>(f.count) * 20);
    CHECK(count_failures(reps) == 0);
    for (const auto& r : reps) {
      INFO(r.name, " ", r.inputs, " ", r.note);
      if (!r.informational) CHECK(r.pass);
    }
    // Same seeds, same reports.
    const auto again = fuzz_suite(f);
    REQUIRE(again.size() == reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) {
      CHECK(again[i].inputs == reps[i].inputs);
      CHECK(again[i].lhs == reps[i].lhs);
    }
  }
}
