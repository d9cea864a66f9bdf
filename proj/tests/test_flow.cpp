#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gcflow/entropy.hpp"
#include "gcflow/errors.hpp"
#include "gcflow/flow.hpp"

using namespace gcf;

namespace {

FlowState state_of(const SupportFunction& u, FlowKind kind, double alpha) {
  FlowState s;
  s.kind = kind;
  s.alpha = alpha;
  s.u = u;
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("rhs on balls") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    for (double a : {0.4, 1.0 / dim, 1.0, 2.0}) {
      CHECK(max_abs(rhs(state_of(ball(g), FlowKind::normalized, a))) <= 1e-12);
      const double R = 1.3;
      for (double v : rhs(state_of(ball(g, R), FlowKind::unnormalized, a)))
        CHECK(v == doctest::Approx(-std::pow(R, -dim * a)).epsilon(1e-12));
    }
    const double R = 0.7;
    for (double v : rhs(state_of(ball(g, R), FlowKind::expanding, 1.0)))
      CHECK(v == doctest::Approx(std::pow(R, dim + 2)).epsilon(1e-12));
  }
  auto g = build_grid(1, 8);
  Vec z(2);
  z << 1.5, 0.0;
  CHECK_THROWS_AS(rhs(state_of(support_about(ball(g), z), FlowKind::expanding, 1.0)), NotInterior);
  CHECK_THROWS_AS(rhs(state_of(ball(g), FlowKind::normalized, 0.0)), std::invalid_argument);
}

TEST_CASE("step: stationary sphere and dt limits") {
  auto g = build_grid(2, 8);
  FlowOptions o;
  auto s = state_of(ball(g), FlowKind::normalized, 1.0);
  const double dt = stable_dt(s, o.cfl);
  CHECK(dt > 0.0);
  double t = 0.0;
  while (t < 1.0) {
    s = step(s, 1.0 - s.time, o);
    t = s.time;
    CHECK(s.dt_last <= dt * (1 + 1e-12));
  }
  CHECK(s.time == 1.0);
  for (double v : s.u.values) CHECK(std::abs(v - 1.0) <= 1e-12);
  CHECK(s.cumulative_rescale < 1e-12);
  CHECK(s.rejected_steps == 0);
}

TEST_CASE("step failure is reported with the node") {
  auto g = build_grid(1, 16);
  auto u = random_body(4, g, 0.9, false);
  FlowOptions o;
  o.cfl = 1e6;
  o.max_halvings = 2;
  auto s = state_of(u, FlowKind::unnormalized, 2.0);
  CHECK_THROWS_AS(step(s, 10.0, o), StepFailure);
  o.kind = FlowKind::unnormalized;
  o.alpha = 2.0;
  o.t_end = 1.0;
  auto r = run(u, o);
  CHECK(r.status == RunStatus::step_failed);
  CHECK(r.trajectory.size() == 1);
  CHECK(!r.message.empty());
}

TEST_CASE("shrinking circle follows sqrt(R0^2 - 2 tau)") {
  auto g = build_grid(1, 16);
  FlowOptions o;
  o.kind = FlowKind::unnormalized;
  o.alpha = 1.0;
  o.t_end = 0.8 * 1.69 / 2;
  o.sample_every = 0.05;
  o.full_diagnostics = false;
  auto r = run(ball(g, 1.3), o);
  CHECK(r.status == RunStatus::completed);
  CHECK(r.trajectory.back().time == doctest::Approx(o.t_end).epsilon(1e-15));
  for (const auto& d : r.trajectory) {
    const double R = std::sqrt(1.69 - 2 * d.time);
    CHECK(std::abs(d.max_u / R - 1) <= 1e-6);
    CHECK(std::abs(d.min_u / R - 1) <= 1e-6);
  }
}

TEST_CASE("sphere extinction bracket") {
  auto g = build_grid(2, 8);
  FlowOptions o;
  o.kind = FlowKind::unnormalized;
  o.alpha = 1.0;
  o.t_end = 1.0;
  o.sample_every = 0.05;
  auto r = run(ball(g), o);
  CHECK(r.status == RunStatus::volume_floor);
  // Both ends coincide for a ball, up to the time error near extinction.
  CHECK(r.extinction_lower <= r.extinction_upper + 1e-9);
  CHECK(std::abs(r.extinction_lower - 1.0 / 3) < 1e-4);
  CHECK(std::abs(r.extinction_upper - 1.0 / 3) < 1e-4);
  CHECK(r.limit_point.norm() < 1e-10);
}

TEST_CASE("normalized run: volume, monotone entropy, dissipation") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, dim == 1 ? 16 : 10);
    auto u = random_body(6, g, 0.8, false);
    FlowOptions o;
    o.alpha = 1.0;
    o.t_end = 0.06;
    o.sample_every = 0.002;
    o.stop_tolerance = 0.0;
    auto r = run(u, o);
    REQUIRE(r.status == RunStatus::completed);
    const auto& T = r.trajectory;
    const double ball_v = unit_ball_volume(dim);
    CHECK(T.front().entropy_point.norm() < 1e-10);
    for (std::size_t i = 0; i < T.size(); ++i) {
      CHECK(std::abs(T[i].volume - ball_v) <= 1e-10 * ball_v);
      CHECK(T[i].dissipation >= -1e-12);
      CHECK(std::isfinite(T[i].entropy));
      CHECK(std::isfinite(T[i].zalpha));
      if (i > 0) CHECK(T[i].entropy <= T[i - 1].entropy + 1e-8);
    }
    for (std::size_t i = 1; i + 1 < T.size(); ++i) {
      const double fd = (T[i + 1].entropy - T[i - 1].entropy) / (T[i + 1].time - T[i - 1].time);
      CHECK(std::abs(fd + T[i].dissipation) <= 1e-2 * std::abs(T[i].dissipation) + 1e-9);
    }
  }
}

TEST_CASE("symmetric body converges to the ball and stops early") {
  auto g = build_grid(1, 16);
  auto u = random_body(2, g, 0.8, true);
  FlowOptions o;
  o.alpha = 1.0;
  o.t_end = 30.0;
  o.sample_every = 1.0;
  o.full_diagnostics = false;
  auto r = run(u, o);
  CHECK(r.status == RunStatus::converged);
  CHECK(r.final_state.time < 30.0);
  CHECK(soliton_residual(r.final_state.u, 1.0).residual < 1e-8);
  CHECK(hausdorff_distance(r.final_state.u, ball(g)) < 1e-4);
  // min K stays positive, and the run sat in a fixed band after t = 1.
  for (const auto& d : r.trajectory) {
    CHECK(d.min_K > 0.0);
    if (d.time >= 1.0) CHECK(d.max_u < 1.5);
  }
}

TEST_CASE("soliton residual") {
  for (int dim : {1, 2}) {
    auto g = build_grid(dim, 8);
    auto s = soliton_residual(ball(g), 2.0);
    CHECK(s.residual < 1e-12);
    CHECK(s.lambda == doctest::Approx(1.0).epsilon(1e-13));
    for (double a : {0.5, 1.0, 2.0}) CHECK(soliton_residual(ball(g, 1.7), a).residual < 1e-12);
  }
  auto g = build_grid(1, 128);
  CHECK(soliton_residual(ellipsoid(g, {2.0, 0.5}), 1.0 / 3).residual <= 1e-8);
  CHECK(soliton_residual(ellipsoid(g, {2.0, 0.5}), 1.0).residual > 0.1);
}

TEST_CASE("unnormalized run: min K grows, rescaling and the limit point") {
  auto g = build_grid(1, 32);
  auto e = ellipsoid(g, {1.2, 1.0 / 1.2});
  Vec shift(2);
  shift << 0.1, -0.05;
  auto u = support_about(e, shift);
  for (double a : {0.5, 2.0}) {
    FlowOptions o;
    o.kind = FlowKind::unnormalized;
    o.alpha = a;
    o.t_end = 10.0;
    o.sample_every = 0.02;
    o.keep_snapshots = true;
    auto r = run(u, o);
    CHECK(r.status == RunStatus::volume_floor);
    const auto& T = r.trajectory;
    for (std::size_t i = 1; i < T.size(); ++i) CHECK(T[i].min_K >= T[i - 1].min_K - 1e-10);
    CHECK(r.extinction_lower <= T.back().time + 1e-3);
    CHECK(r.extinction_lower <= r.extinction_upper + 1e-12);
    CHECK(std::isnan(T.back().entropy_origin));
    // The ellipse is centred at -shift relative to the basepoint.
    CHECK((r.limit_point + shift).norm() < 1e-3);

    auto rt = rescale_trajectory(r, a);
    CHECK(rt.max_entropy_deviation <= 1e-8);
    for (double v : rt.volumes) CHECK(std::abs(v / std::numbers::pi - 1) <= 1e-10);
    for (const auto& b : rt.bodies) {
      std::vector<double> p(b.size());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::pow(b.values[i], 1 - 1 / a);
      const double avg = g->average(p);
      if (a < 1)
        CHECK(avg <= 1 + 1e-6);
      else
        CHECK(avg >= 1 - 1e-6);
    }
  }
  FlowOptions o;
  o.kind = FlowKind::unnormalized;
  o.t_end = 0.05;
  o.keep_snapshots = true;
  auto short_run = run(ball(g), o);
  CHECK_THROWS_AS(rescale_trajectory(short_run, 1.0), InsufficientContraction);
  o.keep_snapshots = false;
  CHECK_THROWS_AS(rescale_trajectory(run(ball(g), o), 1.0), std::invalid_argument);
}

TEST_CASE("shrinking ball rescales to the unit ball") {
  auto g = build_grid(2, 6);
  FlowOptions o;
  o.kind = FlowKind::unnormalized;
  o.t_end = 1.0;
  o.sample_every = 0.05;
  o.keep_snapshots = true;
  auto r = run(ball(g, 1.0), o);
  auto rt = rescale_trajectory(r, 1.0);
  for (const auto& b : rt.bodies)
    for (double v : b.values) CHECK(std::abs(v - 1.0) < 1e-9);
}

TEST_CASE("expanding flow: Q and Q - J3 are non-increasing") {
  auto g = build_grid(1, 16);
  auto u = random_body(8, g, 0.8, false);
  FlowOptions o;
  o.kind = FlowKind::expanding;
  o.alpha = 1.0;
  o.t_end = 0.3;
  o.sample_every = 0.02;
  auto r = run(u, o);
  REQUIRE(r.status == RunStatus::completed);
  const auto& T = r.trajectory;
  for (std::size_t i = 0; i < T.size(); ++i) {
    CHECK(T[i].has_J3);
    CHECK(T[i].Q >= -1e-10);
    CHECK(T[i].dissipation >= -1e-12);
    // The origin stays the entropy point.
    CHECK(T[i].entropy_point.norm() < 1e-8);
    if (i > 0) {
      CHECK(T[i].Q <= T[i - 1].Q + 1e-10);
      CHECK(T[i].Q - T[i].J3 <= T[i - 1].Q - T[i - 1].J3 + 1e-10);
      CHECK(T[i].volume > T[i - 1].volume);
    }
  }
}

TEST_CASE("flow kind names round-trip") {
  for (auto k : {FlowKind::unnormalized, FlowKind::normalized, FlowKind::expanding})
    CHECK(parse_flow_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_flow_kind("sideways"), std::invalid_argument);
}
