#include "gcflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gcflow/entropy.hpp"
#include "gcflow/errors.hpp"
#include "gcflow/inequalities.hpp"
#include "gcflow/kernels.hpp"

namespace gcf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PositivityLost {
  std::size_t node;
  double value;
};

std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

double eta_of(const BodyGeometry& g, const SphereGrid& grid, double alpha) {
  std::vector<double> v(g.K.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(g.K[i], alpha - 1.0);
  return grid.average(v);
}

std::vector<double> speed(FlowKind kind, double alpha, const SupportFunction& u,
                          const BodyGeometry& g) {
  const auto& grid = *u.grid;
  const double eta = kind == FlowKind::normalized ? eta_of(g, grid, alpha) : 1.0;
  std::vector<double> out(u.size());
  kernels::omp::flow_speed(kind, alpha, eta, g.f, u.values, out);
  return grid.project(out);
}

void check_positive(FlowKind kind, const std::vector<double>& u) {
  if (kind == FlowKind::unnormalized) return;
  const auto i = argmin(u);
  if (!(u[i] > 0.0)) throw PositivityLost{i, u[i]};
}

void scale_geometry(BodyGeometry& g, double s) {
  const double sn = std::pow(s, g.dim);
  for (double& v : g.a) v *= s;
  for (double& v : g.f) v *= sn;
  for (double& v : g.K) v /= sn;
  for (double& v : g.lambda_min) v *= s;
  for (double& v : g.lambda_max) v *= s;
  for (double& v : g.gradient) v *= s;
}

double max_diffusion(FlowKind kind, double alpha, const SupportFunction& u, const BodyGeometry& g) {
  const double eta = kind == FlowKind::normalized ? eta_of(g, *u.grid, alpha) : 1.0;
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double di;
    if (kind == FlowKind::expanding)
      di = std::pow(u.values[i], 1.0 + 1.0 / alpha) * g.f[i] / g.lambda_min[i];
    else
      di = alpha * std::pow(g.K[i], alpha) / (g.lambda_min[i] * eta);
    d = std::max(d, di);
  }
  return d;
}

std::shared_ptr<const BodyGeometry> geometry_of(const FlowState& s) {
  if (s.geometry) return s.geometry;
  return std::make_shared<const BodyGeometry>(curvature_data(s.u));
}

void check_flow_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("flows need alpha > 0");
}

}  // namespace

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::converged: return "converged";
    case RunStatus::volume_floor: return "volume_floor";
    case RunStatus::step_failed: return "step_failed";
  }
  return "unknown";
}

const char* to_string(FlowKind k) {
  switch (k) {
    case FlowKind::unnormalized: return "unnormalized";
    case FlowKind::normalized: return "normalized";
    case FlowKind::expanding: return "expanding";
  }
  return "unknown";
}

FlowKind parse_flow_kind(const std::string& s) {
  if (s == "unnormalized") return FlowKind::unnormalized;
  if (s == "normalized") return FlowKind::normalized;
  if (s == "expanding") return FlowKind::expanding;
  throw std::invalid_argument("unknown flow kind '" + s + "'");
}

std::vector<double> rhs(const FlowState& state) {
  check_flow_alpha(state.alpha);
  if (state.kind == FlowKind::expanding && !(state.u.min() > 0.0)) throw NotInterior(state.u.min());
  return speed(state.kind, state.alpha, state.u, *geometry_of(state));
}

double stable_dt(const FlowState& state, double cfl) {
  const double h = state.u.grid->node_spacing();
  const double d = max_diffusion(state.kind, state.alpha, state.u, *geometry_of(state));
  return cfl * h * h / d;
}

FlowState step(const FlowState& state, double dt_request, const FlowOptions& opts) {
  check_flow_alpha(state.alpha);
  const auto g0 = geometry_of(state);
  const auto& u0 = state.u.values;
  const std::size_t n = u0.size();
  const double h = state.u.grid->node_spacing();
  double dt = std::min(dt_request, opts.cfl * h * h / max_diffusion(state.kind, state.alpha, state.u, *g0));
  const auto k1 = speed(state.kind, state.alpha, state.u, *g0);

  SupportFunction y = state.u;
  auto stage = [&](const std::vector<double>& k, double c) {
    for (std::size_t i = 0; i < n; ++i) y.values[i] = u0[i] + c * k[i];
    check_positive(state.kind, y.values);
    const auto g = curvature_data(y);
    return speed(state.kind, state.alpha, y, g);
  };

  long rejected = 0;
  std::string reason;
  std::size_t node = 0;
  for (int attempt = 0; attempt <= opts.max_halvings; ++attempt) {
    try {
      const auto k2 = stage(k1, 0.5 * dt);
      const auto k3 = stage(k2, 0.5 * dt);
      const auto k4 = stage(k3, dt);
      for (std::size_t i = 0; i < n; ++i)
        y.values[i] = u0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      check_positive(state.kind, y.values);
      auto g = curvature_data(y);

      FlowState next = state;
      next.u = std::move(y);
      next.steps = state.steps + 1;
      next.rejected_steps = state.rejected_steps + rejected;
      next.dt_last = dt;
      next.time = dt == dt_request ? state.time + dt_request : state.time + dt;
      if (state.kind == FlowKind::normalized) {
        const int dim = next.u.dim();
        const double s = std::pow(unit_ball_volume(dim) / volume(next.u, g), 1.0 / (dim + 1));
        for (double& v : next.u.values) v *= s;
        scale_geometry(g, s);
        next.cumulative_rescale += std::abs(std::log(s));
      }
      next.geometry = std::make_shared<const BodyGeometry>(std::move(g));
      return next;
    } catch (const ConvexityLost& e) {
      reason = "convexity lost";
      node = e.node();
    } catch (const PositivityLost& e) {
      reason = "support function no longer positive";
      node = e.node;
    }
    dt *= 0.5;
    ++rejected;
  }
  throw StepFailure(reason + " after " + std::to_string(opts.max_halvings) + " halvings", node,
                    state.time);
}

SolitonResidual soliton_residual(const SupportFunction& u, const BodyGeometry& g, double alpha) {
  const auto& grid = *u.grid;
  const std::size_t n = u.size();
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::pow(g.f[i], 1.0 - alpha);
    b[i] = u.values[i] * g.f[i];
  }
  SolitonResidual r;
  r.lambda = grid.average(a) / grid.average(b);
  for (std::size_t i = 0; i < n; ++i)
    r.residual = std::max(r.residual, std::abs(r.lambda * u.values[i] * std::pow(g.f[i], alpha) - 1.0));
  return r;
}

SolitonResidual soliton_residual(const SupportFunction& u, double alpha) {
  return soliton_residual(u, curvature_data(u), alpha);
}

double dissipation(const SupportFunction& u, const BodyGeometry& g, FlowKind kind, double alpha) {
  const auto& grid = *u.grid;
  const std::size_t n = u.size();
  const double vol = volume(u, g);
  const int dim = u.dim();
  std::vector<double> p(n), q(n);
  if (kind == FlowKind::expanding) {
    // int f^{-1/a} dsigma / int dsigma - int dsigma / int f^{1/a} dsigma, f = K^a/u, dsigma = u/K.
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = std::pow(u.values[i], 1.0 + 1.0 / alpha) * g.f[i] * g.f[i];
      q[i] = std::pow(u.values[i], 1.0 - 1.0 / alpha);
    }
    const double sigma = (dim + 1) * vol;
    return grid.integrate(p) / sigma - sigma / grid.integrate(q);
  }
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = std::pow(g.K[i], alpha) * std::pow(u.values[i], -1.0 / alpha);
    q[i] = std::pow(u.values[i], 1.0 - 1.0 / alpha);
  }
  const double ratio = grid.integrate(p) / grid.integrate(q);
  if (kind == FlowKind::normalized)
    return ratio * (vol / unit_ball_volume(dim)) / eta_of(g, grid, alpha) - 1.0;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::pow(g.K[i], alpha - 1.0);
  return ratio - grid.integrate(r) / ((dim + 1) * vol);
}

DiagnosticsRecord diagnose(const FlowState& state, bool full) {
  const auto gp = geometry_of(state);
  const auto& g = *gp;
  const auto& u = state.u;
  const auto& grid = *u.grid;
  const int dim = u.dim();
  const double alpha = state.alpha;
  DiagnosticsRecord r;
  r.time = state.time;
  r.steps = state.steps;
  r.dt = state.dt_last;
  r.volume = volume(u, g);
  r.eta = eta_of(g, grid, alpha);
  r.min_u = u.min();
  r.max_u = u.max();
  r.min_K = *std::min_element(g.K.begin(), g.K.end());
  r.max_K = *std::max_element(g.K.begin(), g.K.end());
  const auto sol = soliton_residual(u, g, alpha);
  r.soliton_residual = sol.residual;
  r.soliton_lambda = sol.lambda;
  r.tail_fraction = g.tail_fraction;
  r.cumulative_rescale = state.cumulative_rescale;
  r.zalpha = zalpha(g, grid, alpha);
  r.entropy_origin = r.min_u > 0.0 ? entropy_at(u, Vec::Zero(dim + 1), alpha) : kNaN;
  r.entropy_point = Vec::Zero(dim + 1);
  if (full) {
    const auto radii = width_radii(u);
    r.w_plus = radii.w_plus;
    r.w_minus = radii.w_minus;
    r.rho_plus = radii.rho_plus;
    r.rho_minus = radii.rho_minus;
    const auto ep = entropy_point(u, alpha);
    r.entropy = ep.value;
    r.entropy_point = ep.point;
    r.entropy_gradient = ep.gradient_norm;
    r.dissipation = dissipation(support_about(u, ep.point), g, state.kind, alpha);
  } else {
    r.entropy = r.entropy_origin;
    r.entropy_gradient = r.min_u > 0.0 ? entropy_gradient_norm(u, Vec::Zero(dim + 1), alpha) : kNaN;
    r.dissipation = r.min_u > 0.0 ? dissipation(u, g, state.kind, alpha) : kNaN;
  }
  if (state.kind == FlowKind::expanding) {
    r.J1 = std::log(r.volume / unit_ball_volume(dim));
    r.J2 = r.entropy;
    r.Q = r.J2 - r.J1 / (dim + 1);
    if (full && dim == 1) {
      const auto ci = curvature_image(u, alpha);
      r.J3 = dim / (dim + 1.0) * std::log(r.volume / ci.body_volume);
      r.has_J3 = true;
    }
  }
  return r;
}

FlowResult run(const SupportFunction& initial, const FlowOptions& opts) {
  check_flow_alpha(opts.alpha);
  if (!(opts.t_end > 0.0) || !(opts.sample_every > 0.0))
    throw std::invalid_argument("t_end and sample_every must be positive");
  const int dim = initial.dim();

  FlowResult res;
  FlowState s;
  s.kind = opts.kind;
  s.alpha = opts.alpha;
  s.u = initial;
  if (opts.recenter && opts.kind != FlowKind::unnormalized)
    s.u = support_about(s.u, entropy_point(s.u, opts.alpha).point);
  if (opts.kind == FlowKind::normalized) s.u = normalize_volume(s.u);
  s.geometry = std::make_shared<const BodyGeometry>(curvature_data(s.u));

  const double stop_tol =
      opts.stop_tolerance < 0.0 ? (dim == 1 ? 1e-8 : 1e-6) : opts.stop_tolerance;
  const bool early_stop = opts.kind == FlowKind::normalized && stop_tol > 0.0;
  const double v0 = volume(s.u, *s.geometry);
  bool stop = false;

  auto record = [&]() {
    auto rec = diagnose(s, opts.full_diagnostics);
    if (opts.kind == FlowKind::unnormalized && opts.full_diagnostics) {
      const double e = 1.0 + dim * opts.alpha;
      res.extinction_lower = std::max(res.extinction_lower, s.time + std::pow(rec.rho_minus, e) / e);
      res.extinction_upper = std::min(res.extinction_upper, s.time + std::pow(rec.rho_plus, e) / e);
    }
    if (early_stop && rec.soliton_residual < stop_tol) {
      res.status = RunStatus::converged;
      stop = true;
    }
    res.trajectory.push_back(std::move(rec));
    if (opts.keep_snapshots) {
      res.snapshots.push_back(s.u);
      res.snapshot_times.push_back(s.time);
    }
  };

  try {
    record();
    for (long k = 1; !stop && s.time < opts.t_end; ++k) {
      const double target = std::min(opts.t_end, k * opts.sample_every);
      if (target <= s.time) continue;
      while (!stop && s.time < target) {
        try {
          s = step(s, target - s.time, opts);
        } catch (const StepFailure& e) {
          res.status = RunStatus::step_failed;
          res.message = e.what();
          stop = true;
          break;
        }
        if (opts.kind == FlowKind::unnormalized) {
          if (volume(s.u, *s.geometry) < opts.volume_floor * v0) {
            res.status = RunStatus::volume_floor;
            stop = true;
          }
        } else if (early_stop && opts.residual_check_every > 0 &&
                   s.steps % opts.residual_check_every == 0 &&
                   soliton_residual(s.u, *s.geometry, s.alpha).residual < stop_tol) {
          res.status = RunStatus::converged;
          stop = true;
        }
        if (!stop && s.steps >= opts.max_steps) {
          res.status = RunStatus::step_failed;
          res.message = "step limit reached";
          stop = true;
        }
      }
      if (res.status != RunStatus::step_failed) record();
    }
  } catch (const Error& e) {
    res.status = RunStatus::step_failed;
    res.message = e.what();
  }

  if (opts.kind == FlowKind::unnormalized) {
    try {
      res.limit_point = entropy_point(s.u, opts.alpha).point;
    } catch (const Error&) {
      res.limit_point = Vec::Constant(dim + 1, kNaN);
    }
  }
  res.final_state = std::move(s);
  return res;
}

RescaledTrajectory rescale_trajectory(const FlowResult& result, double alpha) {
  if (result.snapshots.empty()) throw std::invalid_argument("trajectory has no snapshots");
  const auto& first = result.snapshots.front();
  const int dim = first.dim();
  const double ratio = volume(first) / volume(result.snapshots.back());
  if (!(ratio >= 2.0)) throw InsufficientContraction(ratio);
  const Vec z0 = result.limit_point;
  const double ball = unit_ball_volume(dim);

  RescaledTrajectory out;
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    const auto& ut = result.snapshots[i];
    const double vol = volume(ut);
    const double t = std::log(ball / vol) / (dim + 1);
    auto body = scaled(support_about(ut, z0), std::exp(t));
    out.tau.push_back(result.snapshot_times[i]);
    out.t.push_back(t);
    out.volumes.push_back(volume(body));
    const double lhs = entropy_at(body, Vec::Zero(dim + 1), alpha);
    const double rhs = entropy_at(ut, z0, alpha) - std::log(vol / ball) / (dim + 1);
    out.entropy_rescaled.push_back(lhs);
    out.entropy_predicted.push_back(rhs);
    out.max_entropy_deviation = std::max(out.max_entropy_deviation, std::abs(lhs - rhs));
    out.bodies.push_back(std::move(body));
  }
  return out;
}

}  // namespace gcf
