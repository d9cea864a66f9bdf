#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "gcflow/convex_body.hpp"

namespace gcf {

struct FlowOptions {
  FlowKind kind = FlowKind::normalized;
  double alpha = 1.0;
  double t_end = 1.0;
  double sample_every = 0.1;
  /// Explicit step limit dt <= cfl * h^2 / D_max.
  double cfl = 0.2;
  /// Soliton-residual early stop for the normalized flow. Negative selects
  /// the default (1e-8 for n = 1, 1e-6 for n = 2); zero disables.
  double stop_tolerance = -1.0;
  /// Unnormalized runs stop once |Omega| falls below this fraction of |Omega_0|.
  double volume_floor = 1e-6;
  /// Move the basepoint to the entropy point before a normalized or expanding run.
  bool recenter = true;
  int max_halvings = 12;
  long max_steps = 100'000'000;
  /// Steps between soliton-residual checks.
  int residual_check_every = 20;
  /// Keep the body at every sample (needed by rescale_trajectory and SVG export).
  bool keep_snapshots = false;
  /// Entropy point, radii and curvature-image terms at every sample.
  bool full_diagnostics = true;
};

struct FlowState {
  FlowKind kind = FlowKind::normalized;
  double alpha = 1.0;
  /// tau for the unnormalized flow, t otherwise.
  double time = 0.0;
  SupportFunction u;
  double dt_last = 0.0;
  long steps = 0;
  long rejected_steps = 0;
  /// Sum of |log s| over the per-step volume rescalings s.
  double cumulative_rescale = 0.0;
  /// Curvature data of u, when already known.
  std::shared_ptr<const BodyGeometry> geometry;
};

struct DiagnosticsRecord {
  double time = 0.0;
  long steps = 0;
  double dt = 0.0;
  double volume = 0.0;
  /// Extremal entropy E_alpha(Omega_t) and its point (relative to the basepoint).
  double entropy = 0.0;
  Vec entropy_point;
  double entropy_gradient = 0.0;
  /// E_alpha(Omega_t, 0) about the basepoint; NaN once an unnormalized
  /// run has moved the body off the basepoint.
  double entropy_origin = 0.0;
  double zalpha = 0.0;
  double eta = 1.0;
  double min_u = 0.0, max_u = 0.0;
  double min_K = 0.0, max_K = 0.0;
  double w_plus = 0.0, w_minus = 0.0, rho_plus = 0.0, rho_minus = 0.0;
  double soliton_residual = 0.0;
  double soliton_lambda = 0.0;
  /// Rate D with d/dt(monitored entropy) = -D; see dissipation().
  double dissipation = 0.0;
  double tail_fraction = 0.0;
  double cumulative_rescale = 0.0;
  /// Expanding flow: J1 = log(|Omega|/|B(1)|), J2 = E_alpha(Omega, 0),
  /// Q = J2 - J1/(n+1), J3 = (n/(n+1)) log(|Omega|/|Lambda Omega|) (n = 1 only).
  double J1 = 0.0, J2 = 0.0, J3 = 0.0, Q = 0.0;
  bool has_J3 = false;
};

enum class RunStatus { completed, converged, volume_floor, step_failed };
const char* to_string(RunStatus s);
const char* to_string(FlowKind k);
/// Throws std::invalid_argument for unknown names.
FlowKind parse_flow_kind(const std::string& s);

struct FlowResult {
  std::vector<DiagnosticsRecord> trajectory;
  FlowState final_state;
  RunStatus status = RunStatus::completed;
  std::string message;
  /// Unnormalized runs: entropy point of the last body (relative to the basepoint).
  Vec limit_point;
  /// Unnormalized runs: extinction time bracket from the in/out radii.
  double extinction_lower = 0.0;
  double extinction_upper = std::numeric_limits<double>::infinity();
  std::vector<SupportFunction> snapshots;
  std::vector<double> snapshot_times;
};

/// du/dt at the state, projected to the bandlimit.
/// Throws ConvexityLost; NotInterior for the expanding flow when min u <= 0.
std::vector<double> rhs(const FlowState& state);

/// Largest stable explicit step at the state.
double stable_dt(const FlowState& state, double cfl);

/// One RK4 step of size min(dt_request, stable_dt), halving on failure.
/// Throws StepFailure after opts.max_halvings rejections.
FlowState step(const FlowState& state, double dt_request, const FlowOptions& opts);

/// Never throws for numerical failures: a failed step ends the run with
/// status step_failed and the trajectory so far.
FlowResult run(const SupportFunction& initial, const FlowOptions& opts);

struct SolitonResidual {
  double residual = 0.0;
  double lambda = 0.0;
};

/// max |lambda u f^alpha - 1| with lambda = avg f^{1-alpha} / avg(u f).
SolitonResidual soliton_residual(const SupportFunction& u, double alpha);
SolitonResidual soliton_residual(const SupportFunction& u, const BodyGeometry& g, double alpha);

/// Normalized: d/dt E(Omega_t, 0) = -D. Unnormalized:
/// d/dtau [E(Omega_tau, 0) - log|Omega_tau| / (n+1)] = -D. Expanding: dQ/dt = -D.
double dissipation(const SupportFunction& u, const BodyGeometry& g, FlowKind kind, double alpha);

DiagnosticsRecord diagnose(const FlowState& state, bool full);

struct RescaledTrajectory {
  std::vector<double> tau;
  std::vector<double> t;
  std::vector<SupportFunction> bodies;
  std::vector<double> volumes;
  /// E(Omega_t, e^t z0) and E(Omega_tau, z0) - log(|Omega_tau|/|B(1)|)/(n+1).
  std::vector<double> entropy_rescaled;
  std::vector<double> entropy_predicted;
  double max_entropy_deviation = 0.0;
};

/// Throws InsufficientContraction when the run lost less than half its volume,
/// std::invalid_argument when snapshots are missing.
RescaledTrajectory rescale_trajectory(const FlowResult& result, double alpha);

}  // namespace gcf
