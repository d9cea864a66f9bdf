#pragma once

#include <Eigen/Core>
#include <numbers>

namespace gcf {

/// Point or direction in R^{n+1}, n in {1,2}.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
/// Small dense matrix acting on R^{n+1}.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

/// Which evolution law a flow follows.
///  - unnormalized: u_tau = -K^alpha
///  - normalized:   u_t = -K^alpha / avg(K^{alpha-1}) + u
///  - expanding:    u_t = u^{1+1/alpha} / K
enum class FlowKind { unnormalized, normalized, expanding };

/// Surface measure of the unit sphere S^n.
constexpr double sphere_measure(int dim) {
  return dim == 1 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
}

/// Volume of the unit ball B(1) in R^{n+1}: omega_n / (n+1).
constexpr double unit_ball_volume(int dim) { return sphere_measure(dim) / (dim + 1); }

}  // namespace gcf
