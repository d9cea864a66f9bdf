#pragma once

// Per-node numerical kernels.
//
// Every kernel has a plain serial reference in `kernels::serial` and an
// OpenMP version in `kernels::omp` with the same signature. The library
// calls the OpenMP versions; tests compare both and bench/ times them.
// Reductions in the OpenMP path sum fixed-size blocks in parallel and then
// combine the partial sums in block order, so results do not depend on the
// thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "gcflow/types.hpp"

namespace gcf::kernels {

/// Loops shorter than this stay on one thread.
inline constexpr std::size_t kParallelGrain = 4096;
/// Block length of the deterministic parallel reduction.
inline constexpr std::size_t kReductionBlock = 512;

/// Associated Legendre data at Gauss-Legendre colatitudes, real-harmonic
/// normalised (sqrt(2) folded in for m > 0). Entry (ring, l, m) lives at
/// ring * pairs + l(l+1)/2 + m.
struct LegendreTables {
  int bandlimit = 0;
  std::size_t rings = 0;
  std::size_t pairs = 0;
  std::vector<double> p;    // P_l^m(cos theta)
  std::vector<double> dp;   // d/dtheta
  std::vector<double> d2p;  // d^2/dtheta^2
  std::vector<double> ring_weight;  // Gauss weight x 2 pi / N_phi

  static std::size_t pair_index(int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }
};

/// Coefficient slot of (l, m, cos) / (l, m, sin) in the n = 2 layout:
/// l^2 for m = 0, l^2 + 2m - 1 (cos) and l^2 + 2m (sin) for m > 0.
inline std::size_t sh_slot(int l, int m, bool sine) {
  const auto base = static_cast<std::size_t>(l) * l;
  return m == 0 ? base : base + 2 * static_cast<std::size_t>(m) - (sine ? 0 : 1);
}

namespace serial {

double weighted_sum(std::span<const double> weights, std::span<const double> values);

/// A = H + u I per node, with det(A), and the extreme eigenvalues of A.
/// `hessian` holds 1 (n = 1) or 3 (n = 2: H11, H12, H22) entries per node;
/// `a` receives the same layout.
void curvature(int dim, std::span<const double> hessian, std::span<const double> u,
               std::span<double> a, std::span<double> det, std::span<double> lambda_min,
               std::span<double> lambda_max);

/// Pointwise flow speed from f = det A and u.
///   unnormalized: -f^{-alpha}
///   normalized:   -f^{-alpha} / eta + u
///   expanding:    u^{1 + 1/alpha} f
void flow_speed(FlowKind kind, double alpha, double eta, std::span<const double> det,
                std::span<const double> u, std::span<double> out);

/// coeffs[(l,m)] = sum_rings w_ring P(ring,l,m) ring_{cos|sin}[ring, m].
/// Ring spectra are laid out ring * (L + 1) + m.
void legendre_analysis(const LegendreTables& t, std::span<const double> ring_cos,
                       std::span<const double> ring_sin, std::span<double> coeffs);

/// ring_{cos|sin}[ring, m] = sum_l T(ring,l,m) coeffs[(l,m)] where T is one
/// of the tables in `t` (selected by `table`).
void legendre_synthesis(const LegendreTables& t, std::span<const double> table,
                        std::span<const double> coeffs, std::span<double> ring_cos,
                        std::span<double> ring_sin);

}  // namespace serial

namespace omp {

double weighted_sum(std::span<const double> weights, std::span<const double> values);
void curvature(int dim, std::span<const double> hessian, std::span<const double> u,
               std::span<double> a, std::span<double> det, std::span<double> lambda_min,
               std::span<double> lambda_max);
void flow_speed(FlowKind kind, double alpha, double eta, std::span<const double> det,
                std::span<const double> u, std::span<double> out);
void legendre_analysis(const LegendreTables& t, std::span<const double> ring_cos,
                       std::span<const double> ring_sin, std::span<double> coeffs);
void legendre_synthesis(const LegendreTables& t, std::span<const double> table,
                        std::span<const double> coeffs, std::span<double> ring_cos,
                        std::span<double> ring_sin);

}  // namespace omp

}  // namespace gcf::kernels
