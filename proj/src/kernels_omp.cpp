#include <algorithm>
#include <vector>

#include "kernel_body.hpp"

namespace gcf::kernels::omp {

double weighted_sum(std::span<const double> weights, std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<long>(blocks);
#pragma omp parallel for schedule(static) if (n >= kParallelGrain)
  for (long b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += weights[i] * values[i];
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void curvature(int dim, std::span<const double> hessian, std::span<const double> u,
               std::span<double> a, std::span<double> det, std::span<double> lambda_min,
               std::span<double> lambda_max) {
  const std::size_t k = dim == 1 ? 1 : 3;
  const auto n = static_cast<long>(u.size());
#pragma omp parallel for schedule(static) if (u.size() >= kParallelGrain)
  for (long i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(i);
    detail::curvature_at(dim, hessian.data() + j * k, u[j], a.data() + j * k, det[j],
                         lambda_min[j], lambda_max[j]);
  }
}

void flow_speed(FlowKind kind, double alpha, double eta, std::span<const double> det,
                std::span<const double> u, std::span<double> out) {
  const auto n = static_cast<long>(u.size());
#pragma omp parallel for schedule(static) if (u.size() >= kParallelGrain)
  for (long i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(i);
    out[j] = detail::speed_at(kind, alpha, eta, det[j], u[j]);
  }
}

void legendre_analysis(const LegendreTables& t, std::span<const double> ring_cos,
                       std::span<const double> ring_sin, std::span<double> coeffs) {
  const int L = t.bandlimit;
  const std::size_t work = t.rings * t.pairs;
#pragma omp parallel for schedule(dynamic, 1) if (work >= kParallelGrain)
  for (int l = 0; l <= L; ++l)
    for (int m = 0; m <= l; ++m)
      detail::analysis_pair(t, ring_cos.data(), ring_sin.data(), l, m, coeffs.data());
}

void legendre_synthesis(const LegendreTables& t, std::span<const double> table,
                        std::span<const double> coeffs, std::span<double> ring_cos,
                        std::span<double> ring_sin) {
  const auto rings = static_cast<long>(t.rings);
  const std::size_t work = t.rings * t.pairs;
#pragma omp parallel for schedule(static) if (work >= kParallelGrain)
  for (long r = 0; r < rings; ++r)
    detail::synthesis_ring(t, table.data(), coeffs.data(), static_cast<std::size_t>(r),
                           ring_cos.data(), ring_sin.data());
}

}  // namespace gcf::kernels::omp
