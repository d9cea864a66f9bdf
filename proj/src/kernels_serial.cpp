#include "kernel_body.hpp"

namespace gcf::kernels::serial {

double weighted_sum(std::span<const double> weights, std::span<const double> values) {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
  return s;
}

void curvature(int dim, std::span<const double> hessian, std::span<const double> u,
               std::span<double> a, std::span<double> det, std::span<double> lambda_min,
               std::span<double> lambda_max) {
  const std::size_t k = dim == 1 ? 1 : 3;
  for (std::size_t i = 0; i < u.size(); ++i) {
    detail::curvature_at(dim, hessian.data() + i * k, u[i], a.data() + i * k, det[i],
                         lambda_min[i], lambda_max[i]);
  }
}

void flow_speed(FlowKind kind, double alpha, double eta, std::span<const double> det,
                std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = detail::speed_at(kind, alpha, eta, det[i], u[i]);
}

void legendre_analysis(const LegendreTables& t, std::span<const double> ring_cos,
                       std::span<const double> ring_sin, std::span<double> coeffs) {
  for (int l = 0; l <= t.bandlimit; ++l)
    for (int m = 0; m <= l; ++m)
      detail::analysis_pair(t, ring_cos.data(), ring_sin.data(), l, m, coeffs.data());
}

void legendre_synthesis(const LegendreTables& t, std::span<const double> table,
                        std::span<const double> coeffs, std::span<double> ring_cos,
                        std::span<double> ring_sin) {
  for (std::size_t r = 0; r < t.rings; ++r)
    detail::synthesis_ring(t, table.data(), coeffs.data(), r, ring_cos.data(), ring_sin.data());
}

}  // namespace gcf::kernels::serial
