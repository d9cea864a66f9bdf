#pragma once

// Per-element bodies shared by the serial and OpenMP kernel loops.

#include <cmath>
#include <cstddef>

#include "gcflow/kernels.hpp"

namespace gcf::kernels::detail {

inline void curvature_at(int dim, const double* h, double u, double* a, double& det, double& lmin,
                         double& lmax) {
  if (dim == 1) {
    a[0] = h[0] + u;
    det = a[0];
    lmin = lmax = a[0];
    return;
  }
  const double a11 = h[0] + u;
  const double a12 = h[1];
  const double a22 = h[2] + u;
  a[0] = a11;
  a[1] = a12;
  a[2] = a22;
  det = a11 * a22 - a12 * a12;
  const double mean = 0.5 * (a11 + a22);
  const double r = std::hypot(0.5 * (a11 - a22), a12);
  lmin = mean - r;
  lmax = mean + r;
}

inline double speed_at(FlowKind kind, double alpha, double eta, double det, double u) {
  switch (kind) {
    case FlowKind::unnormalized:
      return -std::pow(det, -alpha);
    case FlowKind::normalized:
      return -std::pow(det, -alpha) / eta + u;
    case FlowKind::expanding:
      return std::pow(u, 1.0 + 1.0 / alpha) * det;
  }
  return 0.0;
}

inline void analysis_pair(const LegendreTables& t, const double* ring_cos, const double* ring_sin,
                          int l, int m, double* coeffs) {
  const std::size_t stride = static_cast<std::size_t>(t.bandlimit) + 1;
  const std::size_t pi = LegendreTables::pair_index(l, m);
  double c = 0.0;
  double s = 0.0;
  for (std::size_t r = 0; r < t.rings; ++r) {
    const double wp = t.ring_weight[r] * t.p[r * t.pairs + pi];
    c += wp * ring_cos[r * stride + m];
    s += wp * ring_sin[r * stride + m];
  }
  coeffs[sh_slot(l, m, false)] = c;
  if (m > 0) coeffs[sh_slot(l, m, true)] = s;
}

inline void synthesis_ring(const LegendreTables& t, const double* table, const double* coeffs,
                           std::size_t r, double* ring_cos, double* ring_sin) {
  const int L = t.bandlimit;
  const std::size_t stride = static_cast<std::size_t>(L) + 1;
  const double* row = table + r * t.pairs;
  for (int m = 0; m <= L; ++m) {
    double c = 0.0;
    double s = 0.0;
    for (int l = m; l <= L; ++l) {
      const double p = row[LegendreTables::pair_index(l, m)];
      c += p * coeffs[sh_slot(l, m, false)];
      if (m > 0) s += p * coeffs[sh_slot(l, m, true)];
    }
    ring_cos[r * stride + m] = c;
    ring_sin[r * stride + m] = s;
  }
}

}  // namespace gcf::kernels::detail
