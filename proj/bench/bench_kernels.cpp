// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "gcflow/kernels.hpp"
#include "gcflow/sphere_grid.hpp"

namespace {

using namespace gcf;

std::vector<double> field(const SphereGrid& g) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.05 * std::sin(3.0 * g.coord(i, 0) + g.coord(i, 1));
  return v;
}

template <bool Parallel>
void BM_WeightedSum(benchmark::State& state) {
  auto g = build_grid(2, static_cast<int>(state.range(0)));
  auto v = field(*g);
  for (auto _ : state) {
    double s = Parallel ? kernels::omp::weighted_sum(g->weights(), v) : kernels::serial::weighted_sum(g->weights(), v);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(v.size()));
}

template <bool Parallel>
void BM_Curvature(benchmark::State& state) {
  auto g = build_grid(2, static_cast<int>(state.range(0)));
  auto v = field(*g);
  auto h = g->frame_hessian(v);
  const std::size_t n = v.size();
  std::vector<double> a(3 * n), det(n), lo(n), hi(n), speed(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::curvature(2, h.hessian, v, a, det, lo, hi);
      kernels::omp::flow_speed(FlowKind::normalized, 1.0, 1.0, det, v, speed);
    } else {
      kernels::serial::curvature(2, h.hessian, v, a, det, lo, hi);
      kernels::serial::flow_speed(FlowKind::normalized, 1.0, 1.0, det, v, speed);
    }
    benchmark::DoNotOptimize(speed.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

// Legendre stage of the spherical-harmonic transform on ring spectra.
template <bool Parallel>
void BM_Legendre(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  auto g = build_grid(2, L);
  kernels::LegendreTables t;
  t.bandlimit = L;
  t.rings = 2 * static_cast<std::size_t>(L);
  t.pairs = static_cast<std::size_t>(L + 1) * (L + 2) / 2;
  t.p.resize(t.rings * t.pairs);
  for (std::size_t k = 0; k < t.p.size(); ++k) t.p[k] = std::cos(0.001 * k);
  t.ring_weight.assign(t.rings, 1.0 / t.rings);
  std::vector<double> rc(t.rings * (L + 1), 0.5), rs(t.rings * (L + 1), 0.25);
  std::vector<double> coeffs(g->coeff_count());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::legendre_analysis(t, rc, rs, coeffs);
      kernels::omp::legendre_synthesis(t, t.p, coeffs, rc, rs);
    } else {
      kernels::serial::legendre_analysis(t, rc, rs, coeffs);
      kernels::serial::legendre_synthesis(t, t.p, coeffs, rc, rs);
    }
    benchmark::DoNotOptimize(rc.data());
  }
}

}  // namespace

BENCHMARK(BM_WeightedSum<false>)->Arg(16)->Arg(64);
BENCHMARK(BM_WeightedSum<true>)->Arg(16)->Arg(64);
BENCHMARK(BM_Curvature<false>)->Arg(16)->Arg(64);
BENCHMARK(BM_Curvature<true>)->Arg(16)->Arg(64);
BENCHMARK(BM_Legendre<false>)->Arg(16)->Arg(48);
BENCHMARK(BM_Legendre<true>)->Arg(16)->Arg(48);

BENCHMARK_MAIN();
