#include "gcflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "gcflow/errors.hpp"

namespace gcf {

namespace {

constexpr double kLogWindow = 1e-9;

bool log_branch(double alpha) { return std::abs(alpha - 1.0) < kLogWindow; }

void check_alpha(double alpha) {
  if (alpha == 0.0) throw AlphaZero();
}

std::vector<double> shifted(const SupportFunction& u, const Vec& z) {
  const auto& g = *u.grid;
  std::vector<double> v(u.values);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (int k = 0; k < g.ambient(); ++k) v[i] -= z[k] * g.coord(i, k);
  return v;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

// Potential whose minimiser is the entropy point (see header).
double potential(const SphereGrid& g, const std::vector<double>& uz, double alpha) {
  std::vector<double> v(uz.size());
  if (log_branch(alpha)) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -std::log(uz[i]);
  } else {
    const double p = 1.0 - 1.0 / alpha;
    const double c = 1.0 / (p * (p - 1.0));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * std::pow(uz[i], p);
  }
  return g.integrate(v);
}

struct Moments {
  double mass = 0.0;
  Vec first;
  Mat second;
};

// int u^{-1/alpha}, int u^{-1/alpha} x, int u^{-1/alpha - 1} x x^T.
Moments moments(const SphereGrid& g, const std::vector<double>& uz, double alpha) {
  const int amb = g.ambient();
  Moments m;
  m.first = Vec::Zero(amb);
  m.second = Mat::Zero(amb, amb);
  const auto w = g.weights();
  const double q = -1.0 / alpha;
  for (std::size_t i = 0; i < uz.size(); ++i) {
    const double a = log_branch(alpha) ? 1.0 / uz[i] : std::pow(uz[i], q);
    const double wa = w[i] * a;
    m.mass += wa;
    const double wb = wa / uz[i];
    for (int r = 0; r < amb; ++r) {
      const double xr = g.coord(i, r);
      m.first[r] += wa * xr;
      for (int c = 0; c <= r; ++c) m.second(r, c) += wb * xr * g.coord(i, c);
    }
  }
  for (int r = 0; r < amb; ++r)
    for (int c = r + 1; c < amb; ++c) m.second(r, c) = m.second(c, r);
  return m;
}

}  // namespace

double entropy_at(const SupportFunction& u, const Vec& z, double alpha) {
  check_alpha(alpha);
  const auto uz = shifted(u, z);
  const double mn = min_of(uz);
  if (!(mn > 0.0)) throw NotInterior(mn);
  const auto& g = *u.grid;
  std::vector<double> v(uz.size());
  if (log_branch(alpha)) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::log(uz[i]);
    return g.average(v);
  }
  const double p = 1.0 - 1.0 / alpha;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(uz[i], p);
  return alpha / (alpha - 1.0) * std::log(g.average(v));
}

double entropy_gradient_norm(const SupportFunction& u, const Vec& z, double alpha) {
  check_alpha(alpha);
  const auto uz = shifted(u, z);
  const double mn = min_of(uz);
  if (!(mn > 0.0)) throw NotInterior(mn);
  const auto m = moments(*u.grid, uz, alpha);
  return m.first.norm() / m.mass;
}

Vec steiner_point(const SupportFunction& u) {
  const auto& g = *u.grid;
  Vec s = Vec::Zero(g.ambient());
  const auto w = g.weights();
  for (std::size_t i = 0; i < u.size(); ++i)
    for (int k = 0; k < g.ambient(); ++k) s[k] += w[i] * u.values[i] * g.coord(i, k);
  return s * ((g.dim() + 1) / sphere_measure(g.dim()));
}

EntropyResult entropy_point(const SupportFunction& u, double alpha, double tolerance,
                            int max_iterations) {
  check_alpha(alpha);
  const auto& g = *u.grid;
  EntropyResult res;
  res.alpha = alpha;
  Vec z = steiner_point(u);
  auto uz = shifted(u, z);
  if (!(min_of(uz) > 0.0)) throw NotInterior(min_of(uz));
  double psi = potential(g, uz, alpha);
  for (int it = 0;; ++it) {
    const auto m = moments(g, uz, alpha);
    res.gradient_norm = m.first.norm() / m.mass;
    res.iterations = it;
    if (res.gradient_norm <= tolerance) break;
    if (it >= max_iterations) throw NonConvergence("entropy point", it, res.gradient_norm);
    const Vec step = -alpha * m.second.ldlt().solve(m.first);
    const double floor = 0.1 * min_of(uz);
    double s = 1.0;
    bool moved = false;
    for (int half = 0; half < 60; ++half, s *= 0.5) {
      const Vec zn = z + s * step;
      auto un = shifted(u, zn);
      if (min_of(un) < floor) continue;
      const double pn = potential(g, un, alpha);
      // Psi sits near zero for normalised bodies at alpha = 1, so the
      // roundoff allowance needs an absolute part.
      if (pn <= psi + 1e-14 * (std::abs(psi) + sphere_measure(g.dim()))) {
        z = zn;
        uz = std::move(un);
        psi = pn;
        moved = true;
        break;
      }
    }
    if (!moved) throw NonConvergence("entropy point line search", it, res.gradient_norm);
  }
  res.point = z;
  res.value = entropy_at(u, z, alpha);
  return res;
}

SantaloResult santalo_point(const SupportFunction& u) {
  const auto e = entropy_point(u, 1.0 / (u.dim() + 2));
  return {e.point, dual_volume(u, e.point), e.gradient_norm, e.iterations};
}

double zalpha(const BodyGeometry& g, const SphereGrid& grid, double alpha) {
  std::vector<double> v(g.K.size());
  if (log_branch(alpha)) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::log(g.K[i]);
    return std::exp(grid.average(v));
  }
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(g.K[i], alpha - 1.0);
  return std::pow(grid.average(v), 1.0 / (alpha - 1.0));
}

double zalpha(const SupportFunction& u, double alpha) {
  return zalpha(curvature_data(u), *u.grid, alpha);
}

WeightedDualIdentity weighted_dual_identities(const SupportFunction& u, const Vec& z, double alpha) {
  check_alpha(alpha);
  if (log_branch(alpha)) throw std::invalid_argument("weighted dual identity needs alpha != 1");
  const auto uz = shifted(u, z);
  const double mn = min_of(uz);
  if (!(mn > 0.0)) throw NotInterior(mn);
  const auto& g = *u.grid;
  const int n = g.dim();
  const double omega = sphere_measure(n);
  const double gamma = 1.0 / alpha - 1.0;
  const auto w = g.weights();

  // Per direction the polar body reaches radius R = 1/u_z. Pieces between
  // R and the unit sphere in the two measures r^{gamma-1} dr and r^n dr.
  double lhs = 0.0, p_in = 0.0, p_out = 0.0, v_in = 0.0, v_out = 0.0, d = 0.0;
  for (std::size_t i = 0; i < uz.size(); ++i) {
    const double R = 1.0 / uz[i];
    const double Rg = std::pow(R, gamma);
    lhs += w[i] * std::pow(uz[i], 1.0 - 1.0 / alpha);
    const double Rv = std::pow(R, n + 1);
    if (R < 1.0) {
      const double P = (1.0 - Rg) / gamma;
      const double V = (1.0 - Rv) / (n + 1);
      p_in += w[i] * P;
      v_in += w[i] * V;
      d += w[i] * std::abs(P - V);
    } else {
      const double P = (Rg - 1.0) / gamma;
      const double V = (Rv - 1.0) / (n + 1);
      p_out += w[i] * P;
      v_out += w[i] * V;
      d += w[i] * std::abs(P - V);
    }
  }
  WeightedDualIdentity r;
  r.lhs = lhs;
  r.average = lhs / omega;
  const double ag = std::abs(gamma);
  if (gamma > 0.0)
    r.rhs = ag * (omega / ag - p_in + p_out);
  else
    r.rhs = ag * (omega / ag + p_in - p_out);
  r.symmetric_difference_term = d + v_in - v_out;
  r.decomposition = gamma > 0.0 ? 1.0 - ag / omega * r.symmetric_difference_term
                                : 1.0 + ag / omega * r.symmetric_difference_term;
  r.decomposition_applies = alpha < 0.0 || alpha >= 1.0 / (n + 2) - 1e-15;
  return r;
}

bool concavity_probe(const SupportFunction& u, double alpha, const Vec& z1, const Vec& z2) {
  const double e1 = entropy_at(u, z1, alpha);
  const double e2 = entropy_at(u, z2, alpha);
  const double em = entropy_at(u, 0.5 * (z1 + z2), alpha);
  return em >= 0.5 * (e1 + e2) - 1e-12;
}

}  // namespace gcf
