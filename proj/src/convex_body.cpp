#include "gcflow/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "gcflow/errors.hpp"
#include "gcflow/kernels.hpp"

namespace gcf {

double SupportFunction::min() const { return *std::min_element(values.begin(), values.end()); }
double SupportFunction::max() const { return *std::max_element(values.begin(), values.end()); }

double BodyGeometry::sigma_n_minus_1(std::size_t i) const {
  return dim == 1 ? 1.0 : a[3 * i] + a[3 * i + 2];
}

SupportFunction make_support(GridPtr grid, std::vector<double> values) {
  if (values.size() != grid->size())
    throw std::invalid_argument("support values do not match grid size");
  SupportFunction u;
  u.basepoint = Vec::Zero(grid->ambient());
  u.grid = std::move(grid);
  u.values = std::move(values);
  return u;
}

SupportFunction ball(GridPtr grid, double radius) {
  std::vector<double> v(grid->size(), radius);
  return make_support(std::move(grid), std::move(v));
}

SupportFunction ball(GridPtr grid, double radius, const Vec& center) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = radius + center.dot(grid->node(i));
  return make_support(std::move(grid), std::move(v));
}

SupportFunction ellipsoid(GridPtr grid, const std::vector<double>& semi_axes) {
  if (static_cast<int>(semi_axes.size()) != grid->ambient())
    throw std::invalid_argument("ellipsoid needs n+1 semi-axes");
  for (double a : semi_axes)
    if (!(a > 0.0)) throw std::invalid_argument("semi-axes must be positive");
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < grid->ambient(); ++k) {
      const double t = semi_axes[k] * grid->coord(i, k);
      s += t * t;
    }
    v[i] = std::sqrt(s);
  }
  return make_support(std::move(grid), std::move(v));
}

SupportFunction support_about(const SupportFunction& u, const Vec& z) {
  SupportFunction out = u;
  const auto& g = *u.grid;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double dot = 0.0;
    for (int k = 0; k < g.ambient(); ++k) dot += z[k] * g.coord(i, k);
    out.values[i] -= dot;
  }
  out.basepoint = u.basepoint + z;
  return out;
}

SupportFunction scaled(const SupportFunction& u, double s) {
  SupportFunction out = u;
  for (double& v : out.values) v *= s;
  return out;
}

BodyGeometry curvature_data(const SupportFunction& u) {
  const auto& grid = *u.grid;
  auto d = grid.frame_hessian(u.values);
  const std::size_t n = u.size();
  BodyGeometry g;
  g.dim = grid.dim();
  g.a.resize(d.hessian.size());
  g.f.resize(n);
  g.K.resize(n);
  g.lambda_min.resize(n);
  g.lambda_max.resize(n);
  kernels::omp::curvature(g.dim, d.hessian, u.values, g.a, g.f, g.lambda_min, g.lambda_max);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g.lambda_min[i] > 0.0)) throw ConvexityLost(i, g.lambda_min[i]);
    g.K[i] = 1.0 / g.f[i];
  }
  g.gradient = std::move(d.gradient);
  g.tail_fraction = d.tail_fraction;
  g.tail_warning = d.tail_warning;
  return g;
}

double volume(const SupportFunction& u, const BodyGeometry& g) {
  std::vector<double> uf(u.size());
  for (std::size_t i = 0; i < uf.size(); ++i) uf[i] = u.values[i] * g.f[i];
  return u.grid->integrate(uf) / (u.dim() + 1);
}

double volume(const SupportFunction& u) { return volume(u, curvature_data(u)); }

double surface_area(const BodyGeometry& g, const SphereGrid& grid) { return grid.integrate(g.f); }
double surface_area(const SupportFunction& u) { return surface_area(curvature_data(u), *u.grid); }

double affine_surface_area(const BodyGeometry& g, const SphereGrid& grid) {
  const double p = (g.dim + 1.0) / (g.dim + 2.0);
  std::vector<double> v(g.f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(g.f[i], p);
  return grid.integrate(v);
}

double affine_surface_area(const SupportFunction& u) {
  return affine_surface_area(curvature_data(u), *u.grid);
}

SupportFunction normalize_volume(const SupportFunction& u) {
  const double v = volume(u);
  return scaled(u, std::pow(unit_ball_volume(u.dim()) / v, 1.0 / (u.dim() + 1)));
}

namespace {

// min c.x subject to E x = b (b >= 0), x >= 0, with E = [1; x_i] columns.
// Two-phase revised simplex with Bland's rule; m <= 4 rows.
struct LpResult {
  double value;
  Eigen::VectorXd dual;
};

LpResult solve_center_lp(const SphereGrid& grid, const std::vector<double>& cost) {
  const int m = grid.ambient() + 1;
  const std::size_t ncols = grid.size();
  auto column = [&](std::size_t j, Eigen::Ref<Eigen::VectorXd> col) {
    if (j >= ncols) {
      col.setZero();
      col[static_cast<Eigen::Index>(j - ncols)] = 1.0;
      return;
    }
    col[0] = 1.0;
    for (int k = 0; k < grid.ambient(); ++k) col[k + 1] = grid.coord(j, k);
  };
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b[0] = 1.0;

  std::vector<std::size_t> basis(m);
  for (int r = 0; r < m; ++r) basis[r] = ncols + r;
  Eigen::VectorXd xb = b;
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd col(m);
  constexpr double kReducedTol = 1e-13;
  constexpr double kPivotTol = 1e-12;
  const int max_iter = 50000;

  auto run_phase = [&](bool phase_one) {
    auto c = [&](std::size_t j) {
      if (phase_one) return j >= ncols ? 1.0 : 0.0;
      return j >= ncols ? 0.0 : cost[j];
    };
    for (int it = 0; it < max_iter; ++it) {
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
      Eigen::VectorXd cb(m);
      for (int r = 0; r < m; ++r) cb[r] = c(basis[r]);
      const Eigen::VectorXd y = lu.transpose().solve(cb);
      // Bland: first improving column.
      std::size_t enter = std::numeric_limits<std::size_t>::max();
      const std::size_t limit = phase_one ? ncols + m : ncols;
      for (std::size_t j = 0; j < limit; ++j) {
        if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
        column(j, col);
        if (c(j) - y.dot(col) < -kReducedTol) {
          enter = j;
          break;
        }
      }
      if (enter == std::numeric_limits<std::size_t>::max()) return y;
      column(enter, col);
      const Eigen::VectorXd d = lu.solve(col);
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        if (d[r] > kPivotTol) {
          const double ratio = xb[r] / d[r];
          if (ratio < best - 1e-15 ||
              (std::abs(ratio - best) <= 1e-15 && leave >= 0 && basis[r] < basis[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) throw NonConvergence("radius linear program (unbounded)", it, 0.0);
      basis[leave] = enter;
      B.col(leave) = col;
      xb = Eigen::PartialPivLU<Eigen::MatrixXd>(B).solve(b);
      for (int r = 0; r < m; ++r) xb[r] = std::max(xb[r], 0.0);
    }
    throw NonConvergence("radius linear program", max_iter, 0.0);
  };

  run_phase(true);
  // Drive any remaining zero-level artificials out of the basis.
  for (int r = 0; r < m; ++r) {
    if (basis[r] < ncols) continue;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    for (std::size_t j = 0; j < ncols; ++j) {
      if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
      column(j, col);
      const Eigen::VectorXd d = lu.solve(col);
      if (std::abs(d[r]) > 1e-9) {
        basis[r] = j;
        B.col(r) = col;
        break;
      }
    }
  }
  const Eigen::VectorXd y = run_phase(false);
  xb = Eigen::PartialPivLU<Eigen::MatrixXd>(B).solve(b);
  double value = 0.0;
  for (int r = 0; r < m; ++r) value += (basis[r] < ncols ? cost[basis[r]] : 0.0) * xb[r];
  return {value, y};
}

}  // namespace

WidthRadii width_radii(const SupportFunction& u) {
  const auto& grid = *u.grid;
  const int amb = grid.ambient();
  WidthRadii r;
  r.w_plus = -std::numeric_limits<double>::infinity();
  r.w_minus = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = u.values[i] + u.values[grid.antipode(i)];
    if (w > r.w_plus) {
      r.w_plus = w;
      r.w_plus_node = i;
    }
    if (w < r.w_minus) {
      r.w_minus = w;
      r.w_minus_node = i;
    }
  }
  // rho+ = max sum l_i u_i over convex weights with zero first moment;
  // rho- is the matching minimum. Multipliers give (t, z).
  std::vector<double> cost(u.size());
  for (std::size_t i = 0; i < cost.size(); ++i) cost[i] = -u.values[i];
  const auto outer = solve_center_lp(grid, cost);
  r.rho_plus = -outer.value;
  r.outer_center = Vec(amb);
  for (int k = 0; k < amb; ++k) r.outer_center[k] = -outer.dual[k + 1];
  const auto inner = solve_center_lp(grid, u.values);
  r.rho_minus = inner.value;
  r.inner_center = Vec(amb);
  for (int k = 0; k < amb; ++k) r.inner_center[k] = inner.dual[k + 1];
  return r;
}

double dual_volume(const SupportFunction& u, const Vec& z) {
  const auto uz = support_about(u, z);
  const double mn = uz.min();
  if (!(mn > 0.0)) throw NotInterior(mn);
  const int p = u.dim() + 1;
  std::vector<double> v(uz.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(uz.values[i], -p);
  return u.grid->integrate(v) / p;
}

std::vector<Vec> boundary_points(const SupportFunction& u, const BodyGeometry& g) {
  const auto& grid = *u.grid;
  const int n = grid.dim();
  std::vector<Vec> pts(u.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vec x = u.values[i] * grid.node(i);
    for (int k = 0; k < n; ++k) x += g.gradient[i * n + k] * grid.tangent(i, k);
    pts[i] = x;
  }
  return pts;
}

std::vector<Vec> boundary_points(const SupportFunction& u) {
  return boundary_points(u, curvature_data(u));
}

double hausdorff_distance(const SupportFunction& u1, const SupportFunction& u2) {
  if (!same_grid(*u1.grid, *u2.grid) || u1.basepoint.size() != u2.basepoint.size() ||
      (u1.basepoint - u2.basepoint).norm() > 1e-14)
    throw GridMismatch();
  double d = 0.0;
  for (std::size_t i = 0; i < u1.size(); ++i) d = std::max(d, std::abs(u1.values[i] - u2.values[i]));
  return d;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

SupportFunction random_body(std::uint64_t seed, GridPtr grid, double amplitude,
                            bool centrally_symmetric) {
  if (!(amplitude >= 0.0 && amplitude < 1.0))
    throw std::invalid_argument("amplitude must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  const auto degree = grid->coeff_degree();
  const int top = std::min(6, grid->bandlimit());
  constexpr int kMaxRejections = 50;
  for (int attempt = 0; attempt <= kMaxRejections; ++attempt) {
    std::vector<double> c(grid->coeff_count(), 0.0);
    for (std::size_t s = 0; s < c.size(); ++s) {
      const int d = degree[s];
      if (d < 2 || d > top) continue;
      const double draw = 2.0 * uniform01(rng) - 1.0;
      if (centrally_symmetric && d % 2 == 1) continue;
      c[s] = amplitude * draw / (static_cast<double>(d) * d * d);
    }
    auto v = grid->synthesize(c);
    for (double& x : v) x += 1.0;
    if (centrally_symmetric) {
      std::vector<double> sym(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) sym[i] = 0.5 * (v[i] + v[grid->antipode(i)]);
      v = std::move(sym);
    }
    auto u = make_support(grid, std::move(v));
    try {
      const auto g = curvature_data(u);
      const double lmin = *std::min_element(g.lambda_min.begin(), g.lambda_min.end());
      if (lmin >= 0.05)
        return scaled(u, std::pow(unit_ball_volume(u.dim()) / volume(u, g), 1.0 / (u.dim() + 1)));
    } catch (const ConvexityLost&) {
    }
    amplitude *= 0.5;
  }
  throw NonConvergence("random body rejection sampler", kMaxRejections, amplitude);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_body(std::ostream& os, const SupportFunction& u,
                const std::vector<std::pair<std::string, std::string>>& header) {
  os << "# gcflow body\n";
  for (const auto& [k, v] : header) os << "# " << k << '=' << v << '\n';
  os << "dim=" << u.dim() << '\n';
  os << "bandlimit=" << u.grid->bandlimit() << '\n';
  os << "basepoint=";
  for (int k = 0; k < u.basepoint.size(); ++k) os << (k ? " " : "") << format_double(u.basepoint[k]);
  os << '\n';
  os << "count=" << u.size() << '\n';
  for (double v : u.values) os << format_double(v) << '\n';
}

SupportFunction read_body(std::istream& is) {
  int dim = -1;
  int bandlimit = -1;
  std::vector<double> base;
  long count = -1;
  std::string line;
  while (count < 0 && std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("body file: expected key=value, got '" + line + "'");
    const std::string key = line.substr(0, eq);
    std::istringstream val(line.substr(eq + 1));
    if (key == "dim") {
      val >> dim;
    } else if (key == "bandlimit") {
      val >> bandlimit;
    } else if (key == "basepoint") {
      double x;
      while (val >> x) base.push_back(x);
    } else if (key == "count") {
      val >> count;
    } else {
      throw std::runtime_error("body file: unknown key '" + key + "'");
    }
  }
  if (dim < 0 || bandlimit < 0 || count < 0) throw std::runtime_error("body file: missing header fields");
  auto grid = build_grid(dim, bandlimit);
  if (static_cast<std::size_t>(count) != grid->size())
    throw std::runtime_error("body file: count does not match grid");
  if (static_cast<int>(base.size()) != grid->ambient())
    throw std::runtime_error("body file: basepoint has wrong dimension");
  std::vector<double> values;
  values.reserve(count);
  while (static_cast<long>(values.size()) < count && std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    values.push_back(std::stod(line));
  }
  if (static_cast<long>(values.size()) != count) throw std::runtime_error("body file: truncated values");
  auto u = make_support(grid, std::move(values));
  for (int k = 0; k < grid->ambient(); ++k) u.basepoint[k] = base[k];
  return u;
}

}  // namespace gcf
