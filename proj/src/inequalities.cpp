#include "gcflow/inequalities.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "gcflow/entropy.hpp"
#include "gcflow/errors.hpp"
#include "gcflow/flow.hpp"

namespace gcf {

namespace {

constexpr double kAlphaEps = 1e-12;

bool is_one(double alpha) { return std::abs(alpha - 1.0) < 1e-9; }

std::string inputs_of(const SupportFunction& u, double alpha, const Vec* z = nullptr) {
  std::string s = "body=" + body_digest(u);
  if (std::isfinite(alpha)) s += " alpha=" + format_double(alpha);
  if (z) {
    s += " z=";
    for (int k = 0; k < z->size(); ++k) s += (k ? "," : "") + format_double((*z)[k]);
  }
  return s;
}

void require_normalized(const SupportFunction& u) {
  const double ball = unit_ball_volume(u.dim());
  const double v = volume(u);
  if (std::abs(v / ball - 1.0) > 1e-10)
    throw std::invalid_argument("check needs |Omega| = |B(1)| (got " + format_double(v) + ")");
}

double lower_alpha(int dim) { return 1.0 / (dim + 2); }

template <class Fn>
void guarded(std::vector<CheckReport>& out, const std::string& name, const std::string& inputs, Fn fn) {
  try {
    fn(out);
  } catch (const std::exception& e) {
    CheckReport r;
    r.name = name;
    r.inputs = inputs;
    r.lhs = r.rhs = r.slack = std::nan("");
    r.pass = false;
    r.note = std::string("error: ") + e.what();
    out.push_back(std::move(r));
  }
}

}  // namespace

CheckReport inequality_report(std::string name, std::string inputs, double lhs, double rhs,
                              double tolerance) {
  CheckReport r;
  r.name = std::move(name);
  r.inputs = std::move(inputs);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tolerance = tolerance;
  r.pass = r.slack >= -tolerance;
  return r;
}

CheckReport identity_report(std::string name, std::string inputs, double lhs, double rhs,
                            double tolerance) {
  CheckReport r = inequality_report(std::move(name), std::move(inputs), lhs, rhs, tolerance);
  r.identity = true;
  r.slack = -std::abs(rhs - lhs);
  r.pass = r.slack >= -tolerance;
  return r;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string body_digest(const SupportFunction& u) {
  const std::int32_t shape[2] = {u.dim(), u.grid->bandlimit()};
  std::uint64_t h = fnv1a(shape, sizeof shape);
  for (int k = 0; k < u.basepoint.size(); ++k) h = fnv1a(&u.basepoint[k], sizeof(double), h);
  h = fnv1a(u.values.data(), u.values.size() * sizeof(double), h);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CheckReport check_blaschke_santalo(const SupportFunction& u) {
  const double ball = unit_ball_volume(u.dim());
  const auto s = santalo_point(u);
  return inequality_report("blaschke_santalo", inputs_of(u, NAN, &s.point), volume(u) * s.dual_volume,
                           ball * ball, 1e-8 * ball * ball);
}

CheckReport check_entropy_nonneg(const SupportFunction& u, double alpha) {
  require_normalized(u);
  const auto e = entropy_point(u, alpha);
  auto r = inequality_report("entropy_nonneg", inputs_of(u, alpha, &e.point), 0.0, e.value, 1e-10);
  if (alpha > 0.0 && alpha < lower_alpha(u.dim()) - kAlphaEps) {
    r.informational = true;
    r.note = "alpha below 1/(n+2)";
  }
  return r;
}

CheckReport check_z_vs_entropy(const SupportFunction& u, double alpha) {
  require_normalized(u);
  const auto e = entropy_point(u, alpha);
  const double z = zalpha(u, alpha);
  auto r = inequality_report("z_vs_entropy", inputs_of(u, alpha, &e.point), std::exp(e.value), z,
                             1e-10 * z);
  if (alpha < 0.0) {
    r.informational = true;
    r.note = "stated for alpha > 0";
  }
  return r;
}

CheckReport check_affine_isoperimetric(const SupportFunction& u) {
  const int n = u.dim();
  const auto g = curvature_data(u);
  const double ball = unit_ball_volume(n);
  const double lhs = std::pow(affine_surface_area(g, *u.grid), n + 2);
  const double rhs = std::pow(n + 1.0, n + 2) * ball * ball * std::pow(volume(u, g), n);
  return inequality_report("affine_isoperimetric", inputs_of(u, NAN), lhs, rhs, 1e-8 * rhs);
}

std::vector<CheckReport> check_jung_steinhagen(const SupportFunction& u) {
  const int n = u.dim();
  const auto r = width_radii(u);
  const auto in = inputs_of(u, NAN);
  const double tol = 1e-10;
  return {
      inequality_report("jung_lower", in, 0.5 * r.w_plus, r.rho_plus, tol * r.rho_plus),
      inequality_report("jung_upper", in, r.rho_plus, r.w_plus * std::sqrt(2.0 * (n + 1) / (n + 2)),
                        tol * r.rho_plus),
      inequality_report("steinhagen_upper", in, r.rho_minus, 0.5 * r.w_minus, tol * r.rho_minus),
      inequality_report("steinhagen_lower", in, r.w_minus / (2.0 * std::sqrt(n + 1.0)), r.rho_minus,
                        tol * r.rho_minus),
  };
}

std::vector<CheckReport> check_weighted_dual_identity(const SupportFunction& u, const Vec& z,
                                                      double alpha) {
  const auto w = weighted_dual_identities(u, z, alpha);
  const auto in = inputs_of(u, alpha, &z);
  std::vector<CheckReport> out;
  out.push_back(identity_report("weighted_dual_identity", in, w.lhs, w.rhs, 1e-10 * std::abs(w.lhs)));
  auto d = identity_report("weighted_dual_decomposition", in, w.average, w.decomposition,
                           1e-10 * std::abs(w.average));
  if (!w.decomposition_applies) {
    d.informational = true;
    d.note = "decomposition needs alpha >= 1/(n+2) or alpha < 0";
  }
  out.push_back(std::move(d));
  return out;
}

CurvatureImage curvature_image(const SupportFunction& u, double alpha) {
  return curvature_image_about(u, alpha, entropy_point(u, alpha).point);
}

CurvatureImage curvature_image_about(const SupportFunction& u, double alpha, const Vec& z) {
  const auto& grid = *u.grid;
  const int n = u.dim();
  const auto ue = support_about(u, z);
  CurvatureImage ci;
  ci.entropy_point = z;
  ci.entropy = entropy_at(u, z, alpha);
  ci.volume = volume(u);
  const double c = ci.volume / unit_ball_volume(n) *
                   (is_one(alpha) ? 1.0 : std::exp(-(alpha - 1.0) / alpha * ci.entropy));
  ci.density.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) ci.density[i] = c * std::pow(ue.values[i], -1.0 / alpha);

  double mass = 0.0;
  Vec first = Vec::Zero(n + 1);
  const auto w = grid.weights();
  std::vector<double> uf(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    mass += w[i] * ci.density[i];
    for (int k = 0; k <= n; ++k) first[k] += w[i] * ci.density[i] * grid.coord(i, k);
    uf[i] = ue.values[i] * ci.density[i];
  }
  ci.first_moment = first.norm() / mass;
  if (ci.first_moment > 1e-9) throw CompatibilityViolation(ci.first_moment);
  ci.mixed_volume = grid.integrate(uf) / (n + 1);

  if (n == 1) {
    auto coeffs = grid.analyze(ci.density);
    const auto deg = grid.coeff_degree();
    for (std::size_t s = 0; s < coeffs.size(); ++s) {
      const int k = deg[s];
      if (k == 1)
        coeffs[s] = 0.0;
      else if (k > 1)
        coeffs[s] /= 1.0 - static_cast<double>(k) * k;
    }
    ci.body = make_support(u.grid, grid.synthesize(coeffs));
    ci.body_volume = volume(ci.body);
    ci.has_body = true;
  }
  return ci;
}

std::vector<CheckReport> check_curvature_image(const SupportFunction& u, double alpha) {
  const auto ci = curvature_image(u, alpha);
  const auto in = inputs_of(u, alpha, &ci.entropy_point);
  std::vector<CheckReport> out;
  out.push_back(identity_report("mixed_volume_identity", in, ci.mixed_volume, ci.volume,
                                1e-10 * ci.volume));
  if (ci.has_body)
    out.push_back(inequality_report("curvature_image_volume", in, 1.0, ci.volume / ci.body_volume, 1e-8));
  return out;
}

CheckReport check_entropy_stability(const SupportFunction& u, double alpha) {
  const int n = u.dim();
  if (n != 1) throw UnsupportedDimension(n);
  const bool forward = alpha >= lower_alpha(n) - kAlphaEps;
  if (!forward && !(alpha < 0.0))
    throw std::invalid_argument("entropy stability needs alpha >= 1/(n+2) or alpha < 0");
  const auto ci = curvature_image(u, alpha);
  const double bound = std::log(ci.volume / unit_ball_volume(n)) / (n + 1) +
                       n / (n + 1.0) * std::log(ci.volume / ci.body_volume);
  const auto in = inputs_of(u, alpha, &ci.entropy_point);
  if (forward) return inequality_report("entropy_stability", in, bound, ci.entropy, 1e-8);
  return inequality_report("entropy_stability_reverse", in, ci.entropy, bound, 1e-8);
}

std::vector<CheckReport> check_soliton_properties(const SupportFunction& u, double alpha) {
  const int n = u.dim();
  const auto g = curvature_data(u);
  const auto sol = soliton_residual(u, g, alpha);
  if (!(sol.residual <= 1e-6)) throw NotASoliton(sol.residual);
  const double tol = 1e-6;
  const double ball = unit_ball_volume(n);
  const Vec origin = Vec::Zero(n + 1);
  const auto in = inputs_of(u, alpha, &origin);
  std::vector<CheckReport> out;
  out.push_back(identity_report("soliton_volume", in, volume(u, g), ball, tol * ball));
  out.push_back(inequality_report("soliton_entropy_point", in, entropy_gradient_norm(u, origin, alpha),
                                  0.0, tol));
  const bool asserted = alpha >= 1.0 - kAlphaEps;
  auto dual = inequality_report("soliton_dual_volume", in, ball, dual_volume(u, origin), tol * ball);
  auto low = inequality_report("soliton_entropy_lower", in,
                               entropy_at(u, origin, lower_alpha(n)), 0.0, tol);
  low.note = "alpha'=1/(n+2)";
  const double top = alpha / (alpha + 1.0);
  auto high = inequality_report("soliton_entropy_lower", in, entropy_at(u, origin, top), 0.0, tol);
  high.note = "alpha'=alpha/(alpha+1); endpoint evaluated, not asserted";
  high.informational = true;
  if (!asserted) {
    for (auto* r : {&dual, &low}) {
      r->informational = true;
      r->note += r->note.empty() ? "alpha < 1" : "; alpha < 1";
    }
  }
  out.push_back(std::move(dual));
  out.push_back(std::move(low));
  out.push_back(std::move(high));
  return out;
}

std::vector<CheckReport> check_all(const SupportFunction& u, const std::vector<double>& alphas) {
  std::vector<CheckReport> out;
  const auto body_in = inputs_of(u, NAN);
  const int n = u.dim();
  guarded(out, "blaschke_santalo", body_in, [&](auto& o) { o.push_back(check_blaschke_santalo(u)); });
  guarded(out, "affine_isoperimetric", body_in,
          [&](auto& o) { o.push_back(check_affine_isoperimetric(u)); });
  guarded(out, "jung_steinhagen", body_in, [&](auto& o) {
    for (auto& r : check_jung_steinhagen(u)) o.push_back(std::move(r));
  });
  for (double alpha : alphas) {
    const auto in = inputs_of(u, alpha);
    guarded(out, "entropy_nonneg", in, [&](auto& o) { o.push_back(check_entropy_nonneg(u, alpha)); });
    guarded(out, "z_vs_entropy", in, [&](auto& o) { o.push_back(check_z_vs_entropy(u, alpha)); });
    if (!is_one(alpha))
      guarded(out, "weighted_dual_identity", in, [&](auto& o) {
        const auto z = entropy_point(u, alpha).point;
        for (auto& r : check_weighted_dual_identity(u, z, alpha)) o.push_back(std::move(r));
      });
    guarded(out, "curvature_image", in, [&](auto& o) {
      for (auto& r : check_curvature_image(u, alpha)) o.push_back(std::move(r));
    });
    if (n == 1 && (alpha < 0.0 || alpha >= lower_alpha(n) - kAlphaEps))
      guarded(out, "entropy_stability", in,
              [&](auto& o) { o.push_back(check_entropy_stability(u, alpha)); });
  }
  return out;
}

std::vector<CheckReport> fuzz_suite(const FuzzOptions& opts) {
  const auto grid = build_grid(opts.dim, opts.bandlimit);
  std::vector<std::vector<CheckReport>> per(static_cast<std::size_t>(std::max(opts.count, 0)));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < opts.count; ++i) {
    const std::uint64_t seed = opts.first_seed + static_cast<std::uint64_t>(i);
    try {
      const auto u = random_body(seed, grid, opts.amplitude, false);
      per[i] = check_all(u, opts.alphas);
    } catch (const std::exception& e) {
      CheckReport r;
      r.name = "random_body";
      r.inputs = "seed=" + std::to_string(seed);
      r.lhs = r.rhs = r.slack = std::nan("");
      r.note = std::string("error: ") + e.what();
      per[i].push_back(std::move(r));
    }
  }
  std::vector<CheckReport> out;
  for (auto& v : per)
    for (auto& r : v) out.push_back(std::move(r));
  return out;
}

std::size_t count_failures(const std::vector<CheckReport>& reports) {
  std::size_t n = 0;
  for (const auto& r : reports)
    if (!r.pass && !r.informational) ++n;
  return n;
}

}  // namespace gcf
