#include "gcflow/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gcflow/kernels.hpp"
#include "real_fft.hpp"

namespace gcf {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTailWarning = 1e-8;
// Coefficients below this fraction of the largest are rounding noise; they
// are dropped before differentiation so that constants have zero Hessian.
constexpr double kNoiseFloor = 1e-14;

void drop_noise(std::vector<double>& c) {
  double big = 0.0;
  for (double v : c) big = std::max(big, std::abs(v));
  for (double& v : c)
    if (std::abs(v) <= kNoiseFloor * big) v = 0.0;
}

// Energy share of the top 10% of degrees.
double tail_fraction(std::span<const double> coeffs, std::span<const int> degree, int L) {
  const int width = std::max(1, static_cast<int>(std::ceil(0.1 * (L + 1))));
  const int first_tail = L - width + 1;
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    const double e = coeffs[s] * coeffs[s];
    total += e;
    if (degree[s] >= first_tail) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

// Gauss-Legendre nodes (descending) and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace

namespace detail {

class SpectralBackend {
 public:
  virtual ~SpectralBackend() = default;
  virtual std::size_t coeff_count() const = 0;
  virtual std::span<const int> degree() const = 0;
  virtual std::vector<double> analyze(std::span<const double> v) const = 0;
  virtual std::vector<double> synthesize(std::span<const double> c) const = 0;
  virtual FrameDerivatives derivatives(std::span<const double> v) const = 0;
  virtual std::span<const std::size_t> linear_slots() const = 0;
  virtual double linear_scale() const = 0;
};

// Fourier series on S^1: slot 0 = constant, 2k-1 = cos k, 2k = sin k.
class CircleBackend final : public SpectralBackend {
 public:
  explicit CircleBackend(int L) : L_(L), n_(4 * static_cast<std::size_t>(L)), fft_(n_) {
    degree_.resize(2 * L + 1);
    degree_[0] = 0;
    for (int k = 1; k <= L; ++k) degree_[2 * k - 1] = degree_[2 * k] = k;
  }

  std::size_t coeff_count() const override { return degree_.size(); }
  std::span<const int> degree() const override { return degree_; }
  std::span<const std::size_t> linear_slots() const override { return linear_; }
  double linear_scale() const override { return 1.0; }

  std::vector<double> analyze(std::span<const double> v) const override {
    std::vector<cplx> spec(fft_.spectrum_size());
    fft_.forward(v.data(), spec.data());
    return from_spectrum(spec);
  }

  std::vector<double> synthesize(std::span<const double> c) const override {
    std::vector<cplx> spec(fft_.spectrum_size(), 0.0);
    spec[0] = c[0];
    for (int k = 1; k <= L_; ++k) spec[k] = cplx(c[2 * k - 1], -c[2 * k]) * 0.5;
    std::vector<double> out(n_);
    fft_.inverse(spec.data(), out.data());
    return out;
  }

  FrameDerivatives derivatives(std::span<const double> v) const override {
    auto coeffs = analyze(v);
    drop_noise(coeffs);
    std::vector<cplx> d1(fft_.spectrum_size(), 0.0);
    std::vector<cplx> d2(fft_.spectrum_size(), 0.0);
    for (int k = 1; k <= L_; ++k) {
      const cplx z = cplx(coeffs[2 * k - 1], -coeffs[2 * k]) * 0.5;
      d1[k] = z * cplx(0.0, k);
      d2[k] = z * (-static_cast<double>(k) * k);
    }
    FrameDerivatives out;
    out.dim = 1;
    out.gradient.resize(n_);
    out.hessian.resize(n_);
    fft_.inverse(d1.data(), out.gradient.data());
    fft_.inverse(d2.data(), out.hessian.data());
    out.tail_fraction = tail_fraction(coeffs, degree_, L_);
    out.tail_warning = out.tail_fraction > kTailWarning;
    return out;
  }

 private:
  std::vector<double> from_spectrum(const std::vector<cplx>& spec) const {
    const double inv_n = 1.0 / static_cast<double>(n_);
    std::vector<double> c(degree_.size());
    c[0] = spec[0].real() * inv_n;
    for (int k = 1; k <= L_; ++k) {
      c[2 * k - 1] = 2.0 * spec[k].real() * inv_n;
      c[2 * k] = -2.0 * spec[k].imag() * inv_n;
    }
    return c;
  }

  int L_;
  std::size_t n_;
  RealFft fft_;
  std::vector<int> degree_;
  std::vector<std::size_t> linear_{1, 2};
};

// Real spherical harmonics on Gauss-Legendre x equiangular rings.
class SphereBackend final : public SpectralBackend {
 public:
  SphereBackend(int L, std::span<const double> cos_theta, std::span<const double> gl_weight,
                std::size_t n_phi)
      : L_(L), rings_(cos_theta.size()), n_phi_(n_phi), fft_(n_phi) {
    const auto stride = static_cast<std::size_t>(L) + 1;
    degree_.resize(stride * stride);
    for (int l = 0; l <= L; ++l)
      for (int m = 0; m <= l; ++m) {
        degree_[kernels::sh_slot(l, m, false)] = l;
        if (m > 0) degree_[kernels::sh_slot(l, m, true)] = l;
      }
    build_tables(cos_theta, gl_weight);
    // Y_11c ~ x1, Y_11s ~ x2, Y_10 ~ x3.
    linear_ = {kernels::sh_slot(1, 1, false), kernels::sh_slot(1, 1, true), kernels::sh_slot(1, 0, false)};
  }

  std::size_t coeff_count() const override { return degree_.size(); }
  std::span<const int> degree() const override { return degree_; }
  std::span<const std::size_t> linear_slots() const override { return linear_; }
  double linear_scale() const override { return std::sqrt(3.0 / (4.0 * kPi)); }

  std::vector<double> analyze(std::span<const double> v) const override {
    const auto stride = static_cast<std::size_t>(L_) + 1;
    std::vector<double> rc(rings_ * stride);
    std::vector<double> rs(rings_ * stride);
    std::vector<cplx> spec(fft_.spectrum_size());
    for (std::size_t r = 0; r < rings_; ++r) {
      fft_.forward(v.data() + r * n_phi_, spec.data());
      for (std::size_t m = 0; m < stride; ++m) {
        rc[r * stride + m] = spec[m].real();
        rs[r * stride + m] = -spec[m].imag();
      }
    }
    std::vector<double> coeffs(degree_.size(), 0.0);
    kernels::omp::legendre_analysis(tables_, rc, rs, coeffs);
    return coeffs;
  }

  std::vector<double> synthesize(std::span<const double> c) const override {
    const auto stride = static_cast<std::size_t>(L_) + 1;
    std::vector<double> rc(rings_ * stride);
    std::vector<double> rs(rings_ * stride);
    kernels::omp::legendre_synthesis(tables_, tables_.p, c, rc, rs);
    std::vector<double> out(rings_ * n_phi_);
    for (std::size_t r = 0; r < rings_; ++r) ring_inverse(rc, rs, r, 0, out.data() + r * n_phi_);
    return out;
  }

  FrameDerivatives derivatives(std::span<const double> v) const override {
    auto coeffs = analyze(v);
    drop_noise(coeffs);
    const auto stride = static_cast<std::size_t>(L_) + 1;
    const std::size_t cells = rings_ * stride;
    std::vector<double> pc(cells), ps(cells), tc(cells), ts(cells), wc(cells), ws(cells);
    kernels::omp::legendre_synthesis(tables_, tables_.p, coeffs, pc, ps);
    kernels::omp::legendre_synthesis(tables_, tables_.dp, coeffs, tc, ts);
    kernels::omp::legendre_synthesis(tables_, tables_.d2p, coeffs, wc, ws);

    const std::size_t n = rings_ * n_phi_;
    std::vector<double> u_t(n_phi_), u_tt(n_phi_), u_p(n_phi_), u_tp(n_phi_), u_pp(n_phi_);
    FrameDerivatives out;
    out.dim = 2;
    out.gradient.resize(2 * n);
    out.hessian.resize(3 * n);
    for (std::size_t r = 0; r < rings_; ++r) {
      ring_inverse(tc, ts, r, 0, u_t.data());
      ring_inverse(wc, ws, r, 0, u_tt.data());
      ring_inverse(pc, ps, r, 1, u_p.data());
      ring_inverse(tc, ts, r, 1, u_tp.data());
      ring_inverse(pc, ps, r, 2, u_pp.data());
      const double s = sin_theta_[r];
      const double cot = cos_theta_[r] / s;
      for (std::size_t k = 0; k < n_phi_; ++k) {
        const std::size_t i = r * n_phi_ + k;
        out.gradient[2 * i] = u_t[k];
        out.gradient[2 * i + 1] = u_p[k] / s;
        out.hessian[3 * i] = u_tt[k];
        out.hessian[3 * i + 1] = (u_tp[k] - cot * u_p[k]) / s;
        out.hessian[3 * i + 2] = u_pp[k] / (s * s) + cot * u_t[k];
      }
    }
    out.tail_fraction = tail_fraction(coeffs, degree_, L_);
    out.tail_warning = out.tail_fraction > kTailWarning;
    return out;
  }

 private:
  // Inverse longitude transform of ring r after applying d^order/dphi^order
  // to the (cos, sin) ring spectra.
  void ring_inverse(const std::vector<double>& rc, const std::vector<double>& rs, std::size_t r,
                    int order, double* out) const {
    const auto stride = static_cast<std::size_t>(L_) + 1;
    std::vector<cplx> spec(fft_.spectrum_size(), 0.0);
    for (int m = 0; m <= L_; ++m) {
      double c = rc[r * stride + m];
      double s = rs[r * stride + m];
      if (order == 1) {
        const double nc = m * s;
        s = -m * c;
        c = nc;
      } else if (order == 2) {
        c *= -static_cast<double>(m) * m;
        s *= -static_cast<double>(m) * m;
      }
      spec[m] = m == 0 ? cplx(c, 0.0) : cplx(c, -s) * 0.5;
    }
    fft_.inverse(spec.data(), out);
  }

  void build_tables(std::span<const double> cos_theta, std::span<const double> gl_weight) {
    const int L = L_;
    tables_.bandlimit = L;
    tables_.rings = rings_;
    tables_.pairs = LegendreTablesPairs(L);
    tables_.p.assign(rings_ * tables_.pairs, 0.0);
    tables_.dp.assign(rings_ * tables_.pairs, 0.0);
    tables_.d2p.assign(rings_ * tables_.pairs, 0.0);
    tables_.ring_weight.resize(rings_);
    cos_theta_.assign(cos_theta.begin(), cos_theta.end());
    sin_theta_.resize(rings_);
    for (std::size_t r = 0; r < rings_; ++r) {
      const double x = cos_theta[r];
      const double s = std::sqrt((1.0 - x) * (1.0 + x));
      sin_theta_[r] = s;
      tables_.ring_weight[r] = gl_weight[r] * 2.0 * kPi / static_cast<double>(n_phi_);
      double* p = tables_.p.data() + r * tables_.pairs;
      double* dp = tables_.dp.data() + r * tables_.pairs;
      double* d2p = tables_.d2p.data() + r * tables_.pairs;
      double pmm = std::sqrt(1.0 / (4.0 * kPi));
      for (int m = 0; m <= L; ++m) {
        if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        const double mm = static_cast<double>(m) * m;
        double prev2 = 0.0;
        double prev1 = 0.0;
        for (int l = m; l <= L; ++l) {
          const double ll = static_cast<double>(l) * l;
          double cur;
          if (l == m) {
            cur = pmm;
          } else if (l == m + 1) {
            cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
          } else {
            const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
            const double lm1 = static_cast<double>(l - 1) * (l - 1);
            const double b = std::sqrt((lm1 - mm) / (4.0 * lm1 - 1.0));
            cur = a * (x * prev1 - b * prev2);
          }
          const double c_lm = l == m ? 0.0 : std::sqrt((2.0 * l + 1.0) * (ll - mm) / (2.0 * l - 1.0));
          const double d1 = (l * x * cur - c_lm * prev1) / s;
          const double d2 = -(x / s) * d1 - (l * (l + 1.0) - mm / (s * s)) * cur;
          const double scale = m > 0 ? std::sqrt(2.0) : 1.0;
          const std::size_t k = kernels::LegendreTables::pair_index(l, m);
          p[k] = scale * cur;
          dp[k] = scale * d1;
          d2p[k] = scale * d2;
          prev2 = prev1;
          prev1 = cur;
        }
      }
    }
  }

  static std::size_t LegendreTablesPairs(int L) { return static_cast<std::size_t>(L + 1) * (L + 2) / 2; }

  int L_;
  std::size_t rings_;
  std::size_t n_phi_;
  RealFft fft_;
  std::vector<int> degree_;
  std::vector<std::size_t> linear_;
  std::vector<double> cos_theta_;
  std::vector<double> sin_theta_;
  kernels::LegendreTables tables_;
};

}  // namespace detail

SphereGrid::SphereGrid(int dim, int bandlimit) : dim_(dim), bandlimit_(bandlimit) {
  const int L = bandlimit;
  if (dim == 1) {
    const std::size_t n = 4 * static_cast<std::size_t>(L);
    coords_.resize(2 * n);
    weights_.assign(n, 2.0 * kPi / static_cast<double>(n));
    antipode_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
      coords_[2 * k] = std::cos(th);
      coords_[2 * k + 1] = std::sin(th);
      antipode_[k] = (k + n / 2) % n;
    }
    // Exact antipodal symmetry of the stored coordinates.
    for (std::size_t k = n / 2; k < n; ++k) {
      coords_[2 * k] = -coords_[2 * (k - n / 2)];
      coords_[2 * k + 1] = -coords_[2 * (k - n / 2) + 1];
    }
    spacing_ = 2.0 * kPi / static_cast<double>(n);
    backend_ = std::make_unique<detail::CircleBackend>(L);
    return;
  }
  const std::size_t rings = 2 * static_cast<std::size_t>(L);
  const std::size_t n_phi = 4 * static_cast<std::size_t>(L);
  std::vector<double> x, w;
  gauss_legendre(static_cast<int>(rings), x, w);
  const std::size_t n = rings * n_phi;
  coords_.resize(3 * n);
  weights_.resize(n);
  antipode_.resize(n);
  std::vector<double> cphi(n_phi), sphi(n_phi);
  for (std::size_t k = 0; k < n_phi; ++k) {
    const double ph = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n_phi);
    cphi[k] = std::cos(ph);
    sphi[k] = std::sin(ph);
  }
  for (std::size_t k = n_phi / 2; k < n_phi; ++k) {
    cphi[k] = -cphi[k - n_phi / 2];
    sphi[k] = -sphi[k - n_phi / 2];
  }
  for (std::size_t r = 0; r < rings; ++r) {
    const double ct = x[r];
    const double st = std::sqrt((1.0 - ct) * (1.0 + ct));
    for (std::size_t k = 0; k < n_phi; ++k) {
      const std::size_t i = r * n_phi + k;
      coords_[3 * i] = st * cphi[k];
      coords_[3 * i + 1] = st * sphi[k];
      coords_[3 * i + 2] = ct;
      weights_[i] = w[r] * 2.0 * kPi / static_cast<double>(n_phi);
      antipode_[i] = (rings - 1 - r) * n_phi + (k + n_phi / 2) % n_phi;
    }
  }
  spacing_ = 0.5 * kPi / std::sqrt(static_cast<double>(L) * (L + 1));
  backend_ = std::make_unique<detail::SphereBackend>(L, x, w, n_phi);
}

SphereGrid::~SphereGrid() = default;

GridPtr build_grid(int dim, int bandlimit) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("sphere dimension must be 1 or 2, got " + std::to_string(dim));
  if (bandlimit < 4) throw std::invalid_argument("bandlimit must be >= 4, got " + std::to_string(bandlimit));
  return GridPtr(new SphereGrid(dim, bandlimit));
}

Vec SphereGrid::node(std::size_t i) const {
  Vec x(ambient());
  for (int a = 0; a < ambient(); ++a) x[a] = coords_[i * ambient() + a];
  return x;
}

Vec SphereGrid::tangent(std::size_t i, int k) const {
  Vec t(ambient());
  if (dim_ == 1) {
    t << -coord(i, 1), coord(i, 0);
    return t;
  }
  const double x = coord(i, 0), y = coord(i, 1), z = coord(i, 2);
  const double s = std::hypot(x, y);
  const double cp = x / s, sp = y / s;
  if (k == 0)
    t << z * cp, z * sp, -s;
  else
    t << -sp, cp, 0.0;
  return t;
}

void SphereGrid::check_size(std::size_t n) const {
  if (n != size())
    throw std::invalid_argument("expected " + std::to_string(size()) + " nodal values, got " +
                                std::to_string(n));
}

double SphereGrid::integrate(std::span<const double> values) const {
  check_size(values.size());
  return kernels::omp::weighted_sum(weights_, values);
}

double SphereGrid::average(std::span<const double> values) const {
  return integrate(values) / sphere_measure(dim_);
}

std::size_t SphereGrid::coeff_count() const noexcept { return backend_->coeff_count(); }
std::span<const int> SphereGrid::coeff_degree() const noexcept { return backend_->degree(); }

std::vector<double> SphereGrid::analyze(std::span<const double> values) const {
  check_size(values.size());
  return backend_->analyze(values);
}

std::vector<double> SphereGrid::synthesize(std::span<const double> coeffs) const {
  if (coeffs.size() != coeff_count())
    throw std::invalid_argument("expected " + std::to_string(coeff_count()) + " coefficients");
  return backend_->synthesize(coeffs);
}

std::vector<double> SphereGrid::project(std::span<const double> values) const {
  return synthesize(analyze(values));
}

FrameDerivatives SphereGrid::frame_hessian(std::span<const double> values) const {
  check_size(values.size());
  return backend_->derivatives(values);
}

std::span<const std::size_t> SphereGrid::linear_slots() const noexcept { return backend_->linear_slots(); }
double SphereGrid::linear_scale() const noexcept { return backend_->linear_scale(); }

std::vector<double> SphereGrid::linear_coeffs(const Vec& z) const {
  std::vector<double> c(coeff_count(), 0.0);
  const auto slots = linear_slots();
  for (int a = 0; a < ambient(); ++a) c[slots[a]] = z[a] / linear_scale();
  return c;
}

}  // namespace gcf
