#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "gcflow/types.hpp"

namespace gcf {

namespace detail {
class SpectralBackend;
}

/// Spatial derivatives of a scalar field in the orthonormal tangent frame
/// of each node. For n = 1 the frame is d/dtheta; for n = 2 it is
/// (e_theta, e_phi) of spherical coordinates (theta = colatitude).
struct FrameDerivatives {
  int dim = 0;
  /// n entries per node.
  std::vector<double> gradient;
  /// n = 1: u'' (1 entry per node). n = 2: H11, H12, H22 (3 per node).
  std::vector<double> hessian;
  /// Fraction of spectral energy carried by the top 10% of retained degrees.
  double tail_fraction = 0.0;
  /// Set when tail_fraction exceeds 1e-8: the input is under-resolved.
  bool tail_warning = false;
};

/// Quadrature nodes on S^n with spectral analysis/synthesis up to degree L.
///
/// n = 1: N = 4L equiangular nodes, Fourier modes 0..L.
/// n = 2: 2L Gauss-Legendre colatitudes x 4L equiangular longitudes, real
/// spherical harmonics of degree 0..L. Both node sets are closed under the
/// antipodal map, so u(x) + u(-x) is exact on nodes.
///
/// Immutable after construction; share through std::shared_ptr.
class SphereGrid {
 public:
  ~SphereGrid();
  SphereGrid(const SphereGrid&) = delete;
  SphereGrid& operator=(const SphereGrid&) = delete;

  int dim() const noexcept { return dim_; }
  int bandlimit() const noexcept { return bandlimit_; }
  std::size_t size() const noexcept { return weights_.size(); }
  /// Ambient dimension n + 1.
  int ambient() const noexcept { return dim_ + 1; }

  std::span<const double> weights() const noexcept { return weights_; }
  Vec node(std::size_t i) const;
  /// Ambient coordinate `axis` of node i.
  double coord(std::size_t i, int axis) const noexcept { return coords_[i * ambient() + axis]; }
  std::size_t antipode(std::size_t i) const noexcept { return antipode_[i]; }

  /// Orthonormal tangent frame vector `k` (0 <= k < n) at node i, in R^{n+1}.
  Vec tangent(std::size_t i, int k) const;

  /// Effective node spacing used for explicit step limits. For n = 1 this is
  /// the true spacing 2 pi / N; for n = 2 it is the spacing with the same
  /// relation to the largest retained Laplacian eigenvalue L(L+1).
  double node_spacing() const noexcept { return spacing_; }

  double integrate(std::span<const double> values) const;
  double average(std::span<const double> values) const;

  // Spectral layer.
  std::size_t coeff_count() const noexcept;
  /// Harmonic degree of every coefficient slot.
  std::span<const int> coeff_degree() const noexcept;
  std::vector<double> analyze(std::span<const double> values) const;
  std::vector<double> synthesize(std::span<const double> coeffs) const;
  /// Band-limit to degree L (analysis followed by synthesis).
  std::vector<double> project(std::span<const double> values) const;
  FrameDerivatives frame_hessian(std::span<const double> values) const;

  /// Coefficient slots of the degree-1 space, ordered so that the field
  /// sum_k c_k Y_k equals <z, x> with z = linear_scale() * c.
  std::span<const std::size_t> linear_slots() const noexcept;
  double linear_scale() const noexcept;

  /// Coefficients of <z, x>.
  std::vector<double> linear_coeffs(const Vec& z) const;

  friend std::shared_ptr<const SphereGrid> build_grid(int dim, int bandlimit);

 private:
  SphereGrid(int dim, int bandlimit);

  void check_size(std::size_t n) const;

  int dim_;
  int bandlimit_;
  double spacing_ = 0.0;
  std::vector<double> coords_;
  std::vector<double> weights_;
  std::vector<std::size_t> antipode_;
  std::unique_ptr<detail::SpectralBackend> backend_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Builds a grid for dim in {1, 2} and bandlimit >= 4.
/// Throws std::invalid_argument otherwise.
GridPtr build_grid(int dim, int bandlimit);

/// Same (dim, bandlimit) pair; grids are deterministic functions of both.
inline bool same_grid(const SphereGrid& a, const SphereGrid& b) {
  return a.dim() == b.dim() && a.bandlimit() == b.bandlimit();
}

}  // namespace gcf
