#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gcflow/sphere_grid.hpp"
#include "gcflow/types.hpp"

namespace gcf {

/// Grid-sampled support function u(x_i) of a convex body, measured from
/// `basepoint` (in the frame the body was created in).
struct SupportFunction {
  GridPtr grid;
  std::vector<double> values;
  Vec basepoint;

  int dim() const { return grid->dim(); }
  std::size_t size() const { return values.size(); }
  double min() const;
  double max() const;
};

/// Per-node curvature data of a support function.
struct BodyGeometry {
  int dim = 0;
  /// A = frame Hessian + u I; 1 (n = 1) or 3 (n = 2: A11, A12, A22) per node.
  std::vector<double> a;
  /// f = det A, the surface-area measure density.
  std::vector<double> f;
  /// Gauss curvature K = 1/f.
  std::vector<double> K;
  std::vector<double> lambda_min;
  std::vector<double> lambda_max;
  /// Tangent gradient of u (n entries per node) for boundary points.
  std::vector<double> gradient;
  double tail_fraction = 0.0;
  bool tail_warning = false;

  /// trace(adj A): 1 for n = 1, A11 + A22 for n = 2.
  double sigma_n_minus_1(std::size_t i) const;
};

SupportFunction make_support(GridPtr grid, std::vector<double> values);
SupportFunction ball(GridPtr grid, double radius = 1.0);
/// Ball of radius `radius` centred at `center` (relative to the basepoint).
SupportFunction ball(GridPtr grid, double radius, const Vec& center);
/// Axis-aligned ellipse/ellipsoid with the given semi-axes, centred at the basepoint.
SupportFunction ellipsoid(GridPtr grid, const std::vector<double>& semi_axes);

/// u_z(x) = u(x) - <z, x>; basepoint moved by z.
SupportFunction support_about(const SupportFunction& u, const Vec& z);
/// s u.
SupportFunction scaled(const SupportFunction& u, double s);

/// Throws ConvexityLost if A is not positive definite at some node.
BodyGeometry curvature_data(const SupportFunction& u);

double volume(const SupportFunction& u);
double volume(const SupportFunction& u, const BodyGeometry& g);
double surface_area(const BodyGeometry& g, const SphereGrid& grid);
double surface_area(const SupportFunction& u);
double affine_surface_area(const BodyGeometry& g, const SphereGrid& grid);
double affine_surface_area(const SupportFunction& u);

/// Rescale to |B(1)|.
SupportFunction normalize_volume(const SupportFunction& u);

struct WidthRadii {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double rho_plus = 0.0;
  double rho_minus = 0.0;
  /// Node indices of the widest / narrowest direction.
  std::size_t w_plus_node = 0;
  std::size_t w_minus_node = 0;
  /// Centres of the circumscribed / inscribed balls relative to the basepoint.
  Vec outer_center;
  Vec inner_center;
};

/// Widths over antipodal node pairs and the exact grid in/out radii.
/// Throws NonConvergence if the linear programs fail to terminate.
WidthRadii width_radii(const SupportFunction& u);

/// |Omega*_z| = (1/(n+1)) int u_z^{-(n+1)}. Throws NotInterior.
double dual_volume(const SupportFunction& u, const Vec& z);

/// X_i = u_i x_i + grad u, relative to the basepoint.
std::vector<Vec> boundary_points(const SupportFunction& u);
std::vector<Vec> boundary_points(const SupportFunction& u, const BodyGeometry& g);

/// max |u1 - u2|. Throws GridMismatch for different grids or basepoints.
double hausdorff_distance(const SupportFunction& u1, const SupportFunction& u2);

/// Seeded smooth body with volume |B(1)|. Throws std::invalid_argument for
/// amplitude outside [0, 1) and NonConvergence after 50 rejections.
SupportFunction random_body(std::uint64_t seed, GridPtr grid, double amplitude,
                            bool centrally_symmetric);

/// Uniform double in [0, 1) from the top 53 bits; std::mt19937_64 output is
/// fixed by the standard, so draws are identical across platforms.
double uniform01(std::mt19937_64& rng);

// Body files.
/// Writes `# key=value` header lines, then dim/bandlimit/basepoint/values.
void write_body(std::ostream& os, const SupportFunction& u,
                const std::vector<std::pair<std::string, std::string>>& header = {});
/// Throws std::runtime_error on malformed input.
SupportFunction read_body(std::istream& is);

/// Shortest round-trip decimal form (17 significant digits).
std::string format_double(double v);

}  // namespace gcf
