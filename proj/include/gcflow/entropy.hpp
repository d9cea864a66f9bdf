#pragma once

#include "gcflow/convex_body.hpp"

namespace gcf {

struct EntropyResult {
  double alpha = 0.0;
  double value = 0.0;
  Vec point;
  /// |int x u_z^{-1/alpha}| / int u_z^{-1/alpha} at the returned point.
  double gradient_norm = 0.0;
  int iterations = 0;
};

/// E_alpha(Omega, z): (alpha/(alpha-1)) log avg u_z^{1-1/alpha}, or avg log u_z
/// when |alpha - 1| < 1e-9. Throws AlphaZero, NotInterior.
double entropy_at(const SupportFunction& u, const Vec& z, double alpha);

/// Stationarity residual of the entropy point condition at z.
double entropy_gradient_norm(const SupportFunction& u, const Vec& z, double alpha);

/// (n+1) avg(u x), the Steiner point approximation.
Vec steiner_point(const SupportFunction& u);

/// Extremal point of E_alpha(Omega, .): maximiser for alpha > 0, minimiser
/// for alpha < 0. Damped Newton on the convex potential
///   Psi(z) = avg g(u_z),  g(s) = s^p / (p (p - 1)),  p = 1 - 1/alpha  (g = -log s at alpha = 1),
/// whose minimiser is the entropy point for every alpha != 0.
/// Throws NonConvergence.
EntropyResult entropy_point(const SupportFunction& u, double alpha, double tolerance = 1e-10,
                            int max_iterations = 100);

struct SantaloResult {
  Vec point;
  double dual_volume = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
};

/// Minimiser of |Omega*_z|, found as the alpha = 1/(n+2) entropy point.
SantaloResult santalo_point(const SupportFunction& u);

/// Z_alpha = (avg K^{alpha-1})^{1/(alpha-1)}, exp(avg log K) at alpha = 1.
double zalpha(const BodyGeometry& g, const SphereGrid& grid, double alpha);
double zalpha(const SupportFunction& u, double alpha);

struct WeightedDualIdentity {
  /// int u_z^{1-1/alpha} over the sphere, i.e. omega_n e^{((alpha-1)/alpha) E}.
  double lhs = 0.0;
  /// Weighted volume of the polar body (alpha < 1) or its complement
  /// (alpha > 1, alpha < 0) with density |w|^{1/alpha-n-2}, times |1/alpha - 1|,
  /// from closed-form radial antiderivatives.
  double rhs = 0.0;
  /// d(Omega0, B) + |B \ Omega0| - |Omega0 \ B|.
  double symmetric_difference_term = 0.0;
  /// 1 -+ (|1/alpha - 1| / omega_n) * symmetric_difference_term, to be compared
  /// with avg u_z^{1-1/alpha}.
  double decomposition = 0.0;
  /// avg u_z^{1-1/alpha}.
  double average = 0.0;
  /// The decomposition is valid for alpha >= 1/(n+2) (alpha != 1) and alpha < 0.
  bool decomposition_applies = false;
};

/// Throws AlphaZero, NotInterior, std::invalid_argument for alpha = 1.
WeightedDualIdentity weighted_dual_identities(const SupportFunction& u, const Vec& z, double alpha);

/// E(mid) >= (E(z1) + E(z2))/2 - 1e-12. Throws NotInterior.
bool concavity_probe(const SupportFunction& u, double alpha, const Vec& z1, const Vec& z2);

}  // namespace gcf
