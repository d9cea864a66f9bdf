#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcf {

/// Base of every domain error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A_i = Hess(u) + u I failed to be positive definite at some node.
class ConvexityLost : public Error {
 public:
  ConvexityLost(std::size_t node, double lambda_min)
      : Error("convexity lost at node " + std::to_string(node) +
              " (lambda_min = " + std::to_string(lambda_min) + ")"),
        node_(node),
        lambda_min_(lambda_min) {}
  std::size_t node() const noexcept { return node_; }
  double lambda_min() const noexcept { return lambda_min_; }

 private:
  std::size_t node_;
  double lambda_min_;
};

/// The requested basepoint is not strictly inside the body (min u_z <= 0).
class NotInterior : public Error {
 public:
  explicit NotInterior(double min_support)
      : Error("basepoint is not interior (min u_z = " + std::to_string(min_support) + ")"),
        min_support_(min_support) {}
  double min_support() const noexcept { return min_support_; }

 private:
  double min_support_;
};

class AlphaZero : public Error {
 public:
  AlphaZero() : Error("alpha must be nonzero") {}
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, int iterations, double residual)
      : Error(what + " did not converge after " + std::to_string(iterations) +
              " iterations (residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// A time step was rejected too many times in a row.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& reason, std::size_t node, double time)
      : Error("step failure at t = " + std::to_string(time) + ", node " + std::to_string(node) +
              ": " + reason),
        node_(node),
        time_(time) {}
  std::size_t node() const noexcept { return node_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t node_;
  double time_;
};

class InsufficientContraction : public Error {
 public:
  explicit InsufficientContraction(double ratio)
      : Error("trajectory contracted only by volume factor " + std::to_string(ratio) +
              " (need >= 2)") {}
};

class CompatibilityViolation : public Error {
 public:
  explicit CompatibilityViolation(double first_moment)
      : Error("curvature-image density has first moment " + std::to_string(first_moment) +
              " (must vanish)"),
        first_moment_(first_moment) {}
  double first_moment() const noexcept { return first_moment_; }

 private:
  double first_moment_;
};

class UnsupportedDimension : public Error {
 public:
  explicit UnsupportedDimension(int dim)
      : Error("operation not supported in dimension n = " + std::to_string(dim)) {}
};

class NotASoliton : public Error {
 public:
  explicit NotASoliton(double residual)
      : Error("body is not a soliton (residual " + std::to_string(residual) + ")") {}
};

class GridMismatch : public Error {
 public:
  GridMismatch() : Error("support functions live on different grids or basepoints") {}
};

}  // namespace gcf
