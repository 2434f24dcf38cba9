#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "plrs/rng.hpp"

namespace plrs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Declared analytic constants of an objective. For quadratics every one of
/// them is exact, which is what makes the statistical checks sharp.
struct SmoothnessConstants {
  double beta = 0.0;     ///< gradient-Lipschitz constant
  double rho = 0.0;      ///< Hessian-Lipschitz constant (0 for quadratics)
  double alpha = 0.0;    ///< strong-convexity constant, 0 when not convex
  double sigma2 = 0.0;   ///< second-moment bound on the gradient noise
  double q_bound = 0.0;  ///< almost-sure norm bound on the gradient noise
  double b_bound = 0.0;  ///< bound on |f|, 0 when unbounded
  double gamma = 0.0;    ///< magnitude of the most negative curvature, 0 if none
  double nu = 0.0;       ///< gradient threshold for stationarity queries
  double delta = 0.0;    ///< locality radius around the minimizer
};

/// Objective with gradient oracle and optional Hessian. Immutable and
/// freely shareable.
struct ProblemSpec {
  Eigen::Index dim = 0;
  std::function<double(const Vector&)> f;
  std::function<Vector(const Vector&)> grad;
  std::function<Matrix(const Vector&)> hessian;  // may be empty
  SmoothnessConstants constants;
  std::optional<Vector> minimizer;
  std::string name;

  bool has_hessian() const { return static_cast<bool>(hessian); }
};

/// f(x) = x' A x / 2 with A = R diag(eigenvalues) R' for a seeded random
/// rotation R. beta = max |eig|; alpha = min eig when positive definite;
/// gamma = |min eig| when some eigenvalue is negative; rho = 0.
ProblemSpec quadratic(Eigen::Index dim, const Vector& eigenvalues,
                      std::uint64_t rotation_seed);

/// Axis-aligned quadratic (identity rotation), for exact hand analysis.
ProblemSpec diagonal_quadratic(const Vector& eigenvalues);

enum class StationaryClass { LargeGradient, SaddleCandidate, Sosp };

struct Certificate {
  StationaryClass cls = StationaryClass::LargeGradient;
  bool fosp = false;  ///< gradient norm <= nu, reported alongside the class
  double grad_norm = 0.0;
  double lambda_min = 0.0;
};

/// Classifies x: LargeGradient when the gradient norm exceeds nu, otherwise
/// SaddleCandidate when lambda_min(H) <= -gamma, otherwise Sosp.
/// Throws when the problem has no Hessian.
Certificate certify(const ProblemSpec& spec, const Vector& x, double nu, double gamma);

/// Smallest eigenvalue of a symmetric matrix (direct dense decomposition).
double min_eigenvalue(const Matrix& symmetric);

}  // namespace plrs
