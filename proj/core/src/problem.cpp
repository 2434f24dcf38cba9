#include "plrs/problem.hpp"

#include <cmath>
#include <memory>

#include <Eigen/Dense>

#include "plrs/error.hpp"

namespace plrs {
namespace {

Matrix seeded_rotation(Eigen::Index dim, std::uint64_t seed) {
  RngStream rng = make_stream(seed, StreamPurpose::Misc, 0);
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.next_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the column signs so the rotation is a deterministic function of the
  // seed rather than of the QR implementation's sign convention.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

ProblemSpec quadratic_from_matrix(Matrix a, const Vector& eigenvalues,
                                  const std::string& name) {
  ProblemSpec spec;
  spec.dim = a.rows();
  spec.name = name;

  const double eig_max = eigenvalues.maxCoeff();
  const double eig_min = eigenvalues.minCoeff();
  spec.constants.beta = std::max(std::abs(eig_max), std::abs(eig_min));
  spec.constants.rho = 0.0;
  spec.constants.alpha = eig_min > 0.0 ? eig_min : 0.0;
  spec.constants.gamma = eig_min < 0.0 ? -eig_min : 0.0;
  if (eig_min > 0.0) spec.minimizer = Vector::Zero(spec.dim);

  auto matrix = std::make_shared<Matrix>(std::move(a));
  spec.f = [matrix](const Vector& x) { return 0.5 * x.dot(*matrix * x); };
  spec.grad = [matrix](const Vector& x) { return Vector(*matrix * x); };
  spec.hessian = [matrix](const Vector&) { return *matrix; };
  return spec;
}

}  // namespace

ProblemSpec quadratic(Eigen::Index dim, const Vector& eigenvalues,
                      std::uint64_t rotation_seed) {
  if (eigenvalues.size() != dim) {
    throw ContractViolation("quadratic: eigenvalue count " +
                            std::to_string(eigenvalues.size()) +
                            " does not match dim " + std::to_string(dim));
  }
  if (dim < 1) throw ContractViolation("quadratic: dim must be >= 1");
  if (!eigenvalues.allFinite()) {
    throw ContractViolation("quadratic: eigenvalues must be finite");
  }
  const Matrix r = seeded_rotation(dim, rotation_seed);
  Matrix a = r * eigenvalues.asDiagonal() * r.transpose();
  // Symmetrize away the last-ulp asymmetry of the triple product.
  a = 0.5 * (a + a.transpose()).eval();
  return quadratic_from_matrix(std::move(a), eigenvalues, "quadratic");
}

ProblemSpec diagonal_quadratic(const Vector& eigenvalues) {
  if (eigenvalues.size() < 1) {
    throw ContractViolation("diagonal_quadratic: need at least one eigenvalue");
  }
  Matrix a = Matrix(eigenvalues.asDiagonal());
  return quadratic_from_matrix(std::move(a), eigenvalues, "diagonal_quadratic");
}

double min_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Certificate certify(const ProblemSpec& spec, const Vector& x, double nu, double gamma) {
  if (!spec.has_hessian()) {
    throw ContractViolation("certify: problem '" + spec.name + "' has no Hessian");
  }
  Certificate cert;
  cert.grad_norm = spec.grad(x).norm();
  cert.lambda_min = min_eigenvalue(spec.hessian(x));
  cert.fosp = cert.grad_norm <= nu;
  if (cert.grad_norm > nu) {
    cert.cls = StationaryClass::LargeGradient;
  } else if (cert.lambda_min <= -gamma) {
    cert.cls = StationaryClass::SaddleCandidate;
  } else {
    cert.cls = StationaryClass::Sosp;
  }
  return cert;
}

}  // namespace plrs
