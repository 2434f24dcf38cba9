#include <cmath>

#include "doctest.h"
#include "plrs/error.hpp"
#include "plrs/problem.hpp"
#include "support/oracles.hpp"

using namespace plrs;

TEST_CASE("identity quadratic") {
  const ProblemSpec spec = diagonal_quadratic(Vector::Ones(4));
  Vector x(4);
  x << 1.0, -2.0, 0.5, 0.0;
  CHECK(spec.f(x) == doctest::Approx(0.5 * x.squaredNorm()).epsilon(1e-15));
  CHECK((spec.grad(x) - x).norm() == 0.0);
  CHECK(spec.constants.beta == 1.0);
  CHECK(spec.constants.alpha == 1.0);
  CHECK(spec.constants.gamma == 0.0);
  CHECK(spec.constants.rho == 0.0);
  REQUIRE(spec.minimizer.has_value());
  CHECK(spec.minimizer->norm() == 0.0);
}

TEST_CASE("strict saddle construction") {
  Vector eig = Vector::Ones(6);
  eig[5] = -0.5;
  const ProblemSpec spec = quadratic(6, eig, 3);
  CHECK(spec.constants.beta == 1.0);
  CHECK(spec.constants.gamma == 0.5);
  CHECK(spec.constants.alpha == 0.0);
  CHECK_FALSE(spec.minimizer.has_value());
  CHECK(min_eigenvalue(spec.hessian(Vector::Zero(6))) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("certify classifies the three regimes") {
  Vector eig(2);
  eig << 1.0, -0.5;
  const ProblemSpec saddle = diagonal_quadratic(eig);
  const auto at_saddle = certify(saddle, Vector::Zero(2), 0.01, 0.1);
  CHECK(at_saddle.cls == StationaryClass::SaddleCandidate);
  CHECK(at_saddle.fosp);

  const ProblemSpec bowl = diagonal_quadratic(Vector::Ones(2));
  const auto at_min = certify(bowl, Vector::Zero(2), 0.01, 0.1);
  CHECK(at_min.cls == StationaryClass::Sosp);
  CHECK(at_min.fosp);

  Vector far(2);
  far << 1.0, 0.0;
  const auto away = certify(bowl, far, 0.01, 0.1);
  CHECK(away.cls == StationaryClass::LargeGradient);
  CHECK_FALSE(away.fosp);
  CHECK(away.grad_norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("certify requires a Hessian") {
  ProblemSpec spec = diagonal_quadratic(Vector::Ones(2));
  spec.hessian = nullptr;
  CHECK_THROWS_AS(certify(spec, Vector::Zero(2), 0.01, 0.1), ContractViolation);
}

TEST_CASE("gradient matches central differences") {
  Vector eig(5);
  eig << 2.0, 1.0, 0.5, -0.3, 4.0;
  const ProblemSpec spec = quadratic(5, eig, 11);
  RngStream rng(4, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(5);
    for (int i = 0; i < 5; ++i) x[i] = rng.next_uniform(-2.0, 2.0);
    const Vector g = spec.grad(x);
    const Vector fd = oracles::fd_gradient(spec.f, x);
    const double rel = (g - fd).norm() / std::max(1.0, g.norm());
    CHECK(rel <= 1e-6);
  }
}

TEST_CASE("hessian is the gradient's derivative") {
  Vector eig(4);
  eig << 1.0, 3.0, -0.5, 0.25;
  const ProblemSpec spec = quadratic(4, eig, 2024);
  const Matrix h = spec.hessian(Vector::Zero(4));
  RngStream rng(5, 0);
  for (int trial = 0; trial < 5; ++trial) {
    Vector x(4);
    for (int i = 0; i < 4; ++i) x[i] = rng.next_uniform(-1.0, 1.0);
    // Columns of H against finite differences of the gradient.
    const double h_step = 1e-6;
    for (int j = 0; j < 4; ++j) {
      Vector hi = x;
      Vector lo = x;
      hi[j] += h_step;
      lo[j] -= h_step;
      const Vector col = (spec.grad(hi) - spec.grad(lo)) / (2.0 * h_step);
      CHECK((col - h.col(j)).norm() / std::max(1.0, h.col(j).norm()) <= 1e-5);
    }
  }
}

TEST_CASE("beta bounds gradient differences on sampled pairs") {
  Vector eig(6);
  eig << 0.1, 0.5, 1.0, 2.0, 3.0, -1.5;
  const ProblemSpec spec = quadratic(6, eig, 8);
  RngStream rng(6, 0);
  for (int trial = 0; trial < 200; ++trial) {
    Vector x(6), y(6);
    for (int i = 0; i < 6; ++i) {
      x[i] = rng.next_uniform(-3.0, 3.0);
      y[i] = rng.next_uniform(-3.0, 3.0);
    }
    const double lhs = (spec.grad(x) - spec.grad(y)).norm();
    const double rhs = spec.constants.beta * (x - y).norm();
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("rotation is a deterministic function of the seed") {
  Vector eig(3);
  eig << 1.0, 2.0, 3.0;
  const ProblemSpec a = quadratic(3, eig, 99);
  const ProblemSpec b = quadratic(3, eig, 99);
  const ProblemSpec c = quadratic(3, eig, 100);
  Vector x(3);
  x << 0.3, -0.7, 1.1;
  CHECK((a.grad(x) - b.grad(x)).norm() == 0.0);
  CHECK((a.grad(x) - c.grad(x)).norm() > 0.0);
}

TEST_CASE("quadratic rejects malformed input") {
  CHECK_THROWS_AS(quadratic(3, Vector::Ones(2), 0), ContractViolation);
  Vector bad(2);
  bad << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(quadratic(2, bad, 0), ContractViolation);
}
