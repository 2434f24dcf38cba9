#include <cmath>

#include "doctest.h"
#include "plrs/error.hpp"
#include "plrs/range_test.hpp"

using namespace plrs;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> rates;
  for (double r = lo; r <= hi + 1e-12; r += step) rates.push_back(r);
  return rates;
}

}  // namespace

TEST_CASE("breakdown lands within one grid step of 2/beta") {
  Vector eig(1);
  eig[0] = 10.0;  // gradient descent diverges past 2/beta = 0.2
  const ProblemSpec problem = diagonal_quadratic(eig);
  Vector init(1);
  init[0] = 1.0;

  RangeTestOptions options;
  options.steps_per_rate = 30;
  options.seed = 1;
  const auto result =
      run_range_test(problem, NoiseModel{}, grid(0.005, 0.3, 0.01), init, options);

  REQUIRE(result.breakdown_rate.has_value());
  CHECK(*result.breakdown_rate > 0.2 - 0.0101);
  CHECK(*result.breakdown_rate < 0.2 + 0.0101);
  REQUIRE(result.suggested_l_max.has_value());
  CHECK(*result.suggested_l_max < *result.breakdown_rate);
  CHECK(*result.suggested_l_min == doctest::Approx(0.7 * *result.suggested_l_max));
  CHECK_FALSE(result.no_breakdown);
  CHECK_FALSE(result.unusable);

  // The sweep is recorded in ascending rate order with sane flags.
  for (std::size_t i = 1; i < result.sweep.size(); ++i) {
    CHECK(result.sweep[i].rate > result.sweep[i - 1].rate);
  }
}

TEST_CASE("monotone improvement reports no breakdown") {
  Vector eig(1);
  eig[0] = 1.0;  // every grid rate below 2/beta = 2
  const ProblemSpec problem = diagonal_quadratic(eig);
  Vector init(1);
  init[0] = 1.0;
  RangeTestOptions options;
  options.steps_per_rate = 10;
  const auto result =
      run_range_test(problem, NoiseModel{}, grid(0.01, 0.3, 0.05), init, options);
  CHECK(result.no_breakdown);
  CHECK_FALSE(result.breakdown_rate.has_value());
  CHECK(*result.suggested_l_max == doctest::Approx(0.31).epsilon(0.2));
}

TEST_CASE("an all-diverging grid is flagged unusable") {
  Vector eig(1);
  eig[0] = 10.0;
  const ProblemSpec problem = diagonal_quadratic(eig);
  Vector init(1);
  init[0] = 1.0;
  RangeTestOptions options;
  options.steps_per_rate = 50;
  const auto result =
      run_range_test(problem, NoiseModel{}, {0.3, 0.4, 0.5}, init, options);
  CHECK(result.unusable);
  CHECK(result.breakdown_rate.has_value());
  CHECK_FALSE(result.suggested_l_max.has_value());
}

TEST_CASE("grid preconditions") {
  const ProblemSpec problem = diagonal_quadratic(Vector::Ones(1));
  Vector init(1);
  init[0] = 1.0;
  RangeTestOptions options;
  CHECK_THROWS_AS(run_range_test(problem, NoiseModel{}, {0.1, 0.1, 0.2}, init, options),
                  ContractViolation);
  CHECK_THROWS_AS(run_range_test(problem, NoiseModel{}, {0.1, 0.2}, init, options),
                  ContractViolation);
  options.steps_per_rate = 0;
  CHECK_THROWS_AS(run_range_test(problem, NoiseModel{}, {0.1, 0.2, 0.3}, init, options),
                  ContractViolation);
}

TEST_CASE("range test is deterministic given config and seed") {
  Vector eig(1);
  eig[0] = 10.0;
  const ProblemSpec problem = diagonal_quadratic(eig);
  const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.05}}};
  Vector init(1);
  init[0] = 1.0;
  RangeTestOptions options;
  options.steps_per_rate = 20;
  options.seed = 9;
  const auto a = run_range_test(problem, noise, grid(0.01, 0.25, 0.02), init, options);
  const auto b = run_range_test(problem, noise, grid(0.01, 0.25, 0.02), init, options);
  REQUIRE(a.sweep.size() == b.sweep.size());
  for (std::size_t i = 0; i < a.sweep.size(); ++i) {
    CHECK(a.sweep[i].final_loss == b.sweep[i].final_loss);
  }
}
