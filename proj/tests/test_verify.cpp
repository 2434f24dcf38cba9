#include <cmath>

#include "doctest.h"
#include "plrs/error.hpp"
#include "plrs/verify.hpp"

using namespace plrs;

TEST_CASE("scalar moment oracle closed forms") {
  // Deterministic contraction: m_t = x0^2 (1 - lr alpha)^(2t).
  const PlrsSpec fixed = PlrsSpec::make(0.1, 0.1);
  CHECK(scalar_moment_oracle(1.0, fixed, 0.0, 2.0, 0) == 4.0);
  CHECK(scalar_moment_oracle(1.0, fixed, 0.0, 2.0, 5) ==
        doctest::Approx(4.0 * std::pow(0.9, 10)).epsilon(1e-12));

  const PlrsSpec plrs = PlrsSpec::make(0.07, 0.1);
  CHECK(scalar_moment_oracle(1.0, plrs, 0.01, 0.3, 0) == 0.09);

  // Stationary value, hand-computed from the two expectations:
  // E[eta^2] = 0.085^2 + 0.03^2/12 = 0.0073, E[(1-eta)^2] = 0.8373,
  // m_inf = 0.0073 * 0.01 / 0.1627.
  const double stationary = stationary_second_moment(1.0, plrs, 0.01);
  CHECK(stationary == doctest::Approx(4.486785e-4).epsilon(1e-5));
  // The recursion converges to it.
  CHECK(scalar_moment_oracle(1.0, plrs, 0.01, 0.0, 2000) ==
        doctest::Approx(stationary).epsilon(1e-12));

  // Non-contracting rate is flagged.
  CHECK_THROWS_AS(scalar_moment_oracle(25.0, plrs, 0.01, 1.0, 10), ContractViolation);
  CHECK_THROWS_AS(stationary_second_moment(0.0, plrs, 0.01), ContractViolation);
}

TEST_CASE("zero mean check: degenerate case is exactly zero") {
  const ProblemSpec problem = diagonal_quadratic(Vector::Ones(2));
  const PlrsSpec degenerate = PlrsSpec::make(0.08, 0.08);
  Vector x(2);
  x << 1.0, 0.0;
  const auto report = check_zero_mean(problem, make_noise_drawer(NoiseModel{}, 2),
                                      degenerate, x, 2000, 1);
  CHECK(report.verdict == Verdict::Pass);
  CHECK(report.estimate == 0.0);
  CHECK(report.std_error == 0.0);
}

TEST_CASE("zero mean check passes honest noise and fails biased noise") {
  const ProblemSpec problem = diagonal_quadratic(Vector::Ones(2));
  const PlrsSpec plrs = PlrsSpec::make(0.07, 0.1);
  const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
  Vector x(2);
  x << 1.0, 0.0;

  const auto honest =
      check_zero_mean(problem, make_noise_drawer(noise, 2), plrs, x, 50000, 7);
  CHECK(honest.verdict == Verdict::Pass);

  Vector offset = Vector::Zero(2);
  offset[0] = 0.01;
  const auto biased = check_zero_mean(
      problem, biased_drawer(make_noise_drawer(noise, 2), offset), plrs, x, 50000, 7);
  CHECK(biased.verdict == Verdict::Fail);

  const auto tiny = check_zero_mean(problem, make_noise_drawer(noise, 2), plrs, x, 10, 7);
  CHECK(tiny.verdict == Verdict::Inconclusive);
}

TEST_CASE("descent check around the gradient gate") {
  const ProblemSpec problem = diagonal_quadratic(Vector::Ones(1));
  const PlrsSpec plrs = PlrsSpec::make(0.07, 0.1);
  const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};

  // Gate is sqrt(3 * 0.085 * 1 * 0.01) ~ 0.0505.
  Vector above(1);
  above[0] = 0.06;
  const auto ok = check_descent_large_gradient(problem, noise, plrs, above, 20000, 3);
  CHECK(ok.verdict == Verdict::Pass);
  CHECK(ok.bound_tested == doctest::Approx(-0.085 * 0.085 * 0.01 / 3.0).epsilon(1e-12));

  Vector below(1);
  below[0] = 0.05;
  const auto gated = check_descent_large_gradient(problem, noise, plrs, below, 20000, 3);
  CHECK(gated.verdict == Verdict::Inconclusive);

  // Zero noise: the bound degenerates to 0 and plain descent passes.
  Vector far(1);
  far[0] = 1.0;
  const auto noiseless =
      check_descent_large_gradient(problem, NoiseModel{}, plrs, far, 5000, 3);
  CHECK(noiseless.verdict == Verdict::Pass);
  CHECK(noiseless.bound_tested == 0.0);
  CHECK(noiseless.estimate < 0.0);

  // Rate too large for the declared beta: Inconclusive, never a silent pass.
  Vector eig(1);
  eig[0] = 20.0;
  const ProblemSpec stiff = diagonal_quadratic(eig);
  const auto oversized = check_descent_large_gradient(stiff, noise, plrs, far, 100, 3);
  CHECK(oversized.verdict == Verdict::Inconclusive);
}

TEST_CASE("descent check catches a misdeclared curvature") {
  Vector eig(1);
  eig[0] = 30.0;
  ProblemSpec lying = diagonal_quadratic(eig);
  lying.constants.beta = 1.0;
  const PlrsSpec plrs = PlrsSpec::make(0.07, 0.1);
  const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
  Vector x(1);
  x[0] = 1.0;
  const auto report = check_descent_large_gradient(lying, noise, plrs, x, 5000, 11);
  CHECK(report.verdict == Verdict::Fail);
}

TEST_CASE("saddle escape: noisy runs leave, noiseless runs stay") {
  Vector eig = Vector::Ones(10);
  eig[9] = -0.5;
  const ProblemSpec problem = quadratic(10, eig, 5);
  const PlrsSpec plrs = PlrsSpec::make(0.07, 0.1);
  const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};

  SaddleEscapeOptions options;
  const auto escaped =
      check_saddle_escape(problem, noise, plrs, Vector::Zero(10), 300, 100, 13, options);
  CHECK(escaped.verdict == Verdict::Pass);
  CHECK(escaped.estimate < 0.0);
  REQUIRE(escaped.aux.has_value());
  CHECK(*escaped.aux >= 0.9);

  const PlrsSpec degenerate = PlrsSpec::make(0.085, 0.085);
  const auto stuck = check_saddle_escape(problem, NoiseModel{}, degenerate,
                                         Vector::Zero(10), 300, 100, 13, options);
  CHECK(stuck.verdict == Verdict::Fail);
  CHECK(stuck.estimate == 0.0);
  CHECK(*stuck.aux == 0.0);

  // Horizon zero leaves f unchanged.
  const auto empty =
      check_saddle_escape(problem, noise, plrs, Vector::Zero(10), 0, 100, 13, options);
  CHECK(empty.estimate == 0.0);
  CHECK(empty.verdict == Verdict::Fail);

  // A non-saddle start is Inconclusive.
  const ProblemSpec bowl = diagonal_quadratic(Vector::Ones(3));
  const auto not_saddle =
      check_saddle_escape(bowl, noise, plrs, Vector::Zero(3), 300, 100, 13, options);
  CHECK(not_saddle.verdict == Verdict::Inconclusive);
}

TEST_CASE("confinement check and its negative controls") {
  const ProblemSpec problem = diagonal_quadratic(Vector::Ones(1));
  const PlrsSpec plrs = PlrsSpec::make(0.07, 0.1);
  const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
  const double rms = std::sqrt(stationary_second_moment(1.0, plrs, 0.01));

  ConfinementOptions options;
  const auto confined = check_confinement(problem, noise, plrs, Vector::Zero(1),
                                          3.0 * rms, 100, 200, 17, options);
  CHECK(confined.verdict == Verdict::Pass);

  const auto leaky = check_confinement(problem, noise, plrs, Vector::Zero(1), 0.5 * rms,
                                       100, 200, 17, options);
  CHECK(leaky.verdict == Verdict::Fail);

  Vector outside(1);
  outside[0] = 1.0;
  const auto bad_start = check_confinement(problem, noise, plrs, outside, 3.0 * rms, 100,
                                           200, 17, options);
  CHECK(bad_start.verdict == Verdict::Inconclusive);

  // Noise-free contraction keeps every trial inside.
  const PlrsSpec fixed = PlrsSpec::make(0.1, 0.1);
  Vector near(1);
  near[0] = 0.05;
  const auto contracted =
      check_confinement(problem, NoiseModel{}, fixed, near, 0.06, 50, 100, 17, options);
  CHECK(contracted.verdict == Verdict::Pass);
  CHECK(contracted.estimate == 1.0);
}

TEST_CASE("engine second moment matches the oracle") {
  const PlrsSpec plrs = PlrsSpec::make(0.07, 0.1);
  const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
  for (const std::uint64_t t : {1ull, 10ull, 100ull}) {
    const auto report = check_second_moment_match(1.0, plrs, noise, 0.0, t, 20000, 23);
    CHECK(report.verdict == Verdict::Pass);
  }
}

TEST_CASE("reports are reproducible and worker-count independent") {
  const ProblemSpec problem = diagonal_quadratic(Vector::Ones(2));
  const PlrsSpec plrs = PlrsSpec::make(0.07, 0.1);
  const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
  Vector x(2);
  x << 1.0, 0.0;

  CheckOptions one;
  one.jobs = 1;
  CheckOptions four;
  four.jobs = 4;
  const auto a = check_zero_mean(problem, make_noise_drawer(noise, 2), plrs, x, 20000, 5, one);
  const auto b = check_zero_mean(problem, make_noise_drawer(noise, 2), plrs, x, 20000, 5, four);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  CHECK(a.verdict == b.verdict);
}

TEST_CASE("default suite smoke run") {
  const auto rows = run_default_suite(2024, 0, 0.02);
  CHECK(rows.size() == 13);
  for (const auto& row : rows) {
    INFO(row.report.check, " expected ", to_string(row.expected), " got ",
         to_string(row.report.verdict));
    CHECK(row.ok);
  }
  const std::string csv = suite_to_csv(rows, "deadbeef", 2024);
  CHECK(csv.find("check,trials,estimate,std_error,bound,verdict,seed") != std::string::npos);
  CHECK(csv.find("zero_mean_biased_control") != std::string::npos);
  // Control rows report Pass when the violation was caught.
  CHECK(csv.find("Fail") == std::string::npos);
}
