#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plrs/noise.hpp"
#include "plrs/problem.hpp"
#include "plrs/schedule.hpp"

namespace plrs {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

/// Outcome of one Monte-Carlo check. Reproducible bit-for-bit from the
/// check's inputs and seed: trials are chunked at a fixed width and reduced
/// in chunk order regardless of the worker count.
struct MonteCarloReport {
  std::string check;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double bound_tested = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::uint64_t seed = 0;
  std::string note;                ///< explanation for Inconclusive, context otherwise
  std::optional<double> aux;       ///< check-specific secondary statistic
  std::string aux_name;
};

struct CheckOptions {
  double k_std_errors = 4.0;  ///< acceptance band half-width in standard errors
  unsigned jobs = 0;          ///< 0 = hardware concurrency
};

/// Mean of the update noise w at a fixed point, per coordinate, against 0
/// with a k-standard-error band. Pass requires every coordinate inside its
/// band. The reported estimate/std_error belong to the worst coordinate.
MonteCarloReport check_zero_mean(const ProblemSpec& problem, const NoiseDrawer& noise,
                                 const PlrsSpec& plrs, const Vector& x,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const CheckOptions& options = {});

/// One-step expected descent at a large-gradient point, against the bound
/// -beta * eta_c^2 * sigma^2 / 3. Preconditions (gradient above the
/// sqrt(3 eta_c beta sigma^2) gate, l_max < 1/beta) yield Inconclusive when
/// violated, never a silent Pass.
MonteCarloReport check_descent_large_gradient(const ProblemSpec& problem,
                                              const NoiseModel& noise,
                                              const PlrsSpec& plrs, const Vector& x,
                                              std::uint64_t trials, std::uint64_t seed,
                                              const CheckOptions& options = {});

struct SaddleEscapeOptions : CheckOptions {
  double escape_margin = 1.0;  ///< f must drop below f(x0) - margin to count
  double escape_floor = 0.9;   ///< required fraction of escaping trials
};

/// f(x_T) - f(x_0) from a saddle start: Pass when the mean is negative
/// beyond k standard errors and the escape frequency reaches the floor.
/// Only the sign and high-probability shape of the statement is tested.
MonteCarloReport check_saddle_escape(const ProblemSpec& problem, const NoiseModel& noise,
                                     const PlrsSpec& plrs, const Vector& x0,
                                     std::uint64_t horizon, std::uint64_t trials,
                                     std::uint64_t seed,
                                     const SaddleEscapeOptions& options = {});

struct ConfinementOptions : CheckOptions {
  double xi_test = 0.05;  ///< tolerated escape probability
};

/// Fraction of trials whose iterates stay within delta of the minimizer for
/// the whole horizon; compared against 1 - xi_test with binomial error.
MonteCarloReport check_confinement(const ProblemSpec& problem, const NoiseModel& noise,
                                   const PlrsSpec& plrs, const Vector& x0, double delta,
                                   std::uint64_t horizon, std::uint64_t trials,
                                   std::uint64_t seed,
                                   const ConfinementOptions& options = {});

/// Monte-Carlo E[x_t^2] on the scalar quadratic against the closed-form
/// recursion oracle, within k standard errors.
MonteCarloReport check_second_moment_match(double alpha, const PlrsSpec& plrs,
                                           const NoiseModel& noise, double x0,
                                           std::uint64_t t, std::uint64_t trials,
                                           std::uint64_t seed,
                                           const CheckOptions& options = {});

/// Exact E[x_t^2] for f = alpha x^2 / 2 under the probabilistic rate and
/// independent zero-mean noise of variance sigma2_noise:
///   m_{t+1} = E[(1 - eta alpha)^2] m_t + E[eta^2] sigma2_noise,  m_0 = x0^2.
/// Closed form only; shares no code with the SGD engine. Throws
/// ContractViolation when E[(1 - eta alpha)^2] >= 1 (non-contracting rate).
double scalar_moment_oracle(double alpha, const PlrsSpec& plrs, double sigma2_noise,
                            double x0, std::uint64_t t);

/// Fixed point of the same recursion: E[eta^2] sigma2 / (1 - E[(1-eta alpha)^2]).
double stationary_second_moment(double alpha, const PlrsSpec& plrs, double sigma2_noise);

/// Wraps a drawer with a constant offset; the deliberately broken source
/// behind the shipped negative control.
NoiseDrawer biased_drawer(NoiseDrawer base, const Vector& offset);

/// One row of the shipped verification suite. For negative controls the
/// expected raw verdict is Fail (or Inconclusive); `ok` says whether the
/// observed raw verdict matched the expectation.
struct SuiteRow {
  MonteCarloReport report;
  Verdict expected = Verdict::Pass;
  bool ok = false;
};

/// The default check suite: the descent, escape and confinement checks, the
/// zero-mean check on three model combinations, the moment-recursion
/// cross-check, and one negative control per check. `trial_scale` scales
/// every trial count.
std::vector<SuiteRow> run_default_suite(std::uint64_t seed, unsigned jobs = 0,
                                        double trial_scale = 1.0);

/// CSV rows `check,trials,estimate,std_error,bound,verdict,seed`. Control
/// rows report Pass when the expected violation was detected.
std::string suite_to_csv(const std::vector<SuiteRow>& rows,
                         const std::string& config_digest, std::uint64_t seed);

}  // namespace plrs
