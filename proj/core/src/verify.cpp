#include "plrs/verify.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "plrs/csv.hpp"
#include "plrs/error.hpp"
#include "plrs/sgd.hpp"

namespace plrs {
namespace {

// Trials are processed in fixed-width chunks claimed by a worker pool and
// merged in chunk order, so the reduction does not depend on the worker
// count or completion order.
constexpr std::uint64_t kChunkWidth = 1024;

template <typename Accum, typename Fn>
std::vector<Accum> run_chunked(std::uint64_t trials, unsigned jobs, Fn&& fn) {
  const std::uint64_t num_chunks = (trials + kChunkWidth - 1) / kChunkWidth;
  std::vector<Accum> accums(num_chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  std::uint64_t workers = jobs != 0 ? jobs : std::thread::hardware_concurrency();
  workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, num_chunks));

  auto work = [&] {
    try {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= num_chunks) return;
        const std::uint64_t lo = c * kChunkWidth;
        const std::uint64_t hi = std::min(trials, lo + kChunkWidth);
        for (std::uint64_t t = lo; t < hi; ++t) fn(t, accums[c]);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return accums;
}

struct ScalarAccum {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t hits = 0;  // check-specific counter
};

struct MeanVar {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanVar reduce_scalar(const std::vector<ScalarAccum>& accums, std::uint64_t n) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& a : accums) {
    sum += a.sum;
    sum_sq += a.sum_sq;
  }
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  double var = 0.0;
  if (n > 1) var = std::max(0.0, (sum_sq - nd * mean * mean) / (nd - 1.0));
  return {mean, std::sqrt(var / nd)};
}

std::uint64_t reduce_hits(const std::vector<ScalarAccum>& accums) {
  std::uint64_t hits = 0;
  for (const auto& a : accums) hits += a.hits;
  return hits;
}

struct VectorAccum {
  Vector sum;
  Vector sum_sq;
  void add(const Vector& v) {
    if (sum.size() == 0) {
      sum = Vector::Zero(v.size());
      sum_sq = Vector::Zero(v.size());
    }
    sum += v;
    sum_sq += v.cwiseProduct(v);
  }
};

MonteCarloReport inconclusive(std::string check, std::uint64_t trials,
                              std::uint64_t seed, std::string why) {
  MonteCarloReport r;
  r.check = std::move(check);
  r.trials = trials;
  r.seed = seed;
  r.verdict = Verdict::Inconclusive;
  r.note = std::move(why);
  return r;
}

double center_rate(const PlrsSpec& plrs) { return (plrs.l_min + plrs.l_max) / 2.0; }

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

MonteCarloReport check_zero_mean(const ProblemSpec& problem, const NoiseDrawer& noise,
                                 const PlrsSpec& plrs, const Vector& x,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const CheckOptions& options) {
  if (trials < 1000) {
    return inconclusive("zero_mean", trials, seed, "needs at least 1000 trials");
  }
  const auto accums = run_chunked<VectorAccum>(
      trials, options.jobs, [&](std::uint64_t trial, VectorAccum& acc) {
        RngStream lr_rng = make_stream(seed, StreamPurpose::LearningRate, trial);
        RngStream noise_rng = make_stream(seed, StreamPurpose::GradientNoise, trial);
        const double lr = sample_plrs(plrs, lr_rng);
        const double u = decompose(lr, plrs).u;
        const Vector n = noise(noise_rng);
        acc.add(noise_term(x, problem, plrs, n, u));
      });

  Vector sum = Vector::Zero(x.size());
  Vector sum_sq = Vector::Zero(x.size());
  for (const auto& a : accums) {
    if (a.sum.size() != 0) {
      sum += a.sum;
      sum_sq += a.sum_sq;
    }
  }

  const double nd = static_cast<double>(trials);
  MonteCarloReport report;
  report.check = "zero_mean";
  report.trials = trials;
  report.seed = seed;
  report.bound_tested = 0.0;
  report.verdict = Verdict::Pass;

  double worst_margin = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double mean = sum[i] / nd;
    const double var = std::max(0.0, (sum_sq[i] - nd * mean * mean) / (nd - 1.0));
    const double se = std::sqrt(var / nd);
    const double margin = std::abs(mean) - options.k_std_errors * se;
    if (margin > 0.0) report.verdict = Verdict::Fail;
    if (margin > worst_margin) {
      worst_margin = margin;
      report.estimate = mean;
      report.std_error = se;
    }
  }
  return report;
}

MonteCarloReport check_descent_large_gradient(const ProblemSpec& problem,
                                              const NoiseModel& noise,
                                              const PlrsSpec& plrs, const Vector& x,
                                              std::uint64_t trials, std::uint64_t seed,
                                              const CheckOptions& options) {
  const std::string name = "descent_large_gradient";
  const double beta = problem.constants.beta;
  if (!(beta > 0.0)) return inconclusive(name, trials, seed, "beta not declared");
  if (!(plrs.l_max < 1.0 / beta)) {
    return inconclusive(name, trials, seed, "requires l_max < 1/beta");
  }
  const double sigma2 = noise.sigma2(problem.dim);
  const double eta = center_rate(plrs);
  const double gate = std::sqrt(3.0 * eta * beta * sigma2);
  const double grad_norm = problem.grad(x).norm();
  if (grad_norm < gate) {
    return inconclusive(name, trials, seed,
                        "gradient norm " + format_double(grad_norm) +
                            " below the gate " + format_double(gate));
  }
  if (trials < 2) return inconclusive(name, trials, seed, "needs at least 2 trials");

  const ScheduleSpec schedule{ScheduleSpec::Variant{plrs}};
  const NoiseDrawer drawer = make_noise_drawer(noise, problem.dim);
  const double f0 = problem.f(x);
  RunOptions run_options;

  const auto accums = run_chunked<ScalarAccum>(
      trials, options.jobs, [&](std::uint64_t trial, ScalarAccum& acc) {
        SgdState state{x, 0, make_stream(seed, StreamPurpose::LearningRate, trial),
                       make_stream(seed, StreamPurpose::GradientNoise, trial)};
        step(state, problem, drawer, schedule, run_options);
        const double delta_f = problem.f(state.x) - f0;
        acc.sum += delta_f;
        acc.sum_sq += delta_f * delta_f;
      });

  const MeanVar mv = reduce_scalar(accums, trials);
  MonteCarloReport report;
  report.check = name;
  report.trials = trials;
  report.seed = seed;
  report.estimate = mv.mean;
  report.std_error = mv.std_error;
  report.bound_tested = -beta * eta * eta * sigma2 / 3.0;
  report.verdict =
      mv.mean <= report.bound_tested + options.k_std_errors * mv.std_error
          ? Verdict::Pass
          : Verdict::Fail;
  return report;
}

MonteCarloReport check_saddle_escape(const ProblemSpec& problem, const NoiseModel& noise,
                                     const PlrsSpec& plrs, const Vector& x0,
                                     std::uint64_t horizon, std::uint64_t trials,
                                     std::uint64_t seed,
                                     const SaddleEscapeOptions& options) {
  const std::string name = "saddle_escape";
  const double gamma = problem.constants.gamma;
  if (!(gamma > 0.0)) {
    return inconclusive(name, trials, seed, "no declared negative curvature");
  }
  const double sigma2 = noise.sigma2(problem.dim);
  const double nu = std::sqrt(3.0 * center_rate(plrs) * problem.constants.beta * sigma2);
  // The declared gamma is often exactly the most negative eigenvalue; relax
  // the gate slightly so the solver's last-ulp error cannot flip the class.
  const Certificate cert = certify(problem, x0, nu, gamma * (1.0 - 1e-6));
  if (cert.cls != StationaryClass::SaddleCandidate) {
    return inconclusive(name, trials, seed, "start point is not a saddle candidate");
  }
  if (trials < 2) return inconclusive(name, trials, seed, "needs at least 2 trials");

  const ScheduleSpec schedule{ScheduleSpec::Variant{plrs}};
  const NoiseDrawer drawer = make_noise_drawer(noise, problem.dim);
  const double f0 = problem.f(x0);
  RunOptions run_options;

  const auto accums = run_chunked<ScalarAccum>(
      trials, options.jobs, [&](std::uint64_t trial, ScalarAccum& acc) {
        SgdState state{x0, 0, make_stream(seed, StreamPurpose::LearningRate, trial),
                       make_stream(seed, StreamPurpose::GradientNoise, trial)};
        for (std::uint64_t t = 0; t < horizon; ++t) {
          step(state, problem, drawer, schedule, run_options);
        }
        const double delta_f = problem.f(state.x) - f0;
        acc.sum += delta_f;
        acc.sum_sq += delta_f * delta_f;
        if (delta_f < -options.escape_margin) acc.hits += 1;
      });

  const MeanVar mv = reduce_scalar(accums, trials);
  const double frequency =
      static_cast<double>(reduce_hits(accums)) / static_cast<double>(trials);

  MonteCarloReport report;
  report.check = name;
  report.trials = trials;
  report.seed = seed;
  report.estimate = mv.mean;
  report.std_error = mv.std_error;
  report.bound_tested = 0.0;
  report.aux = frequency;
  report.aux_name = "escape_frequency";
  const bool mean_negative = mv.mean + options.k_std_errors * mv.std_error < 0.0;
  report.verdict = (mean_negative && frequency >= options.escape_floor)
                       ? Verdict::Pass
                       : Verdict::Fail;
  return report;
}

MonteCarloReport check_confinement(const ProblemSpec& problem, const NoiseModel& noise,
                                   const PlrsSpec& plrs, const Vector& x0, double delta,
                                   std::uint64_t horizon, std::uint64_t trials,
                                   std::uint64_t seed,
                                   const ConfinementOptions& options) {
  const std::string name = "confinement";
  if (!problem.minimizer.has_value()) {
    return inconclusive(name, trials, seed, "problem has no declared minimizer");
  }
  if (!(problem.constants.alpha > 0.0)) {
    return inconclusive(name, trials, seed, "alpha not declared");
  }
  const Vector& minimizer = *problem.minimizer;
  if (!((x0 - minimizer).norm() < delta)) {
    return inconclusive(name, trials, seed, "start point outside the delta ball");
  }
  if (trials < 2) return inconclusive(name, trials, seed, "needs at least 2 trials");

  const ScheduleSpec schedule{ScheduleSpec::Variant{plrs}};
  const NoiseDrawer drawer = make_noise_drawer(noise, problem.dim);
  RunOptions run_options;

  const auto accums = run_chunked<ScalarAccum>(
      trials, options.jobs, [&](std::uint64_t trial, ScalarAccum& acc) {
        SgdState state{x0, 0, make_stream(seed, StreamPurpose::LearningRate, trial),
                       make_stream(seed, StreamPurpose::GradientNoise, trial)};
        bool confined = true;
        for (std::uint64_t t = 0; t < horizon && confined; ++t) {
          step(state, problem, drawer, schedule, run_options);
          confined = (state.x - minimizer).norm() < delta;
        }
        if (confined) acc.hits += 1;
      });

  const double frequency =
      static_cast<double>(reduce_hits(accums)) / static_cast<double>(trials);
  const double nd = static_cast<double>(trials);
  const double se = std::sqrt(std::max(0.0, frequency * (1.0 - frequency)) / nd);

  MonteCarloReport report;
  report.check = name;
  report.trials = trials;
  report.seed = seed;
  report.estimate = frequency;
  report.std_error = se;
  report.bound_tested = 1.0 - options.xi_test;
  report.verdict = frequency + options.k_std_errors * se >= report.bound_tested
                       ? Verdict::Pass
                       : Verdict::Fail;
  return report;
}

MonteCarloReport check_second_moment_match(double alpha, const PlrsSpec& plrs,
                                           const NoiseModel& noise, double x0,
                                           std::uint64_t t, std::uint64_t trials,
                                           std::uint64_t seed,
                                           const CheckOptions& options) {
  const std::string name = "second_moment_match";
  if (trials < 2) return inconclusive(name, trials, seed, "needs at least 2 trials");
  if (t < 1) return inconclusive(name, trials, seed, "horizon must be >= 1");

  Vector eigenvalue(1);
  eigenvalue[0] = alpha;
  const ProblemSpec problem = diagonal_quadratic(eigenvalue);
  const ScheduleSpec schedule{ScheduleSpec::Variant{plrs}};
  const NoiseDrawer drawer = make_noise_drawer(noise, 1);
  Vector init(1);
  init[0] = x0;
  RunOptions run_options;

  const auto accums = run_chunked<ScalarAccum>(
      trials, options.jobs, [&](std::uint64_t trial, ScalarAccum& acc) {
        SgdState state{init, 0, make_stream(seed, StreamPurpose::LearningRate, trial),
                       make_stream(seed, StreamPurpose::GradientNoise, trial)};
        for (std::uint64_t i = 0; i < t; ++i) {
          step(state, problem, drawer, schedule, run_options);
        }
        const double sq = state.x[0] * state.x[0];
        acc.sum += sq;
        acc.sum_sq += sq * sq;
      });

  const MeanVar mv = reduce_scalar(accums, trials);
  MonteCarloReport report;
  report.check = name;
  report.trials = trials;
  report.seed = seed;
  report.estimate = mv.mean;
  report.std_error = mv.std_error;
  report.bound_tested = scalar_moment_oracle(alpha, plrs, noise.sigma2(1), x0, t);
  report.verdict = std::abs(mv.mean - report.bound_tested) <=
                           options.k_std_errors * mv.std_error
                       ? Verdict::Pass
                       : Verdict::Fail;
  return report;
}

double scalar_moment_oracle(double alpha, const PlrsSpec& plrs, double sigma2_noise,
                            double x0, std::uint64_t t) {
  const double center = (plrs.l_min + plrs.l_max) / 2.0;
  const double spread = plrs.l_max - plrs.l_min;
  const double second_moment = center * center + spread * spread / 12.0;
  const double contraction = 1.0 - 2.0 * alpha * center + alpha * alpha * second_moment;
  if (contraction >= 1.0) {
    throw ContractViolation("scalar_moment_oracle: non-contracting rate for alpha " +
                            std::to_string(alpha));
  }
  double m = x0 * x0;
  for (std::uint64_t i = 0; i < t; ++i) {
    m = contraction * m + second_moment * sigma2_noise;
  }
  return m;
}

double stationary_second_moment(double alpha, const PlrsSpec& plrs, double sigma2_noise) {
  const double center = (plrs.l_min + plrs.l_max) / 2.0;
  const double spread = plrs.l_max - plrs.l_min;
  const double second_moment = center * center + spread * spread / 12.0;
  const double contraction = 1.0 - 2.0 * alpha * center + alpha * alpha * second_moment;
  if (contraction >= 1.0) {
    throw ContractViolation("stationary_second_moment: non-contracting rate for alpha " +
                            std::to_string(alpha));
  }
  return second_moment * sigma2_noise / (1.0 - contraction);
}

NoiseDrawer biased_drawer(NoiseDrawer base, const Vector& offset) {
  return [base = std::move(base), offset](RngStream& rng) {
    return Vector(base(rng) + offset);
  };
}

namespace {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return RngStream(master, stream_id(StreamPurpose::Misc, 1000 + index)).u64_at(0);
}

std::uint64_t scaled(double base, double scale, std::uint64_t floor) {
  return std::max(floor, static_cast<std::uint64_t>(base * scale));
}

}  // namespace

std::vector<SuiteRow> run_default_suite(std::uint64_t seed, unsigned jobs,
                                        double trial_scale) {
  std::vector<SuiteRow> rows;
  CheckOptions opt;
  opt.jobs = jobs;
  std::uint64_t entry = 0;
  auto next_seed = [&] { return derive_seed(seed, entry++); };
  auto push = [&rows](MonteCarloReport report, const std::string& name,
                      Verdict expected) {
    report.check = name;
    SuiteRow row;
    row.expected = expected;
    row.ok = report.verdict == expected;
    row.report = std::move(report);
    rows.push_back(std::move(row));
  };

  const PlrsSpec plrs_wide = PlrsSpec::make(0.07, 0.1);
  const PlrsSpec plrs_narrow = PlrsSpec::make(0.007, 0.01);

  // Zero-mean update noise, three model combinations.
  {
    const ProblemSpec problem = diagonal_quadratic(Vector::Ones(5));
    Vector x = Vector::Zero(5);
    x[0] = 1.0;  // grad = (1, 0, 0, 0, 0)
    const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
    push(check_zero_mean(problem, make_noise_drawer(noise, 5), plrs_wide, x,
                         scaled(1e5, trial_scale, 2000), next_seed(), opt),
         "zero_mean_identity_sphere", Verdict::Pass);
  }
  {
    Vector eig = Vector::Ones(10);
    eig[9] = -0.5;
    const ProblemSpec problem = quadratic(10, eig, 7);
    Vector x = Vector::Constant(10, 0.3);
    const NoiseModel noise{NoiseModel::Variant{BallUniformNoise{0.5}}};
    push(check_zero_mean(problem, make_noise_drawer(noise, 10), plrs_narrow, x,
                         scaled(1e5, trial_scale, 2000), next_seed(), opt),
         "zero_mean_saddle_ball", Verdict::Pass);
  }
  {
    Vector eig(8);
    for (int i = 0; i < 8; ++i) eig[i] = 0.5 + 0.25 * i;
    const ProblemSpec problem = quadratic(8, eig, 11);
    Vector x = Vector::Constant(8, -0.2);
    const NoiseModel noise{
        NoiseModel::Variant{FiniteSumMinibatchNoise{32, 4, 0.2, 21}}};
    push(check_zero_mean(problem, make_noise_drawer(noise, 8), plrs_wide, x,
                         scaled(1e5, trial_scale, 2000), next_seed(), opt),
         "zero_mean_rotated_minibatch", Verdict::Pass);
  }
  {
    // Negative control: constant bias on one coordinate must be caught. The
    // bias sits on the zero-gradient coordinate, where the rate fluctuation
    // adds no variance, so it is detectable even at reduced trial counts.
    const ProblemSpec problem = diagonal_quadratic(Vector::Ones(2));
    Vector x(2);
    x << 1.0, 0.0;
    const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
    Vector offset = Vector::Zero(2);
    offset[1] = 0.01;
    push(check_zero_mean(problem, biased_drawer(make_noise_drawer(noise, 2), offset),
                         plrs_wide, x, scaled(1e5, trial_scale, 2000), next_seed(), opt),
         "zero_mean_biased_control", Verdict::Fail);
  }

  // One-step descent at a large-gradient point.
  {
    const ProblemSpec problem = diagonal_quadratic(Vector::Ones(1));
    Vector x(1);
    x[0] = 1.0;
    const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
    push(check_descent_large_gradient(problem, noise, plrs_wide, x,
                                      scaled(1e5, trial_scale, 2000), next_seed(), opt),
         "descent_unit_beta", Verdict::Pass);
  }
  {
    const ProblemSpec problem = diagonal_quadratic(Vector::Ones(1));
    Vector x(1);
    x[0] = 1.0;
    push(check_descent_large_gradient(problem, NoiseModel{}, plrs_wide, x,
                                      scaled(1e4, trial_scale, 2000), next_seed(), opt),
         "descent_zero_noise", Verdict::Pass);
  }
  {
    // Gradient below the gate must come back Inconclusive, never Pass.
    const ProblemSpec problem = diagonal_quadratic(Vector::Ones(1));
    Vector x(1);
    x[0] = 0.01;
    const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
    push(check_descent_large_gradient(problem, noise, plrs_wide, x,
                                      scaled(1e4, trial_scale, 2000), next_seed(), opt),
         "descent_gate_inconclusive", Verdict::Inconclusive);
  }
  {
    // Negative control: the rate is oversized for the true curvature (the
    // declared beta understates it), so the declared bound must fail.
    Vector eig(1);
    eig[0] = 30.0;
    ProblemSpec problem = diagonal_quadratic(eig);
    problem.constants.beta = 1.0;
    Vector x(1);
    x[0] = 1.0;
    const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
    push(check_descent_large_gradient(problem, noise, plrs_wide, x,
                                      scaled(1e4, trial_scale, 2000), next_seed(), opt),
         "descent_oversized_lr_control", Verdict::Fail);
  }

  // Saddle escape.
  {
    Vector eig = Vector::Ones(10);
    eig[9] = -0.5;
    const ProblemSpec problem = quadratic(10, eig, 5);
    const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
    SaddleEscapeOptions esc;
    static_cast<CheckOptions&>(esc) = opt;
    push(check_saddle_escape(problem, noise, plrs_wide, Vector::Zero(10), 500,
                             scaled(200, trial_scale, 100), next_seed(), esc),
         "saddle_escape_default", Verdict::Pass);
  }
  {
    // Without noise the saddle is a fixed point: no escape.
    Vector eig = Vector::Ones(10);
    eig[9] = -0.5;
    const ProblemSpec problem = quadratic(10, eig, 5);
    const PlrsSpec degenerate = PlrsSpec::make(0.085, 0.085);
    SaddleEscapeOptions esc;
    static_cast<CheckOptions&>(esc) = opt;
    push(check_saddle_escape(problem, NoiseModel{}, degenerate, Vector::Zero(10), 500,
                             scaled(200, trial_scale, 100), next_seed(), esc),
         "saddle_escape_zero_noise_control", Verdict::Fail);
  }

  // Confinement near a strongly convex minimum.
  {
    const ProblemSpec problem = diagonal_quadratic(Vector::Ones(1));
    const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
    const double rms = std::sqrt(stationary_second_moment(1.0, plrs_wide, 0.01));
    ConfinementOptions conf;
    static_cast<CheckOptions&>(conf) = opt;
    push(check_confinement(problem, noise, plrs_wide, Vector::Zero(1), 3.0 * rms, 100,
                           scaled(400, trial_scale, 100), next_seed(), conf),
         "confinement_default", Verdict::Pass);
    push(check_confinement(problem, noise, plrs_wide, Vector::Zero(1), 0.5 * rms, 100,
                           scaled(400, trial_scale, 100), next_seed(), conf),
         "confinement_tight_delta_control", Verdict::Fail);
  }

  // Engine second moment against the closed-form recursion.
  {
    const NoiseModel noise{NoiseModel::Variant{SphereUniformNoise{0.1}}};
    push(check_second_moment_match(1.0, plrs_wide, noise, 0.0, 100,
                                   scaled(2e4, trial_scale, 2000), next_seed(), opt),
         "second_moment_match_t100", Verdict::Pass);
  }

  return rows;
}

std::string suite_to_csv(const std::vector<SuiteRow>& rows,
                         const std::string& config_digest, std::uint64_t seed) {
  std::ostringstream out;
  write_csv_preamble(out, config_digest, seed);
  out << "check,trials,estimate,std_error,bound,verdict,seed\n";
  for (const auto& row : rows) {
    const bool control = row.expected != Verdict::Pass;
    // Control rows report whether the expected violation was detected.
    const std::string verdict =
        control ? (row.ok ? "Pass" : "Fail") : to_string(row.report.verdict);
    out << row.report.check << ',' << row.report.trials << ','
        << format_double(row.report.estimate) << ','
        << format_double(row.report.std_error) << ','
        << format_double(row.report.bound_tested) << ',' << verdict << ','
        << row.report.seed << '\n';
  }
  return out.str();
}

}  // namespace plrs
