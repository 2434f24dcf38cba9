#include "plrs/range_test.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "plrs/csv.hpp"
#include "plrs/error.hpp"
#include "plrs/schedule.hpp"
#include "plrs/sgd.hpp"

namespace plrs {

RangeTestResult run_range_test(const ProblemSpec& problem, const NoiseModel& noise,
                               const std::vector<double>& rate_grid, const Vector& init,
                               const RangeTestOptions& options) {
  if (rate_grid.size() < 3) {
    throw ContractViolation("range test: need at least 3 grid rates");
  }
  for (std::size_t i = 0; i < rate_grid.size(); ++i) {
    if (!(rate_grid[i] > 0.0)) throw ContractViolation("range test: rates must be > 0");
    if (i > 0 && !(rate_grid[i] > rate_grid[i - 1])) {
      throw ContractViolation("range test: rates must be strictly increasing");
    }
  }
  if (options.steps_per_rate < 1) {
    throw ContractViolation("range test: steps_per_rate must be >= 1");
  }

  RangeTestResult result;
  result.initial_loss = problem.f(init);
  result.sweep.resize(rate_grid.size());

  // Per-rate runs are independent (disjoint streams, indexed slots), so they
  // fan out over workers without affecting the result.
  const auto probe_rate = [&](std::size_t i) {
    const double rate = rate_grid[i];
    RateProbe probe;
    probe.rate = rate;
    RunOptions run_options;
    run_options.steps = options.steps_per_rate;
    run_options.seed = options.seed;
    run_options.trial = i;  // disjoint streams per rate
    run_options.snapshot_stride = options.steps_per_rate + 1;
    run_options.divergence_bound = options.divergence_bound;
    try {
      const ScheduleSpec schedule{ScheduleSpec::Variant{ConstantSpec{rate}}};
      const Trajectory trajectory = run(problem, noise, schedule, init, run_options);
      probe.final_loss = trajectory.final_f;
      probe.diverged = !std::isfinite(probe.final_loss);
    } catch (const NumericError&) {
      probe.final_loss = std::numeric_limits<double>::infinity();
      probe.diverged = true;
    }
    result.sweep[i] = probe;
  };

  std::size_t workers = options.jobs != 0 ? options.jobs : std::thread::hardware_concurrency();
  workers = std::max<std::size_t>(1, std::min(workers, rate_grid.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    try {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= rate_grid.size()) return;
        probe_rate(i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& thread : pool) thread.join();
  if (first_error) std::rethrow_exception(first_error);

  const double threshold = options.breakdown_factor * result.initial_loss;
  std::size_t breakdown_index = result.sweep.size();
  for (std::size_t i = 0; i < result.sweep.size(); ++i) {
    const auto& probe = result.sweep[i];
    if (probe.diverged || !(probe.final_loss <= threshold)) {
      breakdown_index = i;
      break;
    }
  }

  if (breakdown_index == result.sweep.size()) {
    result.no_breakdown = true;
    result.suggested_l_max = rate_grid.back();
    result.suggested_l_min = options.l_min_ratio * rate_grid.back();
  } else if (breakdown_index == 0) {
    result.breakdown_rate = rate_grid.front();
    result.unusable = true;
  } else {
    result.breakdown_rate = rate_grid[breakdown_index];
    result.suggested_l_max = rate_grid[breakdown_index - 1];
    result.suggested_l_min = options.l_min_ratio * rate_grid[breakdown_index - 1];
  }
  return result;
}

void write_range_test_csv(const RangeTestResult& result, std::ostream& out) {
  out << "rate,final_loss,diverged\n";
  for (const auto& probe : result.sweep) {
    out << format_double(probe.rate) << ',' << format_double(probe.final_loss) << ','
        << (probe.diverged ? 1 : 0) << '\n';
  }
}

}  // namespace plrs
