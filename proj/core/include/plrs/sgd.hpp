#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plrs/noise.hpp"
#include "plrs/problem.hpp"
#include "plrs/rng.hpp"
#include "plrs/schedule.hpp"

namespace plrs {

/// Iterate, step index and the two random streams owned by one run: the
/// rate stream (addressed per step/epoch) and the noise stream (sequential).
struct SgdState {
  Vector x;
  std::uint64_t step = 0;
  RngStream lr_stream;
  RngStream noise_stream;
};

struct StepRecord {
  std::uint64_t step = 0;
  double lr = 0.0;
  double f_value = 0.0;     ///< f at the pre-update iterate
  double grad_norm = 0.0;   ///< gradient norm at the pre-update iterate
  bool lr_clamped = false;  ///< schedule evaluated past its final epoch
  std::optional<Vector> x_snapshot;
};

struct Trajectory {
  std::vector<StepRecord> records;
  std::string config_digest;
  std::uint64_t seed = 0;
  Vector final_x;
  double final_f = 0.0;
  std::vector<std::string> warnings;
};

struct RunOptions {
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;               ///< selects the stream pair under `seed`
  std::uint64_t steps_per_epoch = 1;     ///< epoch = step / steps_per_epoch
  std::uint64_t snapshot_stride = 0;     ///< 0 = every step for d <= 100, else every 100
  double divergence_bound = 1e12;        ///< abort when ||x|| exceeds this
  std::string config_digest;
};

/// One SGD update through the center/fluctuation split: the iterate moves by
/// -(eta_c * grad f + w) where w combines gradient noise and the rate
/// fluctuation. Mutates `state`, returns the record of the executed step.
/// Throws NumericError on a non-finite gradient or iterate.
StepRecord step(SgdState& state, const ProblemSpec& problem, const NoiseDrawer& noise,
                const ScheduleSpec& schedule, const RunOptions& options);

/// The update noise w for given realizations (gradient noise draw, rate
/// fluctuation u). Shares its arithmetic with `step`, so
/// x_next == x - eta_c * grad f(x) - w holds exactly for the executed step.
Vector noise_term(const Vector& x, const ProblemSpec& problem, const PlrsSpec& plrs,
                  const Vector& grad_noise, double u);

/// Runs `options.steps` updates from `init`. Pure function of its inputs:
/// identical arguments give bit-identical trajectories.
Trajectory run(const ProblemSpec& problem, const NoiseModel& noise,
               const ScheduleSpec& schedule, const Vector& init,
               const RunOptions& options);

/// CSV rows `step,lr,f,grad_norm[,x0..xk]` with 17 significant digits.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);

namespace detail {

/// w_i for one coordinate; `g` is the stochastic gradient, `gf` the exact
/// one. Kept in one place so `step` and `noise_term` round identically.
inline double noise_component(double eta_c, double u, double g, double gf) {
  return (eta_c * g - eta_c * gf) + u * g;
}

}  // namespace detail

}  // namespace plrs
