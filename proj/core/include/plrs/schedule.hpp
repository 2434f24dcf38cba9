#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "plrs/rng.hpp"

namespace plrs {

/// When the probabilistic schedule redraws its rate: every optimizer step,
/// or once per epoch (all steps of an epoch share one draw).
enum class SamplingGranularity { PerStep, PerEpoch };

/// Uniform random learning rate on [l_min, l_max].
struct PlrsSpec {
  double l_min = 0.0;
  double l_max = 0.0;
  SamplingGranularity granularity = SamplingGranularity::PerStep;

  /// Requires 0 < l_min <= l_max < 1 (equality gives the constant case).
  static PlrsSpec make(double l_min, double l_max,
                       SamplingGranularity granularity = SamplingGranularity::PerStep);
};

/// Center rate plus the zero-mean fluctuation around it: rate = eta_c + u.
struct CenterDecomposition {
  double eta_c = 0.0;
  double u = 0.0;
};

/// Center rate (l_min + l_max) / 2.
double eta_c(const PlrsSpec& spec);

/// One uniform draw from [l_min, l_max]; advances the stream.
double sample_plrs(const PlrsSpec& spec, RngStream& rng);

/// Splits an in-range rate into (eta_c, u). The identity eta_c + u == lr is
/// bit-exact whenever l_max <= 3 * l_min (every interval used in practice);
/// on wider intervals u is the best representable offset, with residual
/// below one ulp of eta_c. Throws ContractViolation when lr is outside
/// [l_min, l_max].
CenterDecomposition decompose(double lr, const PlrsSpec& spec);

/// Cosine annealing with warm restarts: interval t0, multiplied by `mult`
/// after each restart, annealing eta_max -> eta_min within each interval.
struct CosineWarmRestartsSpec {
  double eta_max = 0.0;
  double eta_min = 0.0;
  double t0 = 1.0;
  double mult = 2.0;
};

/// Single triangular rise/fall with a final decay phase. Piecewise linear
/// through (0, base), (up_frac*T, peak), ((up_frac+down_frac)*T, base),
/// (T, peak/final_div) where T = total_epochs.
struct OneCycleSpec {
  double base = 0.0;
  double peak = 0.0;
  double up_frac = 0.45;
  double down_frac = 0.45;
  double final_div = 10.0;
  std::uint64_t total_epochs = 0;
};

/// Constant "explore" rate, then linear decay towards zero at total_epochs.
struct KneeSpec {
  double high = 0.0;
  std::uint64_t explore_epochs = 0;
  std::uint64_t total_epochs = 0;
};

/// base * factor^k where k counts milestones at or below the epoch.
/// Milestones compound the factor cumulatively (the usual step-decay
/// convention), rather than setting absolute levels.
struct MultiStepSpec {
  double base = 0.0;
  std::vector<std::uint64_t> milestones;
  double factor = 0.1;
};

struct ConstantSpec {
  double rate = 0.0;
};

/// Any of the six schedules. Immutable once constructed; shareable across
/// threads.
class ScheduleSpec {
 public:
  using Variant = std::variant<PlrsSpec, CosineWarmRestartsSpec, OneCycleSpec,
                               KneeSpec, MultiStepSpec, ConstantSpec>;

  /// Validates the parameters; throws ConfigError listing every violation.
  explicit ScheduleSpec(Variant v);

  const Variant& variant() const { return v_; }
  bool is_plrs() const { return std::holds_alternative<PlrsSpec>(v_); }
  const PlrsSpec* plrs() const { return std::get_if<PlrsSpec>(&v_); }

  /// Short kind tag: plrs, cosine, onecycle, knee, multistep, constant.
  std::string kind() const;

 private:
  Variant v_;
};

/// Rate for one (step, epoch). `clamped` marks epochs past the end of a
/// finite schedule (knee, one-cycle), which freeze at their final rate.
struct RateSample {
  double rate = 0.0;
  bool clamped = false;
};

/// Evaluates the schedule. Deterministic branches are pure functions of the
/// epoch; the probabilistic branch addresses `rng` at the step (PerStep) or
/// epoch (PerEpoch) index, so the result is a pure function of
/// (spec, step, epoch, stream) and is independent of call order.
RateSample lr_at(const ScheduleSpec& spec, std::uint64_t step, std::uint64_t epoch,
                 const RngStream& rng);

}  // namespace plrs
