#include "plrs/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plrs/error.hpp"

namespace plrs {
namespace {

void check(std::vector<std::string>& issues, bool ok, const std::string& msg) {
  if (!ok) issues.push_back(msg);
}

struct Validator {
  std::vector<std::string> issues;

  void operator()(const PlrsSpec& s) {
    check(issues, s.l_min > 0.0, "plrs: l_min must be > 0");
    check(issues, s.l_min <= s.l_max, "plrs: l_min must be <= l_max");
    check(issues, s.l_max < 1.0, "plrs: l_max must be < 1");
  }
  void operator()(const CosineWarmRestartsSpec& s) {
    check(issues, s.eta_min > 0.0, "cosine: eta_min must be > 0");
    check(issues, s.eta_max >= s.eta_min, "cosine: eta_max must be >= eta_min");
    check(issues, s.t0 > 0.0, "cosine: t0 must be > 0");
    check(issues, s.mult >= 1.0, "cosine: mult must be >= 1");
  }
  void operator()(const OneCycleSpec& s) {
    check(issues, s.base > 0.0, "onecycle: base must be > 0");
    check(issues, s.peak >= s.base, "onecycle: peak must be >= base");
    check(issues, s.up_frac > 0.0 && s.down_frac > 0.0,
          "onecycle: up_frac and down_frac must be > 0");
    check(issues, s.up_frac + s.down_frac <= 1.0,
          "onecycle: up_frac + down_frac must be <= 1");
    check(issues, s.final_div >= 1.0, "onecycle: final_div must be >= 1");
    check(issues, s.total_epochs > 0, "onecycle: total_epochs must be > 0");
  }
  void operator()(const KneeSpec& s) {
    check(issues, s.high > 0.0, "knee: high must be > 0");
    check(issues, s.explore_epochs < s.total_epochs,
          "knee: explore_epochs must be < total_epochs");
  }
  void operator()(const MultiStepSpec& s) {
    check(issues, s.base > 0.0, "multistep: base must be > 0");
    check(issues, s.factor > 0.0 && s.factor <= 1.0,
          "multistep: factor must be in (0, 1]");
    check(issues, std::is_sorted(s.milestones.begin(), s.milestones.end(),
                                 std::less_equal<std::uint64_t>()),
          "multistep: milestones must be strictly increasing");
  }
  void operator()(const ConstantSpec& s) {
    check(issues, s.rate > 0.0, "constant: rate must be > 0");
  }
};

double knee_rate(const KneeSpec& s, std::uint64_t epoch) {
  if (epoch < s.explore_epochs) return s.high;
  const double span = static_cast<double>(s.total_epochs - s.explore_epochs);
  const double left = static_cast<double>(s.total_epochs - epoch);
  return s.high * (left / span);
}

double one_cycle_final(const OneCycleSpec& s) {
  const double total = static_cast<double>(s.total_epochs);
  const double down_end = (s.up_frac + s.down_frac) * total;
  return down_end >= total ? s.base : s.peak / s.final_div;
}

double one_cycle_rate(const OneCycleSpec& s, double e) {
  const double total = static_cast<double>(s.total_epochs);
  const double up_end = s.up_frac * total;
  const double down_end = (s.up_frac + s.down_frac) * total;
  if (e < up_end) return std::lerp(s.base, s.peak, e / up_end);
  if (e < down_end) return std::lerp(s.peak, s.base, (e - up_end) / (down_end - up_end));
  if (down_end >= total) return s.base;
  return std::lerp(s.base, s.peak / s.final_div, (e - down_end) / (total - down_end));
}

double cosine_rate(const CosineWarmRestartsSpec& s, std::uint64_t epoch) {
  // Find the restart interval t0 * mult^i containing `epoch`. Constant
  // intervals admit a direct division; growing ones take a logarithmic walk.
  double interval = s.t0;
  double start = 0.0;
  const double e = static_cast<double>(epoch);
  if (s.mult == 1.0) {
    start = std::floor(e / s.t0) * s.t0;
  } else {
    while (e >= start + interval) {
      start += interval;
      interval *= s.mult;
    }
  }
  const double t_cur = e - start;
  const double c = 0.5 * (1.0 + std::cos(M_PI * t_cur / interval));
  return std::lerp(s.eta_min, s.eta_max, c);
}

double multi_step_rate(const MultiStepSpec& s, std::uint64_t epoch) {
  double rate = s.base;
  for (std::uint64_t m : s.milestones) {
    if (m <= epoch) rate *= s.factor;
  }
  return rate;
}

}  // namespace

PlrsSpec PlrsSpec::make(double l_min, double l_max, SamplingGranularity granularity) {
  PlrsSpec s{l_min, l_max, granularity};
  Validator validator;
  validator(s);
  if (!validator.issues.empty()) throw ConfigError(validator.issues);
  return s;
}

double eta_c(const PlrsSpec& spec) { return (spec.l_min + spec.l_max) / 2.0; }

double sample_plrs(const PlrsSpec& spec, RngStream& rng) {
  const double lr = spec.l_min + (spec.l_max - spec.l_min) * rng.next_u01();
  return std::min(std::max(lr, spec.l_min), spec.l_max);
}

CenterDecomposition decompose(double lr, const PlrsSpec& spec) {
  if (!(lr >= spec.l_min && lr <= spec.l_max)) {
    throw ContractViolation("decompose: rate " + std::to_string(lr) +
                            " outside [" + std::to_string(spec.l_min) + ", " +
                            std::to_string(spec.l_max) + "]");
  }
  const double c = eta_c(spec);
  // For l_max <= 3*l_min the subtraction is exact by Sterbenz and the
  // identity c + u == lr holds bit-for-bit. On wider intervals the offset is
  // quantized at ulp(u) > ulp(lr), so the best representable u is used; the
  // residual is below one ulp of the center rate.
  double u = lr - c;
  double best = u;
  double best_err = std::abs((c + u) - lr);
  for (int i = 0; i < 4 && best_err != 0.0; ++i) {
    u = std::nextafter(u, c + u < lr ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity());
    const double err = std::abs((c + u) - lr);
    if (err < best_err) {
      best = u;
      best_err = err;
    }
  }
  return {c, best};
}

ScheduleSpec::ScheduleSpec(Variant v) : v_(std::move(v)) {
  Validator validator;
  std::visit(validator, v_);
  if (!validator.issues.empty()) throw ConfigError(validator.issues);
}

std::string ScheduleSpec::kind() const {
  struct Kind {
    std::string operator()(const PlrsSpec&) const { return "plrs"; }
    std::string operator()(const CosineWarmRestartsSpec&) const { return "cosine"; }
    std::string operator()(const OneCycleSpec&) const { return "onecycle"; }
    std::string operator()(const KneeSpec&) const { return "knee"; }
    std::string operator()(const MultiStepSpec&) const { return "multistep"; }
    std::string operator()(const ConstantSpec&) const { return "constant"; }
  };
  return std::visit(Kind{}, v_);
}

RateSample lr_at(const ScheduleSpec& spec, std::uint64_t step, std::uint64_t epoch,
                 const RngStream& rng) {
  struct Eval {
    std::uint64_t step;
    std::uint64_t epoch;
    const RngStream& rng;

    RateSample operator()(const PlrsSpec& s) const {
      const std::uint64_t index =
          s.granularity == SamplingGranularity::PerStep ? step : epoch;
      const double lr = s.l_min + (s.l_max - s.l_min) * rng.u01_at(index);
      return {std::min(std::max(lr, s.l_min), s.l_max), false};
    }
    RateSample operator()(const CosineWarmRestartsSpec& s) const {
      return {cosine_rate(s, epoch), false};
    }
    RateSample operator()(const OneCycleSpec& s) const {
      if (epoch >= s.total_epochs) return {one_cycle_final(s), true};
      return {one_cycle_rate(s, static_cast<double>(epoch)), false};
    }
    RateSample operator()(const KneeSpec& s) const {
      // The last in-range epoch keeps the rate strictly positive.
      if (epoch >= s.total_epochs) return {knee_rate(s, s.total_epochs - 1), true};
      return {knee_rate(s, epoch), false};
    }
    RateSample operator()(const MultiStepSpec& s) const {
      return {multi_step_rate(s, epoch), false};
    }
    RateSample operator()(const ConstantSpec& s) const { return {s.rate, false}; }
  };
  return std::visit(Eval{step, epoch, rng}, spec.variant());
}

}  // namespace plrs
