#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plrs/noise.hpp"
#include "plrs/problem.hpp"
#include "plrs/schedule.hpp"

namespace plrs {

/// Experiment configuration: a sectioned key = value text format with `#`
/// comments. Unknown sections and keys are rejected; all violations are
/// reported together, each with its line number.
///
/// Sections: [problem], [noise], [schedule] (repeatable), [run], [output],
/// [range_test], [tensor], [verify]. Every field below documents its key.
struct ProblemSection {
  std::string kind = "quadratic";
  std::uint64_t dim = 1;
  std::vector<double> eigenvalues = {1.0};
  std::optional<std::uint64_t> rotation_seed;  ///< absent = axis-aligned
};

struct NoiseSection {
  std::string kind = "none";  ///< none | sphere | ball | minibatch
  double radius = 0.0;
  std::uint64_t components = 0;
  std::uint64_t batch = 1;
  std::uint64_t noise_seed = 0;
};

struct RunSection {
  std::uint64_t steps = 1000;
  std::uint64_t seed = 42;
  std::uint64_t trials = 1;
  std::uint64_t snapshot_stride = 0;  ///< 0 = auto
  std::uint64_t steps_per_epoch = 1;
  double divergence_bound = 1e12;
  std::vector<double> init;            ///< empty = origin
  std::optional<double> init_fill;     ///< constant-vector shorthand
  std::optional<double> f_threshold;   ///< for the steps-to-threshold summary
};

struct OutputSection {
  std::string directory = "out";
  std::string formats = "csv";
};

struct RangeTestSection {
  double rate_min = 0.005;
  double rate_max = 0.3;
  double rate_step = 0.01;
  std::uint64_t steps_per_rate = 30;
  double breakdown_factor = 2.0;
  double l_min_ratio = 0.7;
};

struct TensorSection {
  std::uint64_t dim = 10;
  std::optional<std::uint64_t> components;  ///< absent = dim
  std::uint64_t instance_seed = 1;
  std::string basis = "random";  ///< random | canonical
  double noise_scale = 0.01;
  std::uint64_t steps = 10000;
  std::string update = "simultaneous";  ///< simultaneous | cyclic
  std::uint64_t record_stride = 1;
};

struct VerifySection {
  double trial_scale = 1.0;
};

struct ExperimentConfig {
  ProblemSection problem;
  NoiseSection noise;
  std::vector<ScheduleSpec> schedules;
  RunSection run;
  OutputSection output;
  RangeTestSection range_test;
  TensorSection tensor;
  VerifySection verify;
};

/// Parses and validates; throws ConfigError listing every problem found.
ExperimentConfig parse_config(const std::string& text);

/// Canonical serialization: fixed section and key order, defaults
/// materialized, floats at 17 significant digits. parse(serialize(c)) then
/// serialize gives the identical text. [output] is excluded: it names where
/// artifacts land, not what the experiment is, so digests stay stable across
/// output locations.
std::string canonical_serialize(const ExperimentConfig& config);

/// SHA-256 hex digest of the canonical serialization.
std::string config_digest(const ExperimentConfig& config);

/// Instantiates the configured problem / noise model / starting point.
ProblemSpec make_problem(const ExperimentConfig& config);
NoiseModel make_noise(const ExperimentConfig& config);
Vector make_init(const ExperimentConfig& config);

}  // namespace plrs
