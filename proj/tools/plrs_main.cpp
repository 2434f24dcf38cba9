// plrs: probabilistic learning-rate scheduling experiments.
//
// Subcommands: run, verify, range-test, tensor, schedule-dump. Every
// artifact is a CSV stamped with the config digest, seed and tool version;
// identical config + seed reproduce identical bytes.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "plrs/config.hpp"
#include "plrs/csv.hpp"
#include "plrs/error.hpp"
#include "plrs/range_test.hpp"
#include "plrs/sgd.hpp"
#include "plrs/tensor.hpp"
#include "plrs/verify.hpp"
#include "plrs/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  unsigned jobs = 0;
};

plrs::ExperimentConfig load_config(const CommonArgs& args) {
  plrs::ExperimentConfig config;
  if (args.config_path.empty()) {
    config = plrs::parse_config("");
  } else {
    std::ifstream in(args.config_path);
    if (!in) throw plrs::Error("cannot read config file " + args.config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    config = plrs::parse_config(buffer.str());
  }
  if (args.seed_override.has_value()) config.run.seed = *args.seed_override;
  if (args.out_override.has_value()) config.output.directory = *args.out_override;
  return config;
}

fs::path prepare_output_dir(const plrs::ExperimentConfig& config) {
  const fs::path dir = config.output.directory;
  fs::create_directories(dir);
  return dir;
}

std::string timestamp_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

int cmd_run(const CommonArgs& args) {
  const plrs::ExperimentConfig config = load_config(args);
  if (config.schedules.empty()) {
    throw plrs::ConfigError("run requires at least one [schedule] section");
  }
  const std::string digest = plrs::config_digest(config);
  const fs::path dir = prepare_output_dir(config);
  const plrs::ProblemSpec problem = plrs::make_problem(config);
  const plrs::NoiseModel noise = plrs::make_noise(config);
  const plrs::Vector init = plrs::make_init(config);

  for (std::size_t i = 0; i < config.schedules.size(); ++i) {
    const auto& schedule = config.schedules[i];
    for (std::uint64_t trial = 0; trial < config.run.trials; ++trial) {
      const auto started = std::chrono::system_clock::now();
      plrs::RunOptions options;
      options.steps = config.run.steps;
      options.seed = config.run.seed;
      options.trial = trial;
      options.steps_per_epoch = config.run.steps_per_epoch;
      options.snapshot_stride = config.run.snapshot_stride;
      options.divergence_bound = config.run.divergence_bound;
      options.config_digest = digest;
      const plrs::Trajectory trajectory =
          plrs::run(problem, noise, schedule, init, options);
      for (const auto& warning : trajectory.warnings) {
        std::cerr << "warning: " << warning << '\n';
      }

      std::string base = "run_" + std::to_string(i) + "_" + schedule.kind();
      if (config.run.trials > 1) base += "_t" + std::to_string(trial);
      std::ostringstream csv;
      plrs::write_csv_preamble(csv, digest, config.run.seed);
      plrs::write_trajectory_csv(trajectory, csv);
      plrs::write_file_atomic(dir / (base + ".csv"), csv.str());

      // Summary fields are derived from the CSV rows only, so they can be
      // recomputed from the artifact byte-for-byte.
      double min_f = trajectory.records.front().f_value;
      std::int64_t steps_to_threshold = -1;
      for (const auto& record : trajectory.records) {
        min_f = std::min(min_f, record.f_value);
        if (steps_to_threshold < 0 && config.run.f_threshold.has_value() &&
            record.f_value <= *config.run.f_threshold) {
          steps_to_threshold = static_cast<std::int64_t>(record.step);
        }
      }
      json record;
      record["config_digest"] = digest;
      record["seed"] = config.run.seed;
      record["trial"] = trial;
      record["started_at"] = timestamp_utc(started);
      record["finished_at"] = timestamp_utc(std::chrono::system_clock::now());
      record["csv_path"] = (dir / (base + ".csv")).string();
      record["summary"]["final_f"] = trajectory.records.back().f_value;
      record["summary"]["min_f"] = min_f;
      record["summary"]["steps_to_threshold"] = steps_to_threshold;
      plrs::write_file_atomic(dir / (base + ".json"), record.dump(2) + "\n");
    }
  }
  return kExitOk;
}

int cmd_verify(const CommonArgs& args) {
  const plrs::ExperimentConfig config = load_config(args);
  const std::string digest = plrs::config_digest(config);
  const fs::path dir = prepare_output_dir(config);

  const auto rows =
      plrs::run_default_suite(config.run.seed, args.jobs, config.verify.trial_scale);
  plrs::write_file_atomic(dir / "verify.csv",
                          plrs::suite_to_csv(rows, digest, config.run.seed));

  bool any_fail = false;
  bool any_inconclusive = false;
  for (const auto& row : rows) {
    const bool control = row.expected != plrs::Verdict::Pass;
    const std::string shown =
        control ? (row.ok ? "Pass" : "Fail") : plrs::to_string(row.report.verdict);
    std::cout << row.report.check << ": " << shown;
    if (!row.report.note.empty()) std::cout << " (" << row.report.note << ")";
    std::cout << '\n';
    if (!row.ok) {
      if (row.report.verdict == plrs::Verdict::Inconclusive) any_inconclusive = true;
      else any_fail = true;
    }
  }
  if (any_fail) return kExitFail;
  if (any_inconclusive) return kExitInconclusive;
  return kExitOk;
}

int cmd_range_test(const CommonArgs& args) {
  const plrs::ExperimentConfig config = load_config(args);
  const std::string digest = plrs::config_digest(config);
  const fs::path dir = prepare_output_dir(config);
  const plrs::ProblemSpec problem = plrs::make_problem(config);
  const plrs::NoiseModel noise = plrs::make_noise(config);
  const plrs::Vector init = plrs::make_init(config);

  std::vector<double> grid;
  for (double r = config.range_test.rate_min; r <= config.range_test.rate_max + 1e-12;
       r += config.range_test.rate_step) {
    grid.push_back(r);
  }
  plrs::RangeTestOptions options;
  options.steps_per_rate = config.range_test.steps_per_rate;
  options.seed = config.run.seed;
  options.breakdown_factor = config.range_test.breakdown_factor;
  options.l_min_ratio = config.range_test.l_min_ratio;
  options.divergence_bound = config.run.divergence_bound;
  options.jobs = args.jobs;
  const plrs::RangeTestResult result =
      plrs::run_range_test(problem, noise, grid, init, options);

  std::ostringstream csv;
  plrs::write_csv_preamble(csv, digest, config.run.seed);
  plrs::write_range_test_csv(result, csv);
  plrs::write_file_atomic(dir / "range_test.csv", csv.str());

  if (result.unusable) {
    std::cout << "breakdown at the first grid rate; no usable suggestion\n";
  } else if (result.no_breakdown) {
    std::cout << "no breakdown detected; suggested l_max = "
              << plrs::format_double(*result.suggested_l_max) << " (largest grid rate)\n";
  } else {
    std::cout << "breakdown at " << plrs::format_double(*result.breakdown_rate)
              << "; suggested l_min = " << plrs::format_double(*result.suggested_l_min)
              << ", l_max = " << plrs::format_double(*result.suggested_l_max) << '\n';
  }
  return kExitOk;
}

int cmd_tensor(const CommonArgs& args) {
  const plrs::ExperimentConfig config = load_config(args);
  if (config.schedules.empty()) {
    throw plrs::ConfigError("tensor requires at least one [schedule] section");
  }
  const std::string digest = plrs::config_digest(config);
  const fs::path dir = prepare_output_dir(config);

  const auto dim = static_cast<Eigen::Index>(config.tensor.dim);
  const auto count = config.tensor.components.has_value()
                         ? static_cast<Eigen::Index>(*config.tensor.components)
                         : dim;
  const plrs::tensor::OrthoTensorInstance instance =
      config.tensor.basis == "canonical"
          ? plrs::tensor::canonical_instance(dim, count)
          : plrs::tensor::random_instance(dim, config.tensor.instance_seed, count);

  for (std::size_t i = 0; i < config.schedules.size(); ++i) {
    const auto& schedule = config.schedules[i];
    plrs::tensor::DecompositionOptions options;
    options.steps = config.tensor.steps;
    options.seed = config.run.seed;
    options.noise_scale = config.tensor.noise_scale;
    options.order = config.tensor.update == "cyclic"
                        ? plrs::tensor::UpdateOrder::Cyclic
                        : plrs::tensor::UpdateOrder::Simultaneous;
    options.divergence_bound = config.run.divergence_bound;
    options.record_stride = config.tensor.record_stride;
    const plrs::tensor::ErrorTrace trace =
        plrs::tensor::run_decomposition(instance, schedule, options);

    std::ostringstream csv;
    plrs::write_csv_preamble(csv, digest, config.run.seed);
    plrs::tensor::write_trace_csv(trace, csv);
    plrs::write_file_atomic(
        dir / ("tensor_" + std::to_string(i) + "_" + schedule.kind() + ".csv"),
        csv.str());
    std::cout << schedule.kind() << ": final error "
              << plrs::format_double(trace.errors.back()) << '\n';
  }
  return kExitOk;
}

int cmd_schedule_dump(const CommonArgs& args) {
  const plrs::ExperimentConfig config = load_config(args);
  if (config.schedules.empty()) {
    throw plrs::ConfigError("schedule-dump requires at least one [schedule] section");
  }
  const std::string digest = plrs::config_digest(config);
  const fs::path dir = prepare_output_dir(config);

  for (std::size_t i = 0; i < config.schedules.size(); ++i) {
    const auto& schedule = config.schedules[i];
    const plrs::RngStream rng =
        plrs::make_stream(config.run.seed, plrs::StreamPurpose::LearningRate, 0);
    std::ostringstream csv;
    plrs::write_csv_preamble(csv, digest, config.run.seed);
    csv << "step,epoch,lr\n";
    for (std::uint64_t step = 0; step < config.run.steps; ++step) {
      const std::uint64_t epoch = step / config.run.steps_per_epoch;
      const plrs::RateSample sample = plrs::lr_at(schedule, step, epoch, rng);
      csv << step << ',' << epoch << ',' << plrs::format_double(sample.rate) << '\n';
    }
    plrs::write_file_atomic(
        dir / ("schedule_" + std::to_string(i) + "_" + schedule.kind() + ".csv"),
        csv.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic learning-rate scheduling experiments"};
  app.set_version_flag("--version", std::string("plrs ") + plrs::kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&args](CLI::App* cmd, bool config_required) {
    auto* opt = cmd->add_option("--config", args.config_path, "experiment config file");
    if (config_required) opt->required();
    cmd->add_option("--seed", args.seed_override, "override [run] seed");
    cmd->add_option("--out", args.out_override, "override [output] directory");
    cmd->add_option("--jobs", args.jobs, "worker threads (0 = hardware)");
  };

  auto* run_cmd = app.add_subcommand("run", "SGD trajectories for each schedule");
  add_common(run_cmd, true);
  auto* verify_cmd =
      app.add_subcommand("verify", "statistical checks of the convergence claims");
  add_common(verify_cmd, false);
  auto* range_cmd = app.add_subcommand("range-test", "learning-rate range test");
  add_common(range_cmd, true);
  auto* tensor_cmd =
      app.add_subcommand("tensor", "online orthogonal tensor decomposition");
  add_common(tensor_cmd, true);
  auto* dump_cmd = app.add_subcommand("schedule-dump", "emit per-step rates as CSV");
  add_common(dump_cmd, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(args);
    if (verify_cmd->parsed()) return cmd_verify(args);
    if (range_cmd->parsed()) return cmd_range_test(args);
    if (tensor_cmd->parsed()) return cmd_tensor(args);
    if (dump_cmd->parsed()) return cmd_schedule_dump(args);
  } catch (const plrs::ConfigError& e) {
    for (const auto& issue : e.issues()) std::cerr << "config error: " << issue << '\n';
    return kExitConfig;
  } catch (const plrs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitConfig;
}
