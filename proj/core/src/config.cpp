#include "plrs/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "plrs/csv.hpp"
#include "plrs/error.hpp"
#include "plrs/sha256.hpp"

namespace plrs {
namespace {

struct Entry {
  int line = 0;
  std::string key;
  std::string value;
};

struct RawSection {
  int line = 0;
  std::string name;
  std::vector<Entry> entries;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<RawSection> tokenize(const std::string& text,
                                 std::vector<std::string>& issues) {
  std::vector<RawSection> sections;
  std::istringstream in(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string line = raw_line;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back("line " + std::to_string(line_no) + ": malformed section header");
        continue;
      }
      sections.push_back({line_no, trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    if (sections.empty()) {
      issues.push_back("line " + std::to_string(line_no) + ": key outside any section");
      continue;
    }
    sections.back().entries.push_back(
        {line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return sections;
}

/// Typed key dispatch for one section; unknown / duplicate keys and type
/// mismatches are collected, not thrown.
class SectionReader {
 public:
  SectionReader(const RawSection& section, std::vector<std::string>& issues)
      : section_(section), issues_(issues) {}

  ~SectionReader() {
    for (const auto& e : section_.entries) {
      if (!consumed_.count(e.key)) {
        note(e.line, "unknown key '" + e.key + "' in [" + section_.name + "]");
      }
    }
  }

  void uint(const std::string& key, std::uint64_t& out) {
    take(key, [&](const Entry& e) {
      if (!parse_uint(e.value, out)) type_error(e, "unsigned integer");
    });
  }
  void uint_opt(const std::string& key, std::optional<std::uint64_t>& out) {
    take(key, [&](const Entry& e) {
      std::uint64_t v = 0;
      if (parse_uint(e.value, v)) out = v;
      else type_error(e, "unsigned integer");
    });
  }
  void real(const std::string& key, double& out) {
    take(key, [&](const Entry& e) {
      if (!parse_double(e.value, out)) type_error(e, "number");
    });
  }
  void real_opt(const std::string& key, std::optional<double>& out) {
    take(key, [&](const Entry& e) {
      double v = 0;
      if (parse_double(e.value, v)) out = v;
      else type_error(e, "number");
    });
  }
  void text(const std::string& key, std::string& out,
            const std::vector<std::string>& allowed = {}) {
    take(key, [&](const Entry& e) {
      if (!allowed.empty() &&
          std::find(allowed.begin(), allowed.end(), e.value) == allowed.end()) {
        note(e.line, "key '" + key + "': unsupported value '" + e.value + "'");
        return;
      }
      out = e.value;
    });
  }
  void real_list(const std::string& key, std::vector<double>& out) {
    take(key, [&](const Entry& e) {
      std::vector<double> values;
      if (!parse_list(e.value, values)) type_error(e, "comma-separated numbers");
      else out = std::move(values);
    });
  }
  void uint_list(const std::string& key, std::vector<std::uint64_t>& out) {
    take(key, [&](const Entry& e) {
      std::vector<std::uint64_t> values;
      std::stringstream ss(e.value);
      std::string item;
      bool ok = true;
      while (std::getline(ss, item, ',')) {
        std::uint64_t v = 0;
        if (!parse_uint(trim(item), v)) ok = false;
        values.push_back(v);
      }
      if (!ok || values.empty()) type_error(e, "comma-separated unsigned integers");
      else out = std::move(values);
    });
  }

  void note(int line, const std::string& what) {
    issues_.push_back("line " + std::to_string(line) + ": " + what);
  }

 private:
  template <typename Fn>
  void take(const std::string& key, Fn&& fn) {
    const Entry* found = nullptr;
    for (const auto& e : section_.entries) {
      if (e.key != key) continue;
      if (found) {
        note(e.line, "duplicate key '" + key + "' in [" + section_.name + "]");
        continue;
      }
      found = &e;
    }
    consumed_.insert(key);
    if (found) fn(*found);
  }

  void type_error(const Entry& e, const std::string& expected) {
    note(e.line, "key '" + e.key + "': expected " + expected + ", got '" + e.value + "'");
  }

  static bool parse_uint(const std::string& s, std::uint64_t& out) {
    if (s.empty() || s[0] == '-' || s[0] == '+') return false;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
  }
  static bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
  }
  static bool parse_list(const std::string& s, std::vector<double>& out) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double v = 0;
      if (!parse_double(trim(item), v)) return false;
      out.push_back(v);
    }
    return !out.empty();
  }

  const RawSection& section_;
  std::vector<std::string>& issues_;
  std::set<std::string> consumed_;
};

std::optional<ScheduleSpec> read_schedule(const RawSection& section,
                                          std::vector<std::string>& issues) {
  ScheduleSpec::Variant variant = ConstantSpec{0.1};
  const std::size_t before = issues.size();
  SectionReader reader(section, issues);
  std::string kind_value;
  reader.text("kind", kind_value,
              {"plrs", "cosine", "onecycle", "knee", "multistep", "constant"});
  if (kind_value.empty()) {
    reader.note(section.line, "[schedule] requires a 'kind' key");
    return std::nullopt;
  }
  if (kind_value == "plrs") {
    PlrsSpec s;
    std::string granularity = "per_step";
    reader.real("l_min", s.l_min);
    reader.real("l_max", s.l_max);
    reader.text("granularity", granularity, {"per_step", "per_epoch"});
    s.granularity = granularity == "per_epoch" ? SamplingGranularity::PerEpoch
                                               : SamplingGranularity::PerStep;
    variant = s;
  } else if (kind_value == "cosine") {
    CosineWarmRestartsSpec s;
    s.eta_max = 0.1;
    s.eta_min = 1e-4;
    reader.real("eta_max", s.eta_max);
    reader.real("eta_min", s.eta_min);
    reader.real("t0", s.t0);
    reader.real("mult", s.mult);
    variant = s;
  } else if (kind_value == "onecycle") {
    OneCycleSpec s;
    reader.real("base", s.base);
    reader.real("peak", s.peak);
    reader.real("up_frac", s.up_frac);
    reader.real("down_frac", s.down_frac);
    reader.real("final_div", s.final_div);
    reader.uint("total_epochs", s.total_epochs);
    variant = s;
  } else if (kind_value == "knee") {
    KneeSpec s;
    reader.real("high", s.high);
    reader.uint("explore_epochs", s.explore_epochs);
    reader.uint("total_epochs", s.total_epochs);
    variant = s;
  } else if (kind_value == "multistep") {
    MultiStepSpec s;
    reader.real("base", s.base);
    reader.uint_list("milestones", s.milestones);
    reader.real("factor", s.factor);
    variant = s;
  } else {
    ConstantSpec s;
    reader.real("rate", s.rate);
    variant = s;
  }
  if (issues.size() != before) return std::nullopt;
  try {
    return ScheduleSpec{variant};
  } catch (const ConfigError& err) {
    for (const auto& issue : err.issues()) {
      issues.push_back("line " + std::to_string(section.line) + ": " + issue);
    }
    return std::nullopt;
  }
}

std::string granularity_name(SamplingGranularity g) {
  return g == SamplingGranularity::PerEpoch ? "per_epoch" : "per_step";
}

void serialize_schedule(std::ostream& out, const ScheduleSpec& spec) {
  struct Writer {
    std::ostream& out;
    void operator()(const PlrsSpec& s) const {
      out << "kind = plrs\n"
          << "l_min = " << format_double(s.l_min) << '\n'
          << "l_max = " << format_double(s.l_max) << '\n'
          << "granularity = " << granularity_name(s.granularity) << '\n';
    }
    void operator()(const CosineWarmRestartsSpec& s) const {
      out << "kind = cosine\n"
          << "eta_max = " << format_double(s.eta_max) << '\n'
          << "eta_min = " << format_double(s.eta_min) << '\n'
          << "t0 = " << format_double(s.t0) << '\n'
          << "mult = " << format_double(s.mult) << '\n';
    }
    void operator()(const OneCycleSpec& s) const {
      out << "kind = onecycle\n"
          << "base = " << format_double(s.base) << '\n'
          << "peak = " << format_double(s.peak) << '\n'
          << "up_frac = " << format_double(s.up_frac) << '\n'
          << "down_frac = " << format_double(s.down_frac) << '\n'
          << "final_div = " << format_double(s.final_div) << '\n'
          << "total_epochs = " << s.total_epochs << '\n';
    }
    void operator()(const KneeSpec& s) const {
      out << "kind = knee\n"
          << "high = " << format_double(s.high) << '\n'
          << "explore_epochs = " << s.explore_epochs << '\n'
          << "total_epochs = " << s.total_epochs << '\n';
    }
    void operator()(const MultiStepSpec& s) const {
      out << "kind = multistep\n"
          << "base = " << format_double(s.base) << '\n'
          << "milestones = ";
      for (std::size_t i = 0; i < s.milestones.size(); ++i) {
        if (i) out << ',';
        out << s.milestones[i];
      }
      out << '\n' << "factor = " << format_double(s.factor) << '\n';
    }
    void operator()(const ConstantSpec& s) const {
      out << "kind = constant\n"
          << "rate = " << format_double(s.rate) << '\n';
    }
  };
  std::visit(Writer{out}, spec.variant());
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::string> issues;
  const std::vector<RawSection> sections = tokenize(text, issues);

  ExperimentConfig config;
  bool saw_problem = false;
  bool saw_noise = false;
  bool saw_run = false;
  bool saw_output = false;
  bool saw_range = false;
  bool saw_tensor = false;
  bool saw_verify = false;

  auto once = [&issues](bool& flag, const RawSection& s) {
    if (flag) {
      issues.push_back("line " + std::to_string(s.line) + ": duplicate section [" +
                       s.name + "]");
      return false;
    }
    flag = true;
    return true;
  };

  for (const auto& section : sections) {
    if (section.name == "problem") {
      if (!once(saw_problem, section)) continue;
      SectionReader reader(section, issues);
      reader.text("kind", config.problem.kind, {"quadratic"});
      reader.uint("dim", config.problem.dim);
      reader.real_list("eigenvalues", config.problem.eigenvalues);
      reader.uint_opt("rotation_seed", config.problem.rotation_seed);
    } else if (section.name == "noise") {
      if (!once(saw_noise, section)) continue;
      SectionReader reader(section, issues);
      reader.text("kind", config.noise.kind, {"none", "sphere", "ball", "minibatch"});
      reader.real("radius", config.noise.radius);
      reader.uint("components", config.noise.components);
      reader.uint("batch", config.noise.batch);
      reader.uint("noise_seed", config.noise.noise_seed);
    } else if (section.name == "schedule") {
      auto schedule = read_schedule(section, issues);
      if (schedule.has_value()) config.schedules.push_back(std::move(*schedule));
    } else if (section.name == "run") {
      if (!once(saw_run, section)) continue;
      SectionReader reader(section, issues);
      reader.uint("steps", config.run.steps);
      reader.uint("seed", config.run.seed);
      reader.uint("trials", config.run.trials);
      reader.uint("snapshot_stride", config.run.snapshot_stride);
      reader.uint("steps_per_epoch", config.run.steps_per_epoch);
      reader.real("divergence_bound", config.run.divergence_bound);
      reader.real_list("init", config.run.init);
      reader.real_opt("init_fill", config.run.init_fill);
      reader.real_opt("f_threshold", config.run.f_threshold);
    } else if (section.name == "output") {
      if (!once(saw_output, section)) continue;
      SectionReader reader(section, issues);
      reader.text("directory", config.output.directory);
      reader.text("formats", config.output.formats, {"csv"});
    } else if (section.name == "range_test") {
      if (!once(saw_range, section)) continue;
      SectionReader reader(section, issues);
      reader.real("rate_min", config.range_test.rate_min);
      reader.real("rate_max", config.range_test.rate_max);
      reader.real("rate_step", config.range_test.rate_step);
      reader.uint("steps_per_rate", config.range_test.steps_per_rate);
      reader.real("breakdown_factor", config.range_test.breakdown_factor);
      reader.real("l_min_ratio", config.range_test.l_min_ratio);
    } else if (section.name == "tensor") {
      if (!once(saw_tensor, section)) continue;
      SectionReader reader(section, issues);
      reader.uint("dim", config.tensor.dim);
      reader.uint_opt("components", config.tensor.components);
      reader.uint("instance_seed", config.tensor.instance_seed);
      reader.text("basis", config.tensor.basis, {"random", "canonical"});
      reader.real("noise_scale", config.tensor.noise_scale);
      reader.uint("steps", config.tensor.steps);
      reader.text("update", config.tensor.update, {"simultaneous", "cyclic"});
      reader.uint("record_stride", config.tensor.record_stride);
    } else if (section.name == "verify") {
      if (!once(saw_verify, section)) continue;
      SectionReader reader(section, issues);
      reader.real("trial_scale", config.verify.trial_scale);
    } else {
      issues.push_back("line " + std::to_string(section.line) + ": unknown section [" +
                       section.name + "]");
    }
  }

  // Cross-field constraints.
  if (config.problem.dim < 1) issues.push_back("[problem] dim must be >= 1");
  if (config.problem.eigenvalues.size() != config.problem.dim) {
    issues.push_back("[problem] eigenvalues must list exactly dim values");
  }
  if (config.noise.kind != "none" && !(config.noise.radius > 0.0)) {
    issues.push_back("[noise] radius must be > 0 for kind " + config.noise.kind);
  }
  if (config.noise.kind == "minibatch" && config.noise.components < 2) {
    issues.push_back("[noise] minibatch needs components >= 2");
  }
  if (config.run.steps < 1) issues.push_back("[run] steps must be >= 1");
  if (config.run.steps_per_epoch < 1) issues.push_back("[run] steps_per_epoch must be >= 1");
  if (!config.run.init.empty() && config.run.init.size() != config.problem.dim) {
    issues.push_back("[run] init must list exactly dim values");
  }
  if (!(config.range_test.rate_min > 0.0) ||
      !(config.range_test.rate_max > config.range_test.rate_min) ||
      !(config.range_test.rate_step > 0.0)) {
    issues.push_back("[range_test] requires 0 < rate_min < rate_max and rate_step > 0");
  }
  if (config.tensor.dim < 2) issues.push_back("[tensor] dim must be >= 2");
  if (config.tensor.components.has_value() &&
      (*config.tensor.components < 1 || *config.tensor.components > config.tensor.dim)) {
    issues.push_back("[tensor] components must be in [1, dim]");
  }
  if (config.tensor.record_stride < 1) {
    issues.push_back("[tensor] record_stride must be >= 1");
  }
  if (config.tensor.steps < 1) issues.push_back("[tensor] steps must be >= 1");
  if (!(config.verify.trial_scale > 0.0)) {
    issues.push_back("[verify] trial_scale must be > 0");
  }

  if (!issues.empty()) throw ConfigError(issues);
  return config;
}

std::string canonical_serialize(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "[problem]\n"
      << "kind = " << config.problem.kind << '\n'
      << "dim = " << config.problem.dim << '\n'
      << "eigenvalues = ";
  for (std::size_t i = 0; i < config.problem.eigenvalues.size(); ++i) {
    if (i) out << ',';
    out << format_double(config.problem.eigenvalues[i]);
  }
  out << '\n';
  if (config.problem.rotation_seed.has_value()) {
    out << "rotation_seed = " << *config.problem.rotation_seed << '\n';
  }

  out << "\n[noise]\n"
      << "kind = " << config.noise.kind << '\n';
  if (config.noise.kind != "none") {
    out << "radius = " << format_double(config.noise.radius) << '\n';
  }
  if (config.noise.kind == "minibatch") {
    out << "components = " << config.noise.components << '\n'
        << "batch = " << config.noise.batch << '\n'
        << "noise_seed = " << config.noise.noise_seed << '\n';
  }

  for (const auto& schedule : config.schedules) {
    out << "\n[schedule]\n";
    serialize_schedule(out, schedule);
  }

  out << "\n[run]\n"
      << "steps = " << config.run.steps << '\n'
      << "seed = " << config.run.seed << '\n'
      << "trials = " << config.run.trials << '\n'
      << "snapshot_stride = " << config.run.snapshot_stride << '\n'
      << "steps_per_epoch = " << config.run.steps_per_epoch << '\n'
      << "divergence_bound = " << format_double(config.run.divergence_bound) << '\n';
  if (!config.run.init.empty()) {
    out << "init = ";
    for (std::size_t i = 0; i < config.run.init.size(); ++i) {
      if (i) out << ',';
      out << format_double(config.run.init[i]);
    }
    out << '\n';
  }
  if (config.run.init_fill.has_value()) {
    out << "init_fill = " << format_double(*config.run.init_fill) << '\n';
  }
  if (config.run.f_threshold.has_value()) {
    out << "f_threshold = " << format_double(*config.run.f_threshold) << '\n';
  }

  out << "\n[range_test]\n"
      << "rate_min = " << format_double(config.range_test.rate_min) << '\n'
      << "rate_max = " << format_double(config.range_test.rate_max) << '\n'
      << "rate_step = " << format_double(config.range_test.rate_step) << '\n'
      << "steps_per_rate = " << config.range_test.steps_per_rate << '\n'
      << "breakdown_factor = " << format_double(config.range_test.breakdown_factor) << '\n'
      << "l_min_ratio = " << format_double(config.range_test.l_min_ratio) << '\n';

  out << "\n[tensor]\n"
      << "dim = " << config.tensor.dim << '\n';
  if (config.tensor.components.has_value()) {
    out << "components = " << *config.tensor.components << '\n';
  }
  out << "instance_seed = " << config.tensor.instance_seed << '\n'
      << "basis = " << config.tensor.basis << '\n'
      << "noise_scale = " << format_double(config.tensor.noise_scale) << '\n'
      << "steps = " << config.tensor.steps << '\n'
      << "update = " << config.tensor.update << '\n'
      << "record_stride = " << config.tensor.record_stride << '\n';

  out << "\n[verify]\n"
      << "trial_scale = " << format_double(config.verify.trial_scale) << '\n';

  // [output] names where artifacts land, not what the experiment is; it is
  // deliberately absent so the digest is stable across output locations.
  return out.str();
}

std::string config_digest(const ExperimentConfig& config) {
  return Sha256::hex_digest(canonical_serialize(config));
}

ProblemSpec make_problem(const ExperimentConfig& config) {
  Vector eigenvalues(config.problem.eigenvalues.size());
  for (std::size_t i = 0; i < config.problem.eigenvalues.size(); ++i) {
    eigenvalues[static_cast<Eigen::Index>(i)] = config.problem.eigenvalues[i];
  }
  if (config.problem.rotation_seed.has_value()) {
    return quadratic(static_cast<Eigen::Index>(config.problem.dim), eigenvalues,
                     *config.problem.rotation_seed);
  }
  return diagonal_quadratic(eigenvalues);
}

NoiseModel make_noise(const ExperimentConfig& config) {
  const auto& n = config.noise;
  if (n.kind == "sphere") return NoiseModel{NoiseModel::Variant{SphereUniformNoise{n.radius}}};
  if (n.kind == "ball") return NoiseModel{NoiseModel::Variant{BallUniformNoise{n.radius}}};
  if (n.kind == "minibatch") {
    return NoiseModel{
        NoiseModel::Variant{FiniteSumMinibatchNoise{n.components, n.batch, n.radius, n.noise_seed}}};
  }
  return NoiseModel{};
}

Vector make_init(const ExperimentConfig& config) {
  const auto dim = static_cast<Eigen::Index>(config.problem.dim);
  if (!config.run.init.empty()) {
    Vector init(dim);
    for (Eigen::Index i = 0; i < dim; ++i) init[i] = config.run.init[i];
    return init;
  }
  if (config.run.init_fill.has_value()) {
    return Vector::Constant(dim, *config.run.init_fill);
  }
  return Vector::Zero(dim);
}

}  // namespace plrs
