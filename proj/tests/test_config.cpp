#include <string>

#include "doctest.h"
#include "plrs/config.hpp"
#include "plrs/error.hpp"

using namespace plrs;

namespace {

const char* kMinimal = R"(# minimal experiment
[problem]
kind = quadratic
dim = 2
eigenvalues = 1,1

[noise]
kind = sphere
radius = 0.1

[schedule]
kind = plrs
l_min = 0.07
l_max = 0.1

[run]
steps = 1000
seed = 42
)";

}  // namespace

TEST_CASE("minimal config parses with a stable digest") {
  const ExperimentConfig config = parse_config(kMinimal);
  CHECK(config.problem.dim == 2);
  CHECK(config.noise.kind == "sphere");
  REQUIRE(config.schedules.size() == 1);
  CHECK(config.schedules[0].kind() == "plrs");
  CHECK(config.run.steps == 1000);
  CHECK(config.run.seed == 42);

  const std::string digest1 = config_digest(config);
  const std::string digest2 = config_digest(parse_config(kMinimal));
  CHECK(digest1 == digest2);
  CHECK(digest1.size() == 64);
}

TEST_CASE("parse then serialize is idempotent") {
  const ExperimentConfig config = parse_config(kMinimal);
  const std::string canonical = canonical_serialize(config);
  const ExperimentConfig reparsed = parse_config(canonical);
  CHECK(canonical_serialize(reparsed) == canonical);
  CHECK(config_digest(reparsed) == config_digest(config));
}

TEST_CASE("constraint violations carry a clear message") {
  const std::string bad = std::string(kMinimal).replace(
      std::string(kMinimal).find("l_min = 0.07"), 12, "l_min = 0.20");
  try {
    parse_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.issues().size() == 1);
    CHECK(e.issues()[0].find("l_min") != std::string::npos);
  }
}

TEST_CASE("all errors are reported together with line numbers") {
  const char* broken = R"([problem]
kind = quadratic
dim = 2
eigenvalues = 1,oops
mystery = 3

[noise]
kind = nonsense
)";
  try {
    parse_config(broken);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.issues().size() >= 3);  // bad list, unknown key, bad enum, missing schedule-independent checks
    bool has_line4 = false;
    bool has_line5 = false;
    for (const auto& issue : e.issues()) {
      if (issue.find("line 4") != std::string::npos) has_line4 = true;
      if (issue.find("line 5") != std::string::npos) has_line5 = true;
    }
    CHECK(has_line4);
    CHECK(has_line5);
  }
}

TEST_CASE("unknown sections and duplicate keys are rejected") {
  CHECK_THROWS_AS(parse_config("[wat]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "\n[run]\nsteps = 5\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "\n[tensor]\ndim = 4\ndim = 5\n"),
                  ConfigError);
}

TEST_CASE("degenerate strides and counts are rejected") {
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "\n[tensor]\nrecord_stride = 0\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "\n[tensor]\nsteps = 0\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) +
                               "\n[tensor]\ndim = 4\ncomponents = 5\n"),
                  ConfigError);
}

TEST_CASE("empty text parses to the defaults") {
  const ExperimentConfig config = parse_config("");
  CHECK(config.problem.dim == 1);
  CHECK(config.schedules.empty());
  CHECK(config.run.seed == 42);
  CHECK(config_digest(config).size() == 64);
}

TEST_CASE("multiple schedule sections are a comparison run") {
  const std::string multi = std::string(kMinimal) + R"(
[schedule]
kind = knee
high = 0.1
explore_epochs = 100
total_epochs = 200
)";
  const ExperimentConfig config = parse_config(multi);
  REQUIRE(config.schedules.size() == 2);
  CHECK(config.schedules[0].kind() == "plrs");
  CHECK(config.schedules[1].kind() == "knee");
}

TEST_CASE("every schedule kind round-trips through the canonical form") {
  const char* text = R"([problem]
kind = quadratic
dim = 1
eigenvalues = 1

[schedule]
kind = cosine
eta_max = 0.1
eta_min = 0.0001
t0 = 1
mult = 2

[schedule]
kind = onecycle
base = 0.01
peak = 0.1
up_frac = 0.45
down_frac = 0.45
final_div = 10
total_epochs = 100

[schedule]
kind = multistep
base = 0.1
milestones = 100,150
factor = 0.1

[schedule]
kind = constant
rate = 0.05
)";
  const ExperimentConfig config = parse_config(text);
  REQUIRE(config.schedules.size() == 4);
  const std::string canonical = canonical_serialize(config);
  CHECK(canonical_serialize(parse_config(canonical)) == canonical);
}

TEST_CASE("problem and noise builders honor the config") {
  const ExperimentConfig config = parse_config(kMinimal);
  const ProblemSpec problem = make_problem(config);
  CHECK(problem.dim == 2);
  CHECK(problem.constants.beta == 1.0);
  const NoiseModel noise = make_noise(config);
  CHECK(noise.kind() == "sphere");
  CHECK(noise.q_bound() == 0.1);
  CHECK(make_init(config).norm() == 0.0);
}

TEST_CASE("init list must match the dimension") {
  const std::string bad =
      std::string(kMinimal) + "\n[output]\ndirectory = out\n";
  CHECK_NOTHROW(parse_config(bad));
  const std::string mismatched = std::string(kMinimal) + "\ninit = 1,2,3\n";
  // init key belongs to [run]; appended after [run] section ends the file, so
  // it lands in [run] here.
  CHECK_THROWS_AS(parse_config(mismatched), ConfigError);
}
