#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace plrs {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition or type invariant.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration text or values; `issues()` lists every problem
/// found, each prefixed with a line number where one is known.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}
  explicit ConfigError(const std::string& issue)
      : ConfigError(std::vector<std::string>{issue}) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

/// A run produced a non-finite iterate/gradient or tripped the divergence
/// guard. Carries the step at which it happened.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::uint64_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::uint64_t step() const { return step_; }

 private:
  std::uint64_t step_;
};

}  // namespace plrs
