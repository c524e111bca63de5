#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sarseg {

// Bad shapes, out-of-range arguments, malformed inputs.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A SolverConfig that violates a parameter constraint (e.g. the
// fixed-point stability bound).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A solver produced a non-finite value.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, int iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace sarseg
