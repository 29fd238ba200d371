#pragma once

#include <stdexcept>
#include <string>

namespace xgraph {

// Bad user-supplied values: malformed config, out-of-range thresholds,
// unknown method names. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Problems with input data or input files: dimension mismatches, invalid
// matrices, unreadable files, degenerate columns. Maps to CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver failed to reach its tolerance within its iteration
// budget. Maps to CLI exit code 4.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace xgraph
