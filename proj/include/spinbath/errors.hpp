#pragma once

#include <stdexcept>
#include <string>

namespace spinbath {

// Error taxonomy mirrors the CLI exit codes: config 2, numerics 3, I/O 4.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a cluster-correlation division hits a vanishing sub-cluster
// term; signals a strongly correlated bath instead of regularizing.
struct NumericalBreakdown : std::runtime_error {
  explicit NumericalBreakdown(const std::string& what)
      : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinbath
