#pragma once

#include <stdexcept>
#include <string>

namespace fracpde {

/// Bad or inconsistent run configuration; maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// CFL violation, fixed-point/iteration budget exhaustion; exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracpde
