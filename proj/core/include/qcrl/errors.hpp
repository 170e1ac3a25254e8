#pragma once

#include <stdexcept>
#include <string>

namespace qcrl {

/// Invalid user-facing configuration (bad parameter values, unknown keys).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Mismatched shapes or out-of-range indices passed between components.
class StructuralError : public std::logic_error {
 public:
  explicit StructuralError(const std::string& what) : std::logic_error(what) {}
};

/// Fidelity requested against a target that is not a pure state.
class UnsupportedTargetError : public std::invalid_argument {
 public:
  explicit UnsupportedTargetError(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite values produced during time integration.
class IntegrationError : public std::runtime_error {
 public:
  explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

/// Fitting routine could not produce a meaningful result.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qcrl
