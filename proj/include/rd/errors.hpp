#pragma once

#include <stdexcept>
#include <string>

namespace rd {

// Error taxonomy mirrored by the C API status codes (and CLI exit codes).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BlowUpError : std::runtime_error {
  long step;
  int chain_id;
  BlowUpError(const std::string& msg, long step_, int chain = -1)
      : std::runtime_error(msg), step(step_), chain_id(chain) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConditioningError : std::runtime_error {
  double condition_number;
  ConditioningError(const std::string& msg, double cond)
      : std::runtime_error(msg), condition_number(cond) {}
};

struct EmptyShellError : std::runtime_error {
  explicit EmptyShellError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IntegrityError : std::runtime_error {
  explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rd
