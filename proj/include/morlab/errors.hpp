#pragma once

#include <stdexcept>
#include <string>

namespace morlab {

/// Precondition or input-validation failure.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the stepper when the solution leaves the admissible range
/// (sup norm above the configured threshold, or non-finite values).
class BlowUp : public std::runtime_error {
 public:
  BlowUp(double time, double sup_norm)
      : std::runtime_error("blow-up at t=" + std::to_string(time) +
                           " (|u|_inf=" + std::to_string(sup_norm) + ")"),
        t(time),
        norm(sup_norm) {}
  double t;
  double norm;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace morlab
