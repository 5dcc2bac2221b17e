#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gapprobe {

enum class ErrorKind {
  tolerance_not_met,
  non_finite_integrand,
  route_disagreement,
  insufficient_resolution,
  eigen_failure,
  numerical_degeneracy,
  window_too_small,
  degenerate_fit,
  coincident_particles,
  step_floor_reached,
};

std::string_view to_string(ErrorKind kind);

// Raised for every numerical failure mode. Argument-domain violations
// (sigma <= 0 and the like) use std::invalid_argument instead.
class NumericError : public std::runtime_error {
public:
  NumericError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

}  // namespace gapprobe
