#include "gapprobe/error.hpp"

namespace gapprobe {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::tolerance_not_met: return "ToleranceNotMet";
    case ErrorKind::non_finite_integrand: return "NonFiniteIntegrand";
    case ErrorKind::route_disagreement: return "RouteDisagreement";
    case ErrorKind::insufficient_resolution: return "InsufficientResolution";
    case ErrorKind::eigen_failure: return "EigenFailure";
    case ErrorKind::numerical_degeneracy: return "NumericalDegeneracy";
    case ErrorKind::window_too_small: return "WindowTooSmall";
    case ErrorKind::degenerate_fit: return "DegenerateFit";
    case ErrorKind::coincident_particles: return "CoincidentParticles";
    case ErrorKind::step_floor_reached: return "StepFloorReached";
  }
  return "UnknownError";
}

}  // namespace gapprobe
