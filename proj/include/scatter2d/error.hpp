#pragma once

#include <stdexcept>
#include <string>

namespace scatter2d {

enum class ErrorKind {
  Domain,              // argument outside the function's domain
  InvalidInput,        // malformed parameters, grids or tables
  NoTurningPoint,      // F_cl > 0 all the way down to the origin
  OrbitingDegenerate,  // turning point is a double root of F_cl
  NoConvergence,       // integrator / quadrature / root finder failed
  SingularMatching,    // 2x2 matching determinant vanished
  NoExtremum,          // deflection function is monotonic on the bracket
  CausticProximity,    // |dTheta/dm| below the stationary-phase slope floor
  IllConditionedFit,   // too few samples for a least-squares fit
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "Domain";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NoTurningPoint: return "NoTurningPoint";
    case ErrorKind::OrbitingDegenerate: return "OrbitingDegenerate";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularMatching: return "SingularMatching";
    case ErrorKind::NoExtremum: return "NoExtremum";
    case ErrorKind::CausticProximity: return "CausticProximity";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so
/// sweeps can record gaps instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace scatter2d
