#pragma once

#include <stdexcept>
#include <string>

namespace torsionlab {

enum class ErrorCode {
  invalid_polygon,
  self_intersecting,
  hole_outside,
  holes_overlap,
  invalid_family_params,
  tolerance_not_met,
  feature_too_small,
  tag_mismatch,
  not_converged,
  quadrature_failure,
  breakpoint_overlap,
  invalid_nesting,
  plateau_level,
  mesh_mismatch,
  insufficient_family,
  invalid_argument,
  schema_violation,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_polygon: return "InvalidPolygon";
    case ErrorCode::self_intersecting: return "SelfIntersecting";
    case ErrorCode::hole_outside: return "HoleOutside";
    case ErrorCode::holes_overlap: return "HolesOverlap";
    case ErrorCode::invalid_family_params: return "InvalidFamilyParams";
    case ErrorCode::tolerance_not_met: return "ToleranceNotMet";
    case ErrorCode::feature_too_small: return "FeatureTooSmall";
    case ErrorCode::tag_mismatch: return "TagMismatch";
    case ErrorCode::not_converged: return "NotConverged";
    case ErrorCode::quadrature_failure: return "QuadratureFailure";
    case ErrorCode::breakpoint_overlap: return "BreakpointOverlap";
    case ErrorCode::invalid_nesting: return "InvalidNesting";
    case ErrorCode::plateau_level: return "PlateauLevel";
    case ErrorCode::mesh_mismatch: return "MeshMismatch";
    case ErrorCode::insufficient_family: return "InsufficientFamily";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::schema_violation: return "SchemaViolation";
  }
  return "Unknown";
}

/// Library-wide exception. `index` names the offending item (hole number,
/// polygon number, family member) when one exists, otherwise -1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, int index = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  int index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  int index_;
};

}  // namespace torsionlab
