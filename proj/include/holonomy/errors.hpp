#pragma once

#include <stdexcept>
#include <string>

namespace holonomy {

// Error categories line up with the CLI exit codes:
//   kSchema -> 2, kGeometry -> 3, kNumerical -> 4, kTolerance -> 5.
enum class ErrorKind { kSchema, kGeometry, kNumerical, kTolerance };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define HOLONOMY_DEFINE_ERROR(Name, Kind)                      \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& what)                     \
        : Error(ErrorKind::Kind, std::string(#Name ": ") + what) {} \
  }

HOLONOMY_DEFINE_ERROR(SchemaError, kSchema);
HOLONOMY_DEFINE_ERROR(BadParameter, kGeometry);
HOLONOMY_DEFINE_ERROR(NoCoveringChart, kGeometry);
HOLONOMY_DEFINE_ERROR(ResolutionTooCoarse, kGeometry);
HOLONOMY_DEFINE_ERROR(EmptyOverlapSamples, kGeometry);
HOLONOMY_DEFINE_ERROR(NonUnitTransition, kGeometry);
HOLONOMY_DEFINE_ERROR(PointOutsideChart, kGeometry);
HOLONOMY_DEFINE_ERROR(PointOutsideOverlap, kGeometry);
HOLONOMY_DEFINE_ERROR(InvalidPartition, kGeometry);
HOLONOMY_DEFINE_ERROR(InvalidRelabel, kGeometry);
HOLONOMY_DEFINE_ERROR(EndpointMismatch, kGeometry);
HOLONOMY_DEFINE_ERROR(SeamMismatch, kGeometry);
HOLONOMY_DEFINE_ERROR(CutGeometryInvalid, kGeometry);
HOLONOMY_DEFINE_ERROR(ArcOutsideOverlap, kGeometry);
HOLONOMY_DEFINE_ERROR(GeneralPositionFailure, kGeometry);
HOLONOMY_DEFINE_ERROR(StepTooLarge, kGeometry);
HOLONOMY_DEFINE_ERROR(QuadratureNotConverged, kNumerical);

#undef HOLONOMY_DEFINE_ERROR

}  // namespace holonomy
