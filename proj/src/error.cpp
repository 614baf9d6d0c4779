#include "segservo/error.hpp"

namespace segservo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyMask: return "EmptyMask";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyUnion: return "EmptyUnion";
    case ErrorKind::MissingJoint: return "MissingJoint";
    case ErrorKind::LimitViolation: return "LimitViolation";
    case ErrorKind::BehindCamera: return "BehindCamera";
    case ErrorKind::UnknownObject: return "UnknownObject";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateSystem: return "DegenerateSystem";
    case ErrorKind::InvalidBaseline: return "InvalidBaseline";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ObjectLost: return "ObjectLost";
    case ErrorKind::GraspFailed: return "GraspFailed";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace segservo
