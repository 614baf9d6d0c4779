#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace segservo {

enum class ErrorKind {
  EmptyMask,
  DimensionMismatch,
  EmptyUnion,
  MissingJoint,
  LimitViolation,
  BehindCamera,
  UnknownObject,
  InsufficientData,
  DegenerateSystem,
  InvalidBaseline,
  InvalidArgument,
  ObjectLost,
  GraspFailed,
  ConfigError,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; kind() lets callers
// branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace segservo
