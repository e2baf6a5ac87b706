#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace segtrack {

enum class ErrorKind {
  kInvalidPolygon,
  kInvalidArgument,
  kCorruptRle,
  kCorruptString,
  kDimensionMismatch,
  kEmptySegmentation,
  kParseError,
  kSchemaError,
  kConflict,
  kTooSmall,
  kIntegrity,
  kRange,
  kPrecondition,
  kUndefinedMetric,
  kMissingData,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// All domain failures raised by the library carry one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  // what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace segtrack
