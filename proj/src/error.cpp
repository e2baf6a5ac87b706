#include "segtrack/error.hpp"

namespace segtrack {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidPolygon: return "invalid-polygon";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kCorruptRle: return "corrupt-rle";
    case ErrorKind::kCorruptString: return "corrupt-string";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kEmptySegmentation: return "empty-segmentation";
    case ErrorKind::kParseError: return "parse-error";
    case ErrorKind::kSchemaError: return "schema-error";
    case ErrorKind::kConflict: return "conflict-error";
    case ErrorKind::kTooSmall: return "too-small";
    case ErrorKind::kIntegrity: return "integrity-error";
    case ErrorKind::kRange: return "range-error";
    case ErrorKind::kPrecondition: return "precondition-violation";
    case ErrorKind::kUndefinedMetric: return "undefined-metric";
    case ErrorKind::kMissingData: return "missing-data";
    case ErrorKind::kConfig: return "config-error";
    case ErrorKind::kIo: return "io-error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      message_(message) {}

}  // namespace segtrack
