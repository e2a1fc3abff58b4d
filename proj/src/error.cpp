#include "cogload/error.hpp"

namespace cogload {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MissingData: return "MissingData";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonMonotonicClock: return "NonMonotonicClock";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooSparse: return "TooSparse";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InvalidCutoff: return "InvalidCutoff";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::NonUniformSampling: return "NonUniformSampling";
    case ErrorCode::InvalidEdges: return "InvalidEdges";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::UnsatisfiableStratification: return "UnsatisfiableStratification";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace cogload
