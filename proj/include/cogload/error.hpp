#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cogload {

enum class ErrorCode {
  MissingFile,
  MissingData,
  MalformedRow,
  NonMonotonicClock,
  InvalidArgument,
  TooSparse,
  TooShort,
  InvalidCutoff,
  InvalidK,
  TooFewSamples,
  NonMonotonicTime,
  NonUniformSampling,
  InvalidEdges,
  DegenerateLabels,
  NonFiniteInput,
  SchemaMismatch,
  WrongKind,
  LengthMismatch,
  Empty,
  UnsatisfiableStratification,
  InvalidParams,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception type; `code()`
// identifies the failure class and `what()` carries the detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cogload
