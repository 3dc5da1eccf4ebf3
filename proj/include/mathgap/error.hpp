#pragma once

#include <stdexcept>
#include <string>

namespace mathgap {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  Schema,
  Overflow,
  LabelMismatch,
  Generation,
  VocabularyExhausted,
  MissingTemplate,
  OracleMismatch,
  Io,
  Transport,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a code so the C boundary can map
// it onto a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mathgap
