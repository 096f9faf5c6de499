#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dictag {

enum class ErrorCode {
  EmptyLemma,
  RuleNotApplicable,
  ParseError,
  FormatError,
  EncodingError,
  VersionMismatch,
  CorruptFile,
  IoError,
  EmptyCorpus,
  CorpusFormatError,
  UnknownRuleEncoding,
  NegativeProbability,
  LengthMismatch,
  ColumnCountError,
  NonContiguousIds,
  AlignmentError,
  DivisionByZero,
  EmptyInput,
  InvalidArgument,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `line()` is set for errors that
/// originate in a text input (1-based).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::size_t>& line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace dictag
