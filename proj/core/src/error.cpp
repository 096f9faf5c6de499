#include "dictag/error.hpp"

namespace dictag {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyLemma: return "EmptyLemma";
    case ErrorCode::RuleNotApplicable: return "RuleNotApplicable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::EncodingError: return "EncodingError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::CorpusFormatError: return "CorpusFormatError";
    case ErrorCode::UnknownRuleEncoding: return "UnknownRuleEncoding";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ColumnCountError: return "ColumnCountError";
    case ErrorCode::NonContiguousIds: return "NonContiguousIds";
    case ErrorCode::AlignmentError: return "AlignmentError";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     const std::optional<std::size_t>& line) {
  std::string out(to_string(code));
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace dictag
