#include "dictag/lemma.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "dictag/error.hpp"

namespace dictag {

namespace {

bool ascii_digit(char c) { return c >= '0' && c <= '9'; }

// Finds a trailing "-N" with N a positive decimal without leading zeros,
// preceded by a non-digit.
std::optional<std::pair<std::size_t, std::uint32_t>> find_sense(std::string_view raw) {
  std::size_t digits = 0;
  while (digits < raw.size() && ascii_digit(raw[raw.size() - 1 - digits])) ++digits;
  if (digits == 0 || digits > 9) return std::nullopt;
  const std::size_t dash = raw.size() - digits - 1;
  if (digits + 1 > raw.size() || raw[dash] != '-') return std::nullopt;
  if (dash == 0 || ascii_digit(raw[dash - 1])) return std::nullopt;
  if (raw[dash + 1] == '0') return std::nullopt;
  std::uint32_t sense = 0;
  for (char c : raw.substr(dash + 1)) sense = sense * 10 + static_cast<std::uint32_t>(c - '0');
  return std::make_pair(dash, sense);
}

}  // namespace

Lemma Lemma::from_raw(std::string_view raw) {
  if (raw.empty()) throw Error(ErrorCode::EmptyLemma, "empty lemma");
  if (raw.find('_') != std::string_view::npos) {
    throw Error(ErrorCode::ParseError, "lemma contains comment markup: " + std::string(raw));
  }
  Lemma out;
  out.raw_ = std::string(raw);
  if (auto sense = find_sense(raw)) {
    out.proper_ = std::string(raw.substr(0, sense->first));
    out.sense_ = sense->second;
  } else {
    out.proper_ = out.raw_;
  }
  return out;
}

Lemma strip_comments(std::string_view morfflex_lemma) {
  const auto cut = morfflex_lemma.find('_');
  const auto stripped = morfflex_lemma.substr(0, cut);
  if (stripped.empty()) {
    throw Error(ErrorCode::EmptyLemma,
                "lemma is empty after stripping comments: '" + std::string(morfflex_lemma) + "'");
  }
  return Lemma::from_raw(stripped);
}

Tag Tag::make(std::string_view value, bool strict) {
  if (value.empty()) throw Error(ErrorCode::ParseError, "empty tag");
  if (strict && !is_strict_valid(value)) {
    throw Error(ErrorCode::ParseError, "not a 15-position tag: " + std::string(value));
  }
  return Tag{std::string(value)};
}

bool Tag::is_strict_valid(std::string_view value) noexcept {
  // PDT-C uses punctuation in some positions ("Z:", "J^", "C="), so any
  // printable non-space ASCII character is accepted.
  return value.size() == 15 && std::all_of(value.begin(), value.end(), [](char c) {
           return std::isgraph(static_cast<unsigned char>(c)) != 0;
         });
}

}  // namespace dictag
