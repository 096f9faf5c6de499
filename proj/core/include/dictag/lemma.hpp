#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dictag {

/// A PDT-style lemma with its sense number split out. Technical comments
/// (everything from the first '_' in a MorfFlex lemma) are never stored.
class Lemma {
 public:
  /// Parses an already comment-free lemma string ("jak-2", "pes").
  /// Throws EmptyLemma on "" and ParseError if `raw` still contains '_'.
  static Lemma from_raw(std::string_view raw);

  const std::string& raw() const noexcept { return raw_; }
  const std::string& proper() const noexcept { return proper_; }
  std::optional<std::uint32_t> sense() const noexcept { return sense_; }

  friend bool operator==(const Lemma& a, const Lemma& b) { return a.raw_ == b.raw_; }
  friend std::strong_ordering operator<=>(const Lemma& a, const Lemma& b) {
    return a.raw_ <=> b.raw_;
  }

 private:
  Lemma() = default;

  std::string raw_;
  std::string proper_;
  std::optional<std::uint32_t> sense_;
};

/// Drops MorfFlex technical comments and parses the "-N" sense suffix:
/// "el-88_^(komentář)" -> {proper "el", sense 88}.
Lemma strip_comments(std::string_view morfflex_lemma);

/// PDT-C positional tag. Only non-emptiness is enforced by default;
/// strict validation checks the 15-position shape.
struct Tag {
  std::string value;

  static Tag make(std::string_view value, bool strict = false);
  static bool is_strict_valid(std::string_view value) noexcept;

  friend auto operator<=>(const Tag&, const Tag&) = default;
};

}  // namespace dictag
