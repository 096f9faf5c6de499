#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dictag/lemma.hpp"

namespace dictag {

enum class CasingKind : std::uint8_t { AllLower, FirstUpperRestLower, AllUpper, Explicit };

/// Half-open range of code point indices, [begin, end).
struct UpperRange {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  friend auto operator<=>(const UpperRange&, const UpperRange&) = default;
};

struct Casing {
  CasingKind kind = CasingKind::AllLower;
  /// Only used by CasingKind::Explicit: sorted, disjoint, non-adjacent.
  std::vector<UpperRange> upper;

  friend auto operator<=>(const Casing&, const Casing&) = default;
};

/// Form -> lemma transformation. Affix rules work on the lowercased form
/// and then impose `casing`; Absolute rules ignore the form entirely.
/// All counts are in code points.
struct EditRule {
  enum class Kind : std::uint8_t { Affix, Absolute };

  Kind kind = Kind::Affix;
  std::uint32_t strip_prefix = 0;
  std::string prefix_insert;
  std::uint32_t strip_suffix = 0;
  std::string suffix_insert;
  std::string replacement;  // Absolute only
  Casing casing;

  static EditRule identity() { return {}; }

  friend auto operator<=>(const EditRule&, const EditRule&) = default;
};

/// Deterministic rule induction anchored on the longest common substring
/// of the lowercased form and lemma (ties: leftmost in form, then leftmost
/// in lemma). `form` must be non-empty valid UTF-8.
EditRule induce_rule(std::string_view form, const Lemma& lemma);

/// Throws Error(RuleNotApplicable) when the rule strips more than the form
/// has or an explicit casing range falls outside the result.
std::string apply_rule(const EditRule& rule, std::string_view form);

/// Same as apply_rule on an already lowercased, decoded form; returns
/// nullopt instead of throwing. Hot path for rescoring.
std::optional<std::string> try_apply_rule(const EditRule& rule, std::u32string_view lowered_form);

/// Canonical single-line encoding:
///   A|<strip_prefix>|<prefix_insert>|<strip_suffix>|<suffix_insert>|<casing>
///   R|<replacement>|<casing>
/// casing is one of "l", "t", "u" or "e:<b>-<e>,<b>-<e>...". Inside strings
/// '\' '|' TAB LF CR are written as \\ \p \t \n \r.
std::string to_string(const EditRule& rule);

/// Exact inverse of to_string; rejects anything to_string would not emit
/// (Error(ParseError)).
EditRule rule_from_string(std::string_view encoded);

/// Casing directive for a lemma string, as used by induce_rule.
Casing casing_of(std::u32string_view lemma);

}  // namespace dictag
