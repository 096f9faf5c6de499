#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dictag/edit_rule.hpp"
#include "dictag/lemma.hpp"
#include "dictag/morph_dict.hpp"
#include "dictag/tagger.hpp"

namespace dictag {

enum class Fallback { NoValidPair, AllZero };

std::string_view to_string(Fallback fallback) noexcept;

/// Result of decoding one token.
///
/// `constrained` is true when the choice was restricted to dictionary-valid
/// pairs. A known form whose analyses are not expressible with the model's
/// inventories is decoded unconstrained and flagged with NoValidPair.
struct RescoredChoice {
  Tag tag;
  EditRule rule;
  std::string lemma;
  double score = 0.0;  // tag probability x rule probability
  bool constrained = false;
  std::optional<Fallback> fallback;
  std::size_t tag_index = 0;
  /// Empty only when no inventory rule applies to the form at all; the
  /// lemma then equals the form.
  std::optional<std::size_t> rule_index;

  friend bool operator==(const RescoredChoice&, const RescoredChoice&) = default;
};

/// A (tag, rule) pair licensed by a dictionary analysis of the form.
struct ValidPair {
  std::size_t tag_index;
  std::size_t rule_index;
  std::size_t analysis_index;  // position in dict.lookup(form)

  friend bool operator==(const ValidPair&, const ValidPair&) = default;
};

/// Every (t, r) from the inventories such that dict.lookup(form) contains
/// (apply_rule(r, form), t). Ordered by analysis, then rule index.
std::vector<ValidPair> valid_pairs(const MorphDict& dict, std::string_view form,
                                   const TokenDistributions& dists);

/// Per-head argmax; an inapplicable best rule falls through to the most
/// probable applicable one.
RescoredChoice unconstrained_choice(std::string_view form, const TokenDistributions& dists);

/// Dictionary-constrained decoding of one token:
///   OOV form             -> unconstrained_choice
///   valid pairs present  -> argmax of tag_prob * rule_prob over them
///   known, none valid    -> unconstrained_choice, fallback NoValidPair
/// Ranking among valid pairs: product, then tag probability, then rule
/// probability (all descending), then dictionary order, then rule index.
/// When every product is 0 the same ranking applies and AllZero is set.
RescoredChoice rescore_token(const MorphDict& dict, std::string_view form,
                             const TokenDistributions& dists);

/// Token-wise rescore_token. Throws LengthMismatch.
std::vector<RescoredChoice> rescore_sentence(const MorphDict& dict,
                                             std::span<const std::string> forms,
                                             std::span<const TokenDistributions> dists);

/// One JSON object (single line) listing the valid-pair candidates with
/// their products and renormalised posteriors, and the selected choice.
std::string candidate_table_json(const MorphDict& dict, std::string_view form,
                                 const TokenDistributions& dists);

}  // namespace dictag
