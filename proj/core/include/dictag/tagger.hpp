#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dictag/conllu.hpp"
#include "dictag/edit_rule.hpp"
#include "dictag/lemma.hpp"

namespace dictag {

/// Fixed output spaces of a model: tags sorted by value, rules sorted by
/// their canonical encoding. Immutable once built.
class Inventory {
 public:
  Inventory(std::vector<Tag> tags, std::vector<EditRule> rules);

  const std::vector<Tag>& tags() const noexcept { return tags_; }
  const std::vector<EditRule>& rules() const noexcept { return rules_; }
  const std::vector<std::string>& rule_strings() const noexcept { return rule_strings_; }

  std::optional<std::size_t> tag_index(std::string_view tag) const;
  std::optional<std::size_t> rule_index(std::string_view encoded) const;
  std::optional<std::size_t> rule_index(const EditRule& rule) const {
    return rule_index(to_string(rule));
  }

 private:
  std::vector<Tag> tags_;
  std::vector<EditRule> rules_;
  std::vector<std::string> rule_strings_;
  std::unordered_map<std::string, std::size_t> tag_ids_;
  std::unordered_map<std::string, std::size_t> rule_ids_;
};

/// Per-token distributions over both inventories, stored densely and
/// aligned with the shared inventory.
struct TokenDistributions {
  std::shared_ptr<const Inventory> inventory;
  std::vector<double> tag_probs;
  std::vector<double> rule_probs;

  double tag_prob(std::string_view tag) const;
  double rule_prob(const EditRule& rule) const;
  /// First index of the maximum (lowest index wins ties).
  std::size_t best_tag() const;
};

using SentenceDistributions = std::vector<TokenDistributions>;

/// Stable, numerically safe softmax. `temperature` must be > 0.
std::vector<double> softmax(std::span<const double> scores, double temperature = 1.0);

struct TrainOptions {
  int epochs = 20;
  std::uint64_t seed = 1;
};

struct TrainingMetadata {
  int epochs = 0;
  std::uint64_t seed = 0;
  std::uint64_t corpus_fingerprint = 0;
  std::uint64_t sentences = 0;
  std::uint64_t tokens = 0;

  friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

/// FNV-1a over "form\tlemma\ttag\n" per token and "\n" per sentence.
std::uint64_t corpus_fingerprint(const std::vector<Sentence>& corpus);

/// Context-window feature strings for token `i`. Template set:
///   bias; w= (form); l= (lowercased form); p1..p4= / s1..s4= (lowercased
///   prefixes/suffixes, code points); sh= (collapsed shape: X upper,
///   x lower, d digit, p punctuation, o other); l-2= l-1= l+1= l+2=
///   (lowercased neighbours, "<s>"/"</s>" past the sentence edges).
std::vector<std::string> extract_features(std::span<const std::string> forms, std::size_t i);

/// Two-headed averaged perceptron (tags, edit rules) over shared features.
class TaggerModel {
 public:
  /// Gold lemmas go through strip_comments and rules through induce_rule.
  /// Throws EmptyCorpus, CorpusFormatError(line-less; message names the
  /// sentence and token).
  static TaggerModel train(const std::vector<Sentence>& corpus, const TrainOptions& options);

  /// Softmax over perceptron scores for each head independently.
  SentenceDistributions predict(std::span<const std::string> forms,
                                double temperature = 1.0) const;

  const std::shared_ptr<const Inventory>& inventory() const noexcept { return inventory_; }
  const TrainingMetadata& metadata() const noexcept { return metadata_; }
  std::size_t feature_count() const noexcept { return features_.size(); }

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  std::string serialize() const;
  static TaggerModel load(std::istream& in);
  static TaggerModel load(const std::filesystem::path& path);

 private:
  struct Weight {
    std::uint32_t output;
    double value;
  };
  struct FeatureRow {
    std::vector<Weight> tags;
    std::vector<Weight> rules;
  };

  void score(std::span<const std::string> feats, std::vector<double>& tag_scores,
             std::vector<double>& rule_scores) const;

  std::shared_ptr<const Inventory> inventory_;
  std::vector<std::string> features_;  // sorted
  std::vector<FeatureRow> rows_;       // aligned with features_
  std::unordered_map<std::string, std::uint32_t> feature_ids_;
  TrainingMetadata metadata_;
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// External distributions (JSON lines, one object per token, blank line
/// between sentences):
///   {"form": "...", "tags": [["TAG", p], ...], "rules": [["RULE", p], ...]}
/// Unlisted inventory entries get 0; listed ones are renormalised.
struct ExternalDistributions {
  std::shared_ptr<const Inventory> inventory;
  std::vector<std::vector<std::string>> forms;
  std::vector<SentenceDistributions> sentences;
};

/// With a null `inventory`, the inventory is the union of all keys in the
/// input. Throws ParseError(line), UnknownRuleEncoding(line),
/// NegativeProbability(line).
ExternalDistributions load_external_distributions(std::istream& in,
                                                  std::shared_ptr<const Inventory> inventory);
ExternalDistributions load_external_distributions(const std::filesystem::path& path,
                                                  std::shared_ptr<const Inventory> inventory);

/// Writes the same format; zero-probability entries are omitted.
void write_external_distributions(std::ostream& out,
                                  const std::vector<std::vector<std::string>>& forms,
                                  const std::vector<SentenceDistributions>& sentences);

}  // namespace dictag
