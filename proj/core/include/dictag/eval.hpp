#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dictag/conllu.hpp"
#include "dictag/morph_dict.hpp"

namespace dictag {

enum class Field { Lemma, Pos };

/// Percentage of tokens whose field matches. Lemmas are compared after
/// dropping MorfFlex comments (sense-sensitive); POS compares XPOS.
/// Throws AlignmentError when the token streams differ in count or forms,
/// EmptyInput when there are no tokens.
double accuracy(const std::vector<Sentence>& gold, const std::vector<Sentence>& system, Field field);

/// 100 * (err_baseline - err_new) / err_baseline. Throws DivisionByZero
/// when baseline == 100, InvalidArgument outside [0, 100].
double error_reduction(double baseline_acc, double new_acc);

/// Unweighted mean. Throws EmptyInput.
double macro_average(std::span<const double> accuracies);

inline constexpr std::size_t kBucketCount = 10;  // 0..8 and 9+

struct BucketStats {
  std::size_t tokens = 0;
  double weight = 0.0;
  std::optional<double> pos_acc;  // empty for an empty bucket
  std::optional<double> lemma_acc;
};

std::string bucket_label(std::size_t bucket);

/// Micro accuracies by number of dictionary analyses of the form.
std::array<BucketStats, kBucketCount> bucket_by_ambiguity(const MorphDict& dict,
                                                          const std::vector<Sentence>& gold,
                                                          const std::vector<Sentence>& system);

enum class ErrorCategory { NonLemma, SenseError, CasingError, OtherLemmaError, TagError };

inline constexpr std::size_t kErrorCategoryCount = 5;

std::string_view to_string(ErrorCategory category) noexcept;

struct Correction {
  std::string form;
  std::string system_lemma;
  std::string gold_lemma;
  std::size_t frequency = 0;
  bool non_lemma = false;  // system lemma is not a dictionary lemma

  friend bool operator==(const Correction&, const Correction&) = default;
};

struct ErrorAnalysis {
  /// Indexed by ErrorCategory. The four lemma categories are disjoint;
  /// TagError counts tag mismatches independently.
  std::array<std::size_t, kErrorCategoryCount> counts{};
  /// Lemma errors grouped by (form, system, gold), most frequent first,
  /// then by form.
  std::vector<Correction> corrections;

  std::size_t count(ErrorCategory c) const { return counts[static_cast<std::size_t>(c)]; }
  std::size_t lemma_errors() const;
};

/// Lemma error priority: NonLemma, SenseError, CasingError, OtherLemmaError.
/// With an empty dictionary nothing is classified NonLemma.
ErrorAnalysis categorize_errors(const MorphDict& dict, const std::vector<Sentence>& gold,
                                const std::vector<Sentence>& system);

struct SystemDiff {
  std::size_t fixed = 0;       // wrong in a, right in b
  std::size_t introduced = 0;  // right in a, wrong in b
  std::size_t both_wrong = 0;

  friend bool operator==(const SystemDiff&, const SystemDiff&) = default;
};

SystemDiff diff_systems(const std::vector<Sentence>& gold, const std::vector<Sentence>& a,
                        const std::vector<Sentence>& b, Field field);

struct SectionScore {
  double lemma_acc = 0.0;
  double pos_acc = 0.0;
  std::size_t tokens = 0;
};

SectionScore score_section(const std::vector<Sentence>& gold, const std::vector<Sentence>& system);

struct Reduction {
  double lemma = 0.0;
  double pos = 0.0;
};

struct EvalReport {
  std::map<std::string, SectionScore> sections;
  std::optional<Reduction> macro_avg;  // lemma/pos means over sections
  std::map<std::string, Reduction> error_reductions;
  std::map<std::string, std::array<SystemDiff, 2>> diffs;  // [lemma, pos]
  std::optional<std::array<BucketStats, kBucketCount>> buckets;
  std::optional<ErrorAnalysis> errors;

  std::string to_json(int indent = 2) const;
  std::string to_text() const;
};

}  // namespace dictag
