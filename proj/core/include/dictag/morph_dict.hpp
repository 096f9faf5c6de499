#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dictag/lemma.hpp"

namespace dictag {

struct Analysis {
  Lemma lemma;
  Tag tag;

  /// Dictionary order: by tag, then by lemma.
  friend std::strong_ordering operator<=>(const Analysis& a, const Analysis& b) {
    if (auto c = a.tag <=> b.tag; c != 0) return c;
    return a.lemma <=> b.lemma;
  }
  friend bool operator==(const Analysis&, const Analysis&) = default;
};

enum class ColumnOrder { FormLemmaTag, LemmaTagForm };

/// Immutable form -> analyses map. Lookup is exact (case-sensitive).
class MorphDict {
 public:
  MorphDict() = default;

  std::span<const Analysis> lookup(std::string_view form) const;
  /// lookup(form), or lookup(lowercase(form)) when the exact form is unknown.
  std::span<const Analysis> lookup_lowercase_fallback(std::string_view form) const;
  std::size_t ambiguity(std::string_view form) const { return lookup(form).size(); }
  bool is_known_lemma(std::string_view lemma_raw) const;

  std::size_t form_count() const noexcept { return entries_.size(); }
  /// Number of (form, lemma, tag) triples.
  std::size_t entry_count() const noexcept { return entry_count_; }
  std::size_t lemma_count() const noexcept { return lemmas_.size(); }
  const std::string& source() const noexcept { return source_; }
  bool empty() const noexcept { return entries_.empty(); }

  /// Forms in lexicographic byte order, for deterministic iteration.
  std::vector<std::string_view> sorted_forms() const;

  friend bool operator==(const MorphDict& a, const MorphDict& b);

 private:
  friend class MorphDictBuilder;

  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  using EntryMap = std::unordered_map<std::string, std::vector<Analysis>, Hash, std::equal_to<>>;
  using LemmaSet = std::unordered_set<std::string, Hash, std::equal_to<>>;

  EntryMap entries_;
  LemmaSet lemmas_;
  std::size_t entry_count_ = 0;
  std::string source_;
};

class MorphDictBuilder {
 public:
  explicit MorphDictBuilder(std::string source = {}) : source_(std::move(source)) {}

  void add(std::string_view form, Lemma lemma, Tag tag);
  MorphDict build() &&;

 private:
  std::map<std::string, std::vector<Analysis>, std::less<>> entries_;
  std::string source_;
};

/// Reads the TAB-separated text format (three columns per line, blank lines
/// ignored). Lemmas go through strip_comments.
/// Throws FormatError(line) / EncodingError(line) / EmptyLemma(line).
MorphDict load_dictionary(const std::filesystem::path& path, ColumnOrder order);
MorphDict read_dictionary(std::istream& in, ColumnOrder order, std::string source = {});

/// Versioned binary cache:
///   "DTAGDICT" | u32 version | str source | u64 forms
///   { str form | u32 n | { str lemma | str tag } * n } * forms | u64 fnv1a
/// All integers little-endian, str = u32 length + bytes.
void save_binary(const MorphDict& dict, const std::filesystem::path& path);
void save_binary(const MorphDict& dict, std::ostream& out);
MorphDict load_binary(const std::filesystem::path& path);
MorphDict load_binary(std::istream& in);

/// Binary if the file starts with the binary magic, TSV otherwise.
MorphDict load_any_dictionary(const std::filesystem::path& path, ColumnOrder tsv_order);

inline constexpr std::uint32_t kDictFormatVersion = 1;

}  // namespace dictag
