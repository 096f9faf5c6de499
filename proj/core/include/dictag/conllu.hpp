#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dictag/lemma.hpp"

namespace dictag {

/// One syntactic word. Columns the toolkit does not model are carried
/// verbatim so that read -> write is byte-exact.
struct Token {
  std::uint32_t id = 0;
  std::string form;
  std::optional<std::string> lemma;  // "_" in the file
  std::string upos = "_";
  std::string feats = "_";
  std::optional<Tag> xpos;  // PDT-C tag lives here
  std::string head = "_";
  std::string deprel = "_";
  std::string deps = "_";
  std::string misc = "_";
};

/// A line that is kept but not interpreted: multiword token ranges,
/// empty nodes, stray comments. `position` is the number of regular tokens
/// that precede it.
struct PassthroughLine {
  std::size_t position = 0;
  std::string text;
};

struct Sentence {
  std::vector<std::string> comments;  // full lines including '#'
  std::vector<Token> tokens;
  std::vector<PassthroughLine> passthrough;

  std::vector<std::string> forms() const;
};

/// Streaming reader; one consumer per stream. Errors carry 1-based line
/// numbers (ColumnCountError, NonContiguousIds, EncodingError, ParseError).
class ConlluReader {
 public:
  explicit ConlluReader(std::istream& in) : in_(in) {}

  std::optional<Sentence> next();

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::vector<Sentence> read_conllu(std::istream& in);
std::vector<Sentence> read_conllu(const std::filesystem::path& path);
std::vector<Sentence> read_conllu_string(std::string_view text);

void write_conllu(std::ostream& out, const Sentence& sentence);
std::string write_conllu(const std::vector<Sentence>& sentences);

/// Rule-based segmenter/tokenizer.
///
/// Tokens are split on Unicode whitespace; punctuation is split off word
/// edges (a run of the same punctuation character stays one token). A
/// sentence ends after a ".", "!" or "?" token (optionally followed by
/// closing quotes/brackets) when whitespace and an uppercase letter or a
/// digit follow. Blank lines always end a sentence. A word listed in the
/// abbreviation set keeps its trailing period and never ends a sentence.
/// Tokens not followed by whitespace get "SpaceAfter=No" in MISC; the end
/// of the input counts as whitespace.
class Tokenizer {
 public:
  Tokenizer() = default;
  explicit Tokenizer(std::set<std::string, std::less<>> abbreviations)
      : abbreviations_(std::move(abbreviations)) {}

  /// One abbreviation per line; blank lines and '#' comments ignored.
  static Tokenizer from_file(const std::filesystem::path& path);

  std::vector<Sentence> tokenize(std::string_view text) const;

  const std::set<std::string, std::less<>>& abbreviations() const noexcept {
    return abbreviations_;
  }

 private:
  std::set<std::string, std::less<>> abbreviations_;
};

}  // namespace dictag
