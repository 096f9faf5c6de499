#include <fstream>

#include "dictag/conllu.hpp"
#include "dictag/error.hpp"
#include "dictag/unicode.hpp"

namespace dictag {

namespace {

struct RawToken {
  std::u32string form;
  bool space_after = true;
  bool paragraph_after = false;
};

bool is_terminal(std::u32string_view form) {
  if (form.empty()) return false;
  for (char32_t c : form) {
    if (c != U'.' && c != U'!' && c != U'?' && c != U'…') return false;
  }
  return true;
}

bool is_closing(std::u32string_view form) {
  static constexpr std::u32string_view kClosing = U")]}\"'”’»›“";
  return form.size() == 1 && kClosing.find(form[0]) != std::u32string_view::npos;
}

bool starts_sentence(std::u32string_view form) {
  return !form.empty() && (unicode::is_upper(form[0]) || unicode::is_digit(form[0]));
}

// Splits one whitespace-free chunk into tokens.
void split_chunk(std::u32string_view chunk, const std::set<std::string, std::less<>>& abbreviations,
                 std::vector<RawToken>& out) {
  const auto push_runs = [&out](std::u32string_view punct) {
    for (std::size_t i = 0; i < punct.size();) {
      std::size_t j = i + 1;
      while (j < punct.size() && punct[j] == punct[i]) ++j;
      out.push_back({std::u32string(punct.substr(i, j - i)), false, false});
      i = j;
    }
  };

  std::size_t lead = 0;
  while (lead < chunk.size() && unicode::is_punct(chunk[lead])) ++lead;
  push_runs(chunk.substr(0, lead));
  std::u32string_view rest = chunk.substr(lead);
  if (rest.empty()) return;

  // Longest abbreviation prefix followed only by punctuation.
  std::size_t word_end = 0;
  for (std::size_t k = rest.size(); k > 0; --k) {
    if (rest[k - 1] != U'.') continue;
    bool tail_punct = true;
    for (std::size_t i = k; i < rest.size(); ++i) tail_punct &= unicode::is_punct(rest[i]);
    if (tail_punct && abbreviations.count(unicode::encode(rest.substr(0, k)))) {
      word_end = k;
      break;
    }
  }
  if (word_end == 0) {
    word_end = rest.size();
    while (word_end > 0 && unicode::is_punct(rest[word_end - 1])) --word_end;
  }
  out.push_back({std::u32string(rest.substr(0, word_end)), false, false});
  push_runs(rest.substr(word_end));
}

}  // namespace

Tokenizer Tokenizer::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::set<std::string, std::less<>> abbreviations;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!unicode::is_valid(line)) throw Error(ErrorCode::EncodingError, "invalid UTF-8", line_no);
    abbreviations.insert(line);
  }
  return Tokenizer(std::move(abbreviations));
}

std::vector<Sentence> Tokenizer::tokenize(std::string_view text) const {
  const std::u32string input = unicode::decode(text);

  std::vector<RawToken> tokens;
  for (std::size_t i = 0; i < input.size();) {
    if (unicode::is_space(input[i])) {
      std::size_t newlines = 0;
      while (i < input.size() && unicode::is_space(input[i])) newlines += input[i++] == U'\n';
      if (!tokens.empty()) {
        tokens.back().space_after = true;
        tokens.back().paragraph_after |= newlines >= 2;
      }
      continue;
    }
    std::size_t j = i;
    while (j < input.size() && !unicode::is_space(input[j])) ++j;
    split_chunk(std::u32string_view(input).substr(i, j - i), abbreviations_, tokens);
    i = j;
  }
  if (!tokens.empty()) tokens.back().space_after = true;

  std::vector<Sentence> sentences;
  Sentence current;
  std::string text_line;
  const auto finish = [&] {
    if (current.tokens.empty()) return;
    current.comments.push_back("# text = " + text_line);
    sentences.push_back(std::move(current));
    current = Sentence{};
    text_line.clear();
  };

  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const RawToken& raw = tokens[k];
    Token t;
    t.id = static_cast<std::uint32_t>(current.tokens.size() + 1);
    t.form = unicode::encode(raw.form);
    if (!raw.space_after) t.misc = "SpaceAfter=No";
    text_line += t.form;
    current.tokens.push_back(std::move(t));

    bool boundary = raw.paragraph_after || k + 1 == tokens.size();
    if (!boundary && raw.space_after && starts_sentence(tokens[k + 1].form)) {
      // Walk back over closing quotes/brackets glued to a terminal token.
      std::size_t p = k;
      while (p > 0 && is_closing(tokens[p].form) && !tokens[p - 1].space_after) --p;
      boundary = is_terminal(tokens[p].form) &&
                 (p == k || is_closing(tokens[p + 1].form));
    }
    if (boundary) {
      finish();
    } else if (raw.space_after) {
      text_line += ' ';
    }
  }
  finish();
  return sentences;
}

}  // namespace dictag
