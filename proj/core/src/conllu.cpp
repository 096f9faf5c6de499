#include "dictag/conllu.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dictag/error.hpp"
#include "dictag/unicode.hpp"

namespace dictag {

namespace {

constexpr std::size_t kColumns = 10;

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  for (std::size_t start = 0;;) {
    const auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return cols;
}

std::optional<std::uint32_t> parse_id(std::string_view s) {
  if (s.empty() || s[0] == '0') return std::nullopt;
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::string> optional_column(std::string_view s) {
  if (s == "_") return std::nullopt;
  return std::string(s);
}

}  // namespace

std::vector<std::string> Sentence::forms() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.form);
  return out;
}

std::optional<Sentence> ConlluReader::next() {
  Sentence sentence;
  bool started = false;
  std::size_t first_line = 0;
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (line.empty()) {
      if (!started) continue;
      break;
    }
    if (!started) first_line = line_no_;
    started = true;
    if (!unicode::is_valid(line)) throw Error(ErrorCode::EncodingError, "invalid UTF-8", line_no_);

    if (line[0] == '#') {
      if (sentence.tokens.empty() && sentence.passthrough.empty()) {
        sentence.comments.push_back(line);
      } else {
        sentence.passthrough.push_back({sentence.tokens.size(), line});
      }
      continue;
    }

    const auto cols = split_tabs(line);
    if (cols.size() != kColumns) {
      throw Error(ErrorCode::ColumnCountError,
                  "expected 10 columns, found " + std::to_string(cols.size()), line_no_);
    }
    const std::string_view id = cols[0];
    const auto expected = static_cast<std::uint32_t>(sentence.tokens.size() + 1);
    if (const auto dash = id.find('-'); dash != std::string_view::npos) {
      const auto lo = parse_id(id.substr(0, dash));
      const auto hi = parse_id(id.substr(dash + 1));
      if (!lo || !hi || *lo != expected || *hi < *lo) {
        throw Error(ErrorCode::NonContiguousIds, "bad multiword token range " + std::string(id),
                    line_no_);
      }
      sentence.passthrough.push_back({sentence.tokens.size(), line});
      continue;
    }
    if (const auto dot = id.find('.'); dot != std::string_view::npos) {
      const auto major = id.substr(0, dot);
      const auto minor = parse_id(id.substr(dot + 1));
      const bool major_ok = major == "0" || parse_id(major) == sentence.tokens.size();
      if (!minor || !major_ok) {
        throw Error(ErrorCode::NonContiguousIds, "bad empty node id " + std::string(id), line_no_);
      }
      sentence.passthrough.push_back({sentence.tokens.size(), line});
      continue;
    }
    const auto parsed = parse_id(id);
    if (!parsed || *parsed != expected) {
      throw Error(ErrorCode::NonContiguousIds,
                  "expected id " + std::to_string(expected) + ", found '" + std::string(id) + "'",
                  line_no_);
    }
    if (cols[1].empty()) throw Error(ErrorCode::ParseError, "empty FORM", line_no_);

    Token t;
    t.id = *parsed;
    t.form = std::string(cols[1]);
    t.lemma = optional_column(cols[2]);
    t.upos = std::string(cols[3]);
    t.feats = std::string(cols[4]);
    if (cols[5] != "_") {
      if (cols[5].empty()) throw Error(ErrorCode::ParseError, "empty XPOS", line_no_);
      t.xpos = Tag{std::string(cols[5])};
    }
    t.head = std::string(cols[6]);
    t.deprel = std::string(cols[7]);
    t.deps = std::string(cols[8]);
    t.misc = std::string(cols[9]);
    sentence.tokens.push_back(std::move(t));
  }
  if (!started) return std::nullopt;
  if (sentence.tokens.empty()) {
    throw Error(ErrorCode::ParseError, "sentence has no tokens", first_line);
  }
  return sentence;
}

std::vector<Sentence> read_conllu(std::istream& in) {
  ConlluReader reader(in);
  std::vector<Sentence> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

std::vector<Sentence> read_conllu(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_conllu(in);
}

std::vector<Sentence> read_conllu_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_conllu(in);
}

void write_conllu(std::ostream& out, const Sentence& sentence) {
  for (const auto& c : sentence.comments) out << c << '\n';
  std::size_t extra = 0;
  const auto flush_extra = [&](std::size_t position) {
    while (extra < sentence.passthrough.size() && sentence.passthrough[extra].position <= position) {
      out << sentence.passthrough[extra].text << '\n';
      ++extra;
    }
  };
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    flush_extra(i);
    const Token& t = sentence.tokens[i];
    out << t.id << '\t' << t.form << '\t' << (t.lemma ? *t.lemma : "_") << '\t' << t.upos << '\t'
        << t.feats << '\t' << (t.xpos ? t.xpos->value : "_") << '\t' << t.head << '\t' << t.deprel
        << '\t' << t.deps << '\t' << t.misc << '\n';
  }
  flush_extra(sentence.tokens.size());
  out << '\n';
}

std::string write_conllu(const std::vector<Sentence>& sentences) {
  std::ostringstream out;
  for (const auto& s : sentences) write_conllu(out, s);
  return out.str();
}

}  // namespace dictag
