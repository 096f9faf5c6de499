#include "dictag/morph_dict.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "binary_io.hpp"
#include "dictag/error.hpp"
#include "dictag/unicode.hpp"

namespace dictag {

namespace {

constexpr std::string_view kMagic = "DTAGDICT";

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

}  // namespace

std::span<const Analysis> MorphDict::lookup(std::string_view form) const {
  const auto it = entries_.find(form);
  if (it == entries_.end()) return {};
  return it->second;
}

std::span<const Analysis> MorphDict::lookup_lowercase_fallback(std::string_view form) const {
  auto exact = lookup(form);
  if (!exact.empty() || !unicode::is_valid(form)) return exact;
  return lookup(unicode::lowercase(form));
}

bool MorphDict::is_known_lemma(std::string_view lemma_raw) const {
  return lemmas_.find(lemma_raw) != lemmas_.end();
}

std::vector<std::string_view> MorphDict::sorted_forms() const {
  std::vector<std::string_view> forms;
  forms.reserve(entries_.size());
  for (const auto& [form, _] : entries_) forms.push_back(form);
  std::sort(forms.begin(), forms.end());
  return forms;
}

bool operator==(const MorphDict& a, const MorphDict& b) {
  return a.source_ == b.source_ && a.entry_count_ == b.entry_count_ && a.entries_ == b.entries_ &&
         a.lemmas_ == b.lemmas_;
}

void MorphDictBuilder::add(std::string_view form, Lemma lemma, Tag tag) {
  if (form.empty()) throw Error(ErrorCode::FormatError, "empty form");
  auto it = entries_.find(form);
  if (it == entries_.end()) it = entries_.emplace(std::string(form), std::vector<Analysis>{}).first;
  it->second.push_back(Analysis{std::move(lemma), std::move(tag)});
}

MorphDict MorphDictBuilder::build() && {
  MorphDict dict;
  dict.source_ = std::move(source_);
  dict.entries_.reserve(entries_.size());
  for (auto& [form, analyses] : entries_) {
    std::sort(analyses.begin(), analyses.end());
    analyses.erase(std::unique(analyses.begin(), analyses.end()), analyses.end());
    dict.entry_count_ += analyses.size();
    for (const auto& a : analyses) dict.lemmas_.insert(a.lemma.raw());
    dict.entries_.emplace(form, std::move(analyses));
  }
  entries_.clear();
  return dict;
}

MorphDict read_dictionary(std::istream& in, ColumnOrder order, std::string source) {
  MorphDictBuilder builder(std::move(source));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!unicode::is_valid(line)) throw Error(ErrorCode::EncodingError, "invalid UTF-8", line_no);

    std::vector<std::string_view> cols;
    for (std::size_t start = 0;;) {
      const auto tab = line.find('\t', start);
      cols.push_back(std::string_view(line).substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 3) {
      throw Error(ErrorCode::FormatError, "expected 3 TAB-separated columns", line_no);
    }
    const auto [form, lemma, tag] = order == ColumnOrder::FormLemmaTag
                                        ? std::tuple{cols[0], cols[1], cols[2]}
                                        : std::tuple{cols[2], cols[0], cols[1]};
    if (form.empty() || tag.empty()) throw Error(ErrorCode::FormatError, "empty column", line_no);
    try {
      builder.add(form, strip_comments(lemma), Tag{std::string(tag)});
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), line_no);
    }
  }
  return std::move(builder).build();
}

MorphDict load_dictionary(const std::filesystem::path& path, ColumnOrder order) {
  auto in = open_input(path);
  return read_dictionary(in, order, path.filename().string());
}

void save_binary(const MorphDict& dict, std::ostream& out) {
  detail::BinaryWriter w(out);
  w.raw(kMagic);
  w.integer<std::uint32_t>(kDictFormatVersion);
  w.string(dict.source());
  const auto forms = dict.sorted_forms();
  w.integer<std::uint64_t>(forms.size());
  for (auto form : forms) {
    w.string(form);
    const auto analyses = dict.lookup(form);
    w.integer<std::uint32_t>(static_cast<std::uint32_t>(analyses.size()));
    for (const auto& a : analyses) {
      w.string(a.lemma.raw());
      w.string(a.tag.value);
    }
  }
  w.trailer();
  w.check();
}

void save_binary(const MorphDict& dict, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  save_binary(dict, out);
}

MorphDict load_binary(std::istream& in) {
  detail::BinaryReader r(in);
  if (r.raw(kMagic.size()) != kMagic) throw Error(ErrorCode::CorruptFile, "not a dictionary file");
  const auto version = r.integer<std::uint32_t>();
  if (version != kDictFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "dictionary format version " + std::to_string(version) + ", expected " +
                    std::to_string(kDictFormatVersion));
  }
  MorphDictBuilder builder(r.string());
  const auto forms = r.integer<std::uint64_t>();
  std::string previous;
  for (std::uint64_t i = 0; i < forms; ++i) {
    std::string form = r.string();
    if (form.empty() || (i > 0 && form <= previous)) {
      throw Error(ErrorCode::CorruptFile, "forms out of order");
    }
    const auto n = r.integer<std::uint32_t>();
    for (std::uint32_t k = 0; k < n; ++k) {
      std::string lemma = r.string();
      std::string tag = r.string();
      try {
        builder.add(form, Lemma::from_raw(lemma), Tag::make(tag));
      } catch (const Error& e) {
        throw Error(ErrorCode::CorruptFile, e.what());
      }
    }
    previous = std::move(form);
  }
  r.trailer();
  return std::move(builder).build();
}

MorphDict load_binary(const std::filesystem::path& path) {
  auto in = open_input(path, std::ios::binary);
  return load_binary(in);
}

MorphDict load_any_dictionary(const std::filesystem::path& path, ColumnOrder tsv_order) {
  auto in = open_input(path, std::ios::binary);
  std::string head(kMagic.size(), '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  const bool binary = static_cast<std::size_t>(in.gcount()) == head.size() && head == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? load_binary(in) : read_dictionary(in, tsv_order, path.filename().string());
}

}  // namespace dictag
