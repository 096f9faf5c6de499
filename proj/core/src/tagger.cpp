#include "dictag/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "binary_io.hpp"
#include "dictag/error.hpp"
#include "dictag/unicode.hpp"

namespace dictag {

namespace {

constexpr std::string_view kModelMagic = "DTAGMODL";

char shape_class(char32_t cp) {
  if (unicode::is_upper(cp)) return 'X';
  if (unicode::is_lower(cp)) return 'x';
  if (unicode::is_digit(cp)) return 'd';
  if (unicode::is_punct(cp)) return 'p';
  return 'o';
}

std::string shape_of(std::u32string_view form) {
  std::string shape;
  for (char32_t cp : form) {
    const char c = shape_class(cp);
    if (shape.empty() || shape.back() != c) shape.push_back(c);
  }
  return shape;
}

// Averaged-perceptron parameter with lazy averaging.
struct Slot {
  std::uint32_t output;
  double weight = 0.0;
  double total = 0.0;
  std::uint64_t stamp = 0;
};

class PerceptronHead {
 public:
  explicit PerceptronHead(std::size_t outputs) : outputs_(outputs) {}

  void ensure_features(std::size_t n) {
    if (rows_.size() < n) rows_.resize(n);
  }

  std::size_t predict(std::span<const std::uint32_t> feats, std::vector<double>& scores) const {
    scores.assign(outputs_, 0.0);
    for (auto f : feats) {
      for (const auto& s : rows_[f]) scores[s.output] += s.weight;
    }
    return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
  }

  void update(std::span<const std::uint32_t> feats, std::uint32_t gold, std::uint32_t guess,
              std::uint64_t now) {
    for (auto f : feats) {
      bump(rows_[f], gold, 1.0, now);
      bump(rows_[f], guess, -1.0, now);
    }
  }

  /// Averaged weights per feature, zeros dropped, sorted by output.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> averaged(std::uint64_t now) const {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> out(rows_.size());
    for (std::size_t f = 0; f < rows_.size(); ++f) {
      for (const auto& s : rows_[f]) {
        const double total = s.total + static_cast<double>(now - s.stamp) * s.weight;
        const double avg = now ? total / static_cast<double>(now) : 0.0;
        if (avg != 0.0) out[f].emplace_back(s.output, avg);
      }
      std::sort(out[f].begin(), out[f].end());
    }
    return out;
  }

 private:
  static void bump(std::vector<Slot>& row, std::uint32_t output, double delta, std::uint64_t now) {
    auto it = std::find_if(row.begin(), row.end(), [&](const Slot& s) { return s.output == output; });
    if (it == row.end()) {
      row.push_back(Slot{output, 0.0, 0.0, now});
      it = row.end() - 1;
    }
    it->total += static_cast<double>(now - it->stamp) * it->weight;
    it->stamp = now;
    it->weight += delta;
  }

  std::size_t outputs_;
  std::vector<std::vector<Slot>> rows_;
};

struct GoldToken {
  std::vector<std::uint32_t> features;
  std::uint32_t tag;
  std::uint32_t rule;
};

std::string describe(std::size_t sentence, std::size_t token) {
  return "sentence " + std::to_string(sentence + 1) + ", token " + std::to_string(token + 1);
}

}  // namespace

Inventory::Inventory(std::vector<Tag> tags, std::vector<EditRule> rules) : tags_(std::move(tags)) {
  std::sort(tags_.begin(), tags_.end());
  tags_.erase(std::unique(tags_.begin(), tags_.end()), tags_.end());

  std::vector<std::pair<std::string, EditRule>> keyed;
  keyed.reserve(rules.size());
  for (auto& r : rules) keyed.emplace_back(to_string(r), std::move(r));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  for (auto& [s, r] : keyed) {
    rule_strings_.push_back(std::move(s));
    rules_.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < tags_.size(); ++i) tag_ids_.emplace(tags_[i].value, i);
  for (std::size_t i = 0; i < rule_strings_.size(); ++i) rule_ids_.emplace(rule_strings_[i], i);
}

std::optional<std::size_t> Inventory::tag_index(std::string_view tag) const {
  const auto it = tag_ids_.find(std::string(tag));
  if (it == tag_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Inventory::rule_index(std::string_view encoded) const {
  const auto it = rule_ids_.find(std::string(encoded));
  if (it == rule_ids_.end()) return std::nullopt;
  return it->second;
}

double TokenDistributions::tag_prob(std::string_view tag) const {
  const auto i = inventory->tag_index(tag);
  return i ? tag_probs[*i] : 0.0;
}

double TokenDistributions::rule_prob(const EditRule& rule) const {
  const auto i = inventory->rule_index(rule);
  return i ? rule_probs[*i] : 0.0;
}

std::size_t TokenDistributions::best_tag() const {
  return static_cast<std::size_t>(std::max_element(tag_probs.begin(), tag_probs.end()) -
                                  tag_probs.begin());
}

std::vector<double> softmax(std::span<const double> scores, double temperature) {
  if (!(temperature > 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be positive");
  std::vector<double> out(scores.size());
  if (scores.empty()) return out;
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp((scores[i] - top) / temperature);
    sum += out[i];
  }
  for (auto& p : out) p /= sum;
  return out;
}

std::uint64_t corpus_fingerprint(const std::vector<Sentence>& corpus) {
  std::uint64_t h = detail::kFnvOffset;
  for (const auto& s : corpus) {
    for (const auto& t : s.tokens) {
      h = detail::fnv1a(t.form, h);
      h = detail::fnv1a("\t", h);
      h = detail::fnv1a(t.lemma ? *t.lemma : "_", h);
      h = detail::fnv1a("\t", h);
      h = detail::fnv1a(t.xpos ? t.xpos->value : "_", h);
      h = detail::fnv1a("\n", h);
    }
    h = detail::fnv1a("\n", h);
  }
  return h;
}

std::vector<std::string> extract_features(std::span<const std::string> forms, std::size_t i) {
  const std::u32string word = unicode::decode(forms[i]);
  const std::u32string lower = unicode::lowercase(word);
  const std::string lower8 = unicode::encode(lower);

  std::vector<std::string> f;
  f.reserve(17);
  f.emplace_back("b");
  f.push_back("w=" + forms[i]);
  f.push_back("l=" + lower8);
  for (std::size_t k = 1; k <= 4 && k <= lower.size(); ++k) {
    f.push_back("p" + std::to_string(k) + "=" + unicode::encode(std::u32string_view(lower).substr(0, k)));
    f.push_back("s" + std::to_string(k) + "=" +
                unicode::encode(std::u32string_view(lower).substr(lower.size() - k)));
  }
  f.push_back("sh=" + shape_of(word));
  const auto context = [&](std::ptrdiff_t offset) -> std::string {
    const auto j = static_cast<std::ptrdiff_t>(i) + offset;
    if (j < 0) return "<s>";
    if (j >= static_cast<std::ptrdiff_t>(forms.size())) return "</s>";
    return unicode::lowercase(forms[static_cast<std::size_t>(j)]);
  };
  f.push_back("l-2=" + context(-2));
  f.push_back("l-1=" + context(-1));
  f.push_back("l+1=" + context(1));
  f.push_back("l+2=" + context(2));
  return f;
}

TaggerModel TaggerModel::train(const std::vector<Sentence>& corpus, const TrainOptions& options) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "training corpus is empty");
  if (options.epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");

  // Gold annotations and inventories.
  std::vector<std::vector<std::pair<std::string, std::string>>> gold(corpus.size());
  std::set<std::string> tag_set;
  std::vector<EditRule> rule_list;
  std::set<std::string> rule_seen;
  std::uint64_t token_count = 0;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const auto& tokens = corpus[s].tokens;
    if (tokens.empty()) throw Error(ErrorCode::CorpusFormatError, "empty sentence " + std::to_string(s + 1));
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const Token& tok = tokens[t];
      if (!tok.lemma || !tok.xpos) {
        throw Error(ErrorCode::CorpusFormatError, "missing gold lemma or tag at " + describe(s, t));
      }
      EditRule rule;
      try {
        rule = induce_rule(tok.form, strip_comments(*tok.lemma));
      } catch (const Error& e) {
        throw Error(ErrorCode::CorpusFormatError, describe(s, t) + ": " + e.what());
      }
      std::string encoded = to_string(rule);
      if (rule_seen.insert(encoded).second) rule_list.push_back(std::move(rule));
      tag_set.insert(tok.xpos->value);
      gold[s].emplace_back(tok.xpos->value, std::move(encoded));
      ++token_count;
    }
  }
  std::vector<Tag> tags;
  for (const auto& t : tag_set) tags.push_back(Tag{t});
  auto inventory = std::make_shared<const Inventory>(std::move(tags), std::move(rule_list));

  // Feature interning; ids follow first occurrence in corpus order.
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::string> names;
  std::vector<std::vector<GoldToken>> data(corpus.size());
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const auto forms = corpus[s].forms();
    for (std::size_t t = 0; t < forms.size(); ++t) {
      GoldToken g;
      for (auto& name : extract_features(forms, t)) {
        auto [it, inserted] = ids.emplace(name, static_cast<std::uint32_t>(names.size()));
        if (inserted) names.push_back(std::move(name));
        g.features.push_back(it->second);
      }
      g.tag = static_cast<std::uint32_t>(*inventory->tag_index(gold[s][t].first));
      g.rule = static_cast<std::uint32_t>(*inventory->rule_index(gold[s][t].second));
      data[s].push_back(std::move(g));
    }
  }

  PerceptronHead tag_head(inventory->tags().size());
  PerceptronHead rule_head(inventory->rules().size());
  tag_head.ensure_features(names.size());
  rule_head.ensure_features(names.size());

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> scores;
  std::uint64_t now = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    // Fisher-Yates with the raw engine output: portable across standard
    // libraries, unlike std::shuffle.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
    }
    for (auto s : order) {
      for (const auto& tok : data[s]) {
        const auto tag_guess = static_cast<std::uint32_t>(tag_head.predict(tok.features, scores));
        if (tag_guess != tok.tag) tag_head.update(tok.features, tok.tag, tag_guess, now);
        const auto rule_guess = static_cast<std::uint32_t>(rule_head.predict(tok.features, scores));
        if (rule_guess != tok.rule) rule_head.update(tok.features, tok.rule, rule_guess, now);
        ++now;
      }
    }
  }

  const auto tag_weights = tag_head.averaged(now);
  const auto rule_weights = rule_head.averaged(now);

  TaggerModel model;
  model.inventory_ = std::move(inventory);
  std::vector<std::uint32_t> by_name(names.size());
  std::iota(by_name.begin(), by_name.end(), 0u);
  std::sort(by_name.begin(), by_name.end(),
            [&](std::uint32_t a, std::uint32_t b) { return names[a] < names[b]; });
  for (auto id : by_name) {
    if (tag_weights[id].empty() && rule_weights[id].empty()) continue;
    FeatureRow row;
    for (const auto& [o, w] : tag_weights[id]) row.tags.push_back({o, w});
    for (const auto& [o, w] : rule_weights[id]) row.rules.push_back({o, w});
    model.feature_ids_.emplace(names[id], static_cast<std::uint32_t>(model.features_.size()));
    model.features_.push_back(names[id]);
    model.rows_.push_back(std::move(row));
  }
  model.metadata_ = TrainingMetadata{options.epochs, options.seed, corpus_fingerprint(corpus),
                                     corpus.size(), token_count};
  return model;
}

void TaggerModel::score(std::span<const std::string> feats, std::vector<double>& tag_scores,
                        std::vector<double>& rule_scores) const {
  tag_scores.assign(inventory_->tags().size(), 0.0);
  rule_scores.assign(inventory_->rules().size(), 0.0);
  for (const auto& name : feats) {
    const auto it = feature_ids_.find(name);
    if (it == feature_ids_.end()) continue;
    const FeatureRow& row = rows_[it->second];
    for (const auto& w : row.tags) tag_scores[w.output] += w.value;
    for (const auto& w : row.rules) rule_scores[w.output] += w.value;
  }
}

SentenceDistributions TaggerModel::predict(std::span<const std::string> forms,
                                           double temperature) const {
  SentenceDistributions out;
  out.reserve(forms.size());
  std::vector<double> tag_scores, rule_scores;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    score(extract_features(forms, i), tag_scores, rule_scores);
    out.push_back(TokenDistributions{inventory_, softmax(tag_scores, temperature),
                                     softmax(rule_scores, temperature)});
  }
  return out;
}

void TaggerModel::save(std::ostream& out) const {
  detail::BinaryWriter w(out);
  w.raw(kModelMagic);
  w.integer<std::uint32_t>(kModelFormatVersion);
  w.integer<std::int32_t>(metadata_.epochs);
  w.integer<std::uint64_t>(metadata_.seed);
  w.integer<std::uint64_t>(metadata_.corpus_fingerprint);
  w.integer<std::uint64_t>(metadata_.sentences);
  w.integer<std::uint64_t>(metadata_.tokens);
  w.integer<std::uint32_t>(static_cast<std::uint32_t>(inventory_->tags().size()));
  for (const auto& t : inventory_->tags()) w.string(t.value);
  w.integer<std::uint32_t>(static_cast<std::uint32_t>(inventory_->rules().size()));
  for (const auto& r : inventory_->rule_strings()) w.string(r);
  w.integer<std::uint64_t>(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) {
    w.string(features_[i]);
    for (const auto* weights : {&rows_[i].tags, &rows_[i].rules}) {
      w.integer<std::uint32_t>(static_cast<std::uint32_t>(weights->size()));
      for (const auto& x : *weights) {
        w.integer<std::uint32_t>(x.output);
        w.real(x.value);
      }
    }
  }
  w.trailer();
  w.check();
}

void TaggerModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  save(out);
}

std::string TaggerModel::serialize() const {
  std::ostringstream out(std::ios::binary);
  save(out);
  return out.str();
}

TaggerModel TaggerModel::load(std::istream& in) {
  detail::BinaryReader r(in);
  if (r.raw(kModelMagic.size()) != kModelMagic) throw Error(ErrorCode::CorruptFile, "not a model file");
  const auto version = r.integer<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::VersionMismatch, "model format version " + std::to_string(version) +
                                                ", expected " + std::to_string(kModelFormatVersion));
  }
  TaggerModel model;
  model.metadata_.epochs = r.integer<std::int32_t>();
  model.metadata_.seed = r.integer<std::uint64_t>();
  model.metadata_.corpus_fingerprint = r.integer<std::uint64_t>();
  model.metadata_.sentences = r.integer<std::uint64_t>();
  model.metadata_.tokens = r.integer<std::uint64_t>();

  std::vector<Tag> tags(r.integer<std::uint32_t>());
  for (auto& t : tags) t.value = r.string();
  std::vector<EditRule> rules(r.integer<std::uint32_t>());
  try {
    for (auto& rule : rules) rule = rule_from_string(r.string());
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptFile, e.what());
  }
  const std::size_t tag_count = tags.size(), rule_count = rules.size();
  model.inventory_ = std::make_shared<const Inventory>(std::move(tags), std::move(rules));
  if (model.inventory_->tags().size() != tag_count || model.inventory_->rules().size() != rule_count) {
    throw Error(ErrorCode::CorruptFile, "duplicate inventory entries");
  }

  const auto features = r.integer<std::uint64_t>();
  for (std::uint64_t i = 0; i < features; ++i) {
    std::string name = r.string();
    FeatureRow row;
    for (auto [weights, limit] : {std::pair{&row.tags, tag_count}, std::pair{&row.rules, rule_count}}) {
      const auto n = r.integer<std::uint32_t>();
      if (n > limit) throw Error(ErrorCode::CorruptFile, "weight row too long");
      for (std::uint32_t k = 0; k < n; ++k) {
        const auto output = r.integer<std::uint32_t>();
        const double value = r.real();
        if (output >= limit) throw Error(ErrorCode::CorruptFile, "output index out of range");
        weights->push_back({output, value});
      }
    }
    if (!model.feature_ids_.emplace(name, static_cast<std::uint32_t>(i)).second) {
      throw Error(ErrorCode::CorruptFile, "duplicate feature");
    }
    model.features_.push_back(std::move(name));
    model.rows_.push_back(std::move(row));
  }
  r.trailer();
  return model;
}

TaggerModel TaggerModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return load(in);
}

}  // namespace dictag
