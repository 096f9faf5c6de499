#include "dictag/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "dictag/error.hpp"
#include "dictag/unicode.hpp"

namespace dictag {

namespace {

struct Pair {
  const Token* gold;
  const Token* system;
};

std::vector<Pair> align(const std::vector<Sentence>& gold, const std::vector<Sentence>& system) {
  std::vector<Pair> out;
  std::size_t gi = 0, gs = 0, si = 0, ss = 0;
  auto advance = [](const std::vector<Sentence>& c, std::size_t& s, std::size_t& i) -> const Token* {
    while (s < c.size() && i >= c[s].tokens.size()) {
      ++s;
      i = 0;
    }
    if (s == c.size()) return nullptr;
    return &c[s].tokens[i++];
  };
  for (;;) {
    const Token* g = advance(gold, gs, gi);
    const Token* y = advance(system, ss, si);
    if (!g && !y) break;
    if (!g || !y) {
      throw Error(ErrorCode::AlignmentError,
                  "token counts differ (" + std::string(g ? "system" : "gold") + " ends early at token " +
                      std::to_string(out.size() + 1) + ")");
    }
    if (g->form != y->form) {
      throw Error(ErrorCode::AlignmentError, "form mismatch at token " + std::to_string(out.size() + 1) +
                                                 ": gold '" + g->form + "' vs system '" + y->form + "'");
    }
    out.push_back({g, y});
  }
  return out;
}

std::string lemma_key(const Token& t) {
  if (!t.lemma) return "_";
  try {
    return strip_comments(*t.lemma).raw();
  } catch (const Error&) {
    return *t.lemma;
  }
}

std::string tag_key(const Token& t) { return t.xpos ? t.xpos->value : "_"; }

bool correct(const Pair& p, Field field) {
  if (field == Field::Lemma) return lemma_key(*p.gold) == lemma_key(*p.system);
  return tag_key(*p.gold) == tag_key(*p.system);
}

double percent(std::size_t num, std::size_t den) {
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool right = false) {
  const std::size_t len = unicode::length(s);
  if (len >= width) return s;
  const std::string fill(width - len, ' ');
  return right ? fill + s : s + fill;
}

}  // namespace

double accuracy(const std::vector<Sentence>& gold, const std::vector<Sentence>& system, Field field) {
  const auto pairs = align(gold, system);
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no tokens to evaluate");
  const auto hits = std::count_if(pairs.begin(), pairs.end(), [&](const Pair& p) { return correct(p, field); });
  return percent(static_cast<std::size_t>(hits), pairs.size());
}

double error_reduction(double baseline_acc, double new_acc) {
  if (baseline_acc < 0.0 || baseline_acc > 100.0 || new_acc < 0.0 || new_acc > 100.0) {
    throw Error(ErrorCode::InvalidArgument, "accuracies must lie in [0, 100]");
  }
  if (baseline_acc == 100.0) throw Error(ErrorCode::DivisionByZero, "baseline accuracy is 100");
  const double base_err = 100.0 - baseline_acc;
  return 100.0 * (base_err - (100.0 - new_acc)) / base_err;
}

double macro_average(std::span<const double> accuracies) {
  if (accuracies.empty()) throw Error(ErrorCode::EmptyInput, "no sections to average");
  return std::accumulate(accuracies.begin(), accuracies.end(), 0.0) / static_cast<double>(accuracies.size());
}

std::string bucket_label(std::size_t bucket) {
  return bucket + 1 == kBucketCount ? std::to_string(bucket) + "+" : std::to_string(bucket);
}

std::array<BucketStats, kBucketCount> bucket_by_ambiguity(const MorphDict& dict,
                                                          const std::vector<Sentence>& gold,
                                                          const std::vector<Sentence>& system) {
  const auto pairs = align(gold, system);
  std::array<BucketStats, kBucketCount> out{};
  std::array<std::size_t, kBucketCount> pos_hits{}, lemma_hits{};
  for (const auto& p : pairs) {
    const std::size_t b = std::min(dict.ambiguity(p.gold->form), kBucketCount - 1);
    ++out[b].tokens;
    pos_hits[b] += correct(p, Field::Pos);
    lemma_hits[b] += correct(p, Field::Lemma);
  }
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    if (out[b].tokens == 0) continue;
    out[b].weight = percent(out[b].tokens, pairs.size());
    out[b].pos_acc = percent(pos_hits[b], out[b].tokens);
    out[b].lemma_acc = percent(lemma_hits[b], out[b].tokens);
  }
  return out;
}

std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::NonLemma: return "NonLemma";
    case ErrorCategory::SenseError: return "SenseError";
    case ErrorCategory::CasingError: return "CasingError";
    case ErrorCategory::OtherLemmaError: return "OtherLemmaError";
    case ErrorCategory::TagError: return "TagError";
  }
  return "?";
}

std::size_t ErrorAnalysis::lemma_errors() const {
  return count(ErrorCategory::NonLemma) + count(ErrorCategory::SenseError) +
         count(ErrorCategory::CasingError) + count(ErrorCategory::OtherLemmaError);
}

ErrorAnalysis categorize_errors(const MorphDict& dict, const std::vector<Sentence>& gold,
                                const std::vector<Sentence>& system) {
  const auto pairs = align(gold, system);
  ErrorAnalysis out;
  std::map<std::tuple<std::string, std::string, std::string>, Correction> grouped;
  for (const auto& p : pairs) {
    if (!correct(p, Field::Pos)) ++out.counts[static_cast<std::size_t>(ErrorCategory::TagError)];
    const std::string g = lemma_key(*p.gold);
    const std::string s = lemma_key(*p.system);
    if (g == s) continue;

    const bool non_lemma = !dict.empty() && !dict.is_known_lemma(s);
    ErrorCategory cat = ErrorCategory::OtherLemmaError;
    if (non_lemma) {
      cat = ErrorCategory::NonLemma;
    } else {
      std::optional<Lemma> gl, sl;
      try {
        gl = Lemma::from_raw(g);
        sl = Lemma::from_raw(s);
      } catch (const Error&) {
      }
      if (gl && sl && gl->proper() == sl->proper()) {
        cat = ErrorCategory::SenseError;
      } else if (unicode::is_valid(g) && unicode::is_valid(s) && unicode::lowercase(g) == unicode::lowercase(s)) {
        cat = ErrorCategory::CasingError;
      }
    }
    ++out.counts[static_cast<std::size_t>(cat)];

    auto& c = grouped[{p.gold->form, s, g}];
    if (c.frequency == 0) c = Correction{p.gold->form, s, g, 0, non_lemma};
    ++c.frequency;
  }
  for (auto& [_, c] : grouped) out.corrections.push_back(std::move(c));
  std::stable_sort(out.corrections.begin(), out.corrections.end(),
                   [](const Correction& a, const Correction& b) { return a.frequency > b.frequency; });
  return out;
}

SystemDiff diff_systems(const std::vector<Sentence>& gold, const std::vector<Sentence>& a,
                        const std::vector<Sentence>& b, Field field) {
  const auto pa = align(gold, a);
  const auto pb = align(gold, b);
  SystemDiff d;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const bool ok_a = correct(pa[i], field);
    const bool ok_b = correct(pb[i], field);
    if (!ok_a && ok_b) ++d.fixed;
    if (ok_a && !ok_b) ++d.introduced;
    if (!ok_a && !ok_b) ++d.both_wrong;
  }
  return d;
}

SectionScore score_section(const std::vector<Sentence>& gold, const std::vector<Sentence>& system) {
  const auto pairs = align(gold, system);
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no tokens to evaluate");
  std::size_t lemma = 0, pos = 0;
  for (const auto& p : pairs) {
    lemma += correct(p, Field::Lemma);
    pos += correct(p, Field::Pos);
  }
  return {percent(lemma, pairs.size()), percent(pos, pairs.size()), pairs.size()};
}

std::string EvalReport::to_json(int indent) const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["sections"] = ordered_json::object();
  for (const auto& [name, s] : sections) {
    j["sections"][name] = {{"lemma_acc", s.lemma_acc}, {"pos_acc", s.pos_acc}, {"tokens", s.tokens}};
  }
  j["macro_avg"] = macro_avg ? ordered_json{{"lemma_acc", macro_avg->lemma}, {"pos_acc", macro_avg->pos}}
                             : ordered_json(nullptr);
  j["error_reductions"] = ordered_json::object();
  for (const auto& [name, r] : error_reductions) j["error_reductions"][name] = {{"lemma", r.lemma}, {"pos", r.pos}};
  j["diffs"] = ordered_json::object();
  for (const auto& [name, d] : diffs) {
    auto one = [](const SystemDiff& x) {
      return ordered_json{{"fixed", x.fixed}, {"introduced", x.introduced}, {"both_wrong", x.both_wrong}};
    };
    j["diffs"][name] = {{"lemma", one(d[0])}, {"pos", one(d[1])}};
  }
  if (buckets) {
    ordered_json arr = ordered_json::array();
    for (std::size_t b = 0; b < kBucketCount; ++b) {
      const auto& s = (*buckets)[b];
      auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
      arr.push_back({{"analyses", bucket_label(b)},
                     {"tokens", s.tokens},
                     {"weight", s.weight},
                     {"pos_acc", opt(s.pos_acc)},
                     {"lemma_acc", opt(s.lemma_acc)}});
    }
    j["ambiguity_buckets"] = std::move(arr);
  } else {
    j["ambiguity_buckets"] = nullptr;
  }
  if (errors) {
    ordered_json counts = ordered_json::object();
    for (std::size_t c = 0; c < kErrorCategoryCount; ++c) {
      counts[std::string(to_string(static_cast<ErrorCategory>(c)))] = errors->counts[c];
    }
    ordered_json table = ordered_json::array();
    for (const auto& c : errors->corrections) {
      table.push_back({{"form", c.form},
                       {"system", c.system_lemma},
                       {"gold", c.gold_lemma},
                       {"frequency", c.frequency},
                       {"non_lemma", c.non_lemma}});
    }
    j["error_categories"] = std::move(counts);
    j["corrections"] = std::move(table);
  } else {
    j["error_categories"] = nullptr;
    j["corrections"] = nullptr;
  }
  return j.dump(indent);
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << pad("section", 24) << pad("tokens", 9, true) << pad("lemma", 9, true) << pad("pos", 9, true) << '\n';
  for (const auto& [name, s] : sections) {
    out << pad(name, 24) << pad(std::to_string(s.tokens), 9, true) << pad(fixed(s.lemma_acc), 9, true)
        << pad(fixed(s.pos_acc), 9, true) << '\n';
  }
  if (macro_avg) {
    out << pad("macro avg", 24) << pad("", 9) << pad(fixed(macro_avg->lemma), 9, true)
        << pad(fixed(macro_avg->pos), 9, true) << '\n';
  }
  for (const auto& [name, r] : error_reductions) {
    out << "\nerror reduction vs " << name << ": lemma " << fixed(r.lemma) << "%, pos " << fixed(r.pos) << "%\n";
    if (auto it = diffs.find(name); it != diffs.end()) {
      const auto& [l, p] = it->second;
      out << "  lemma: fixed " << l.fixed << ", introduced " << l.introduced << ", both wrong " << l.both_wrong
          << "\n  pos:   fixed " << p.fixed << ", introduced " << p.introduced << ", both wrong " << p.both_wrong
          << '\n';
    }
  }
  if (buckets) {
    out << '\n' << pad("analyses", 10) << pad("weight", 9, true) << pad("pos", 9, true) << pad("lemma", 9, true)
        << '\n';
    for (std::size_t b = 0; b < kBucketCount; ++b) {
      const auto& s = (*buckets)[b];
      out << pad(bucket_label(b), 10) << pad(fixed(s.weight), 9, true)
          << pad(s.pos_acc ? fixed(*s.pos_acc) : "-", 9, true)
          << pad(s.lemma_acc ? fixed(*s.lemma_acc) : "-", 9, true) << '\n';
    }
  }
  if (errors) {
    out << "\nerrors:";
    for (std::size_t c = 0; c < kErrorCategoryCount; ++c) {
      out << ' ' << to_string(static_cast<ErrorCategory>(c)) << '=' << errors->counts[c];
    }
    out << '\n';
    const std::size_t shown = std::min<std::size_t>(errors->corrections.size(), 20);
    if (shown) out << pad("form", 20) << pad("system", 20) << pad("gold", 20) << pad("freq", 6, true) << '\n';
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& c = errors->corrections[i];
      out << pad(c.form, 20) << pad(c.system_lemma + (c.non_lemma ? "*" : ""), 20) << pad(c.gold_lemma, 20)
          << pad(std::to_string(c.frequency), 6, true) << '\n';
    }
  }
  return out.str();
}

}  // namespace dictag
