#include "dictag/rescore.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "dictag/error.hpp"
#include "dictag/unicode.hpp"

namespace dictag {

std::string_view to_string(Fallback fallback) noexcept {
  switch (fallback) {
    case Fallback::NoValidPair: return "NoValidPair";
    case Fallback::AllZero: return "AllZero";
  }
  return "?";
}

namespace {

struct Candidate {
  double product;
  double tag_prob;
  double rule_prob;
};

// True when `a` ranks strictly above `b`. Dictionary order and rule index
// are handled by the caller iterating in that order.
bool ranks_above(const Candidate& a, const Candidate& b) {
  if (a.product != b.product) return a.product > b.product;
  if (a.tag_prob != b.tag_prob) return a.tag_prob > b.tag_prob;
  return a.rule_prob > b.rule_prob;
}

std::vector<ValidPair> collect_pairs(std::span<const Analysis> analyses,
                                     std::u32string_view lowered, const TokenDistributions& dists) {
  std::vector<ValidPair> pairs;
  if (analyses.empty()) return pairs;
  const Inventory& inv = *dists.inventory;

  std::vector<std::optional<std::size_t>> tag_ids(analyses.size());
  bool any_tag = false;
  for (std::size_t a = 0; a < analyses.size(); ++a) {
    tag_ids[a] = inv.tag_index(analyses[a].tag.value);
    any_tag |= tag_ids[a].has_value();
  }
  if (!any_tag) return pairs;

  // rule -> produced lemma, computed once per rule
  std::vector<std::optional<std::string>> produced(inv.rules().size());
  for (std::size_t r = 0; r < inv.rules().size(); ++r) produced[r] = try_apply_rule(inv.rules()[r], lowered);

  for (std::size_t a = 0; a < analyses.size(); ++a) {
    if (!tag_ids[a]) continue;
    const std::string& lemma = analyses[a].lemma.raw();
    for (std::size_t r = 0; r < produced.size(); ++r) {
      if (produced[r] && *produced[r] == lemma) pairs.push_back({*tag_ids[a], r, a});
    }
  }
  return pairs;
}

RescoredChoice make_choice(std::string_view form, const TokenDistributions& dists, std::size_t tag,
                           std::optional<std::size_t> rule, std::string lemma) {
  const Inventory& inv = *dists.inventory;
  RescoredChoice c;
  c.tag = inv.tags()[tag];
  c.tag_index = tag;
  c.rule_index = rule;
  if (rule) {
    c.rule = inv.rules()[*rule];
    c.score = dists.tag_probs[tag] * dists.rule_probs[*rule];
  } else {
    c.rule = EditRule::identity();
    c.rule.casing = casing_of(unicode::decode(form));
    c.score = 0.0;
  }
  c.lemma = std::move(lemma);
  return c;
}

}  // namespace

std::vector<ValidPair> valid_pairs(const MorphDict& dict, std::string_view form,
                                   const TokenDistributions& dists) {
  const auto analyses = dict.lookup(form);
  if (analyses.empty()) return {};
  return collect_pairs(analyses, unicode::lowercase(unicode::decode(form)), dists);
}

RescoredChoice unconstrained_choice(std::string_view form, const TokenDistributions& dists) {
  const Inventory& inv = *dists.inventory;
  if (inv.tags().empty()) throw Error(ErrorCode::InvalidArgument, "empty tag inventory");
  const std::size_t tag = dists.best_tag();
  const std::u32string lowered = unicode::lowercase(unicode::decode(form));

  std::vector<std::size_t> order(inv.rules().size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // stable: equal probabilities keep inventory order
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dists.rule_probs[a] > dists.rule_probs[b];
  });
  for (auto r : order) {
    if (auto lemma = try_apply_rule(inv.rules()[r], lowered)) {
      return make_choice(form, dists, tag, r, std::move(*lemma));
    }
  }
  return make_choice(form, dists, tag, std::nullopt, std::string(form));
}

RescoredChoice rescore_token(const MorphDict& dict, std::string_view form,
                             const TokenDistributions& dists) {
  const auto analyses = dict.lookup(form);
  if (analyses.empty()) return unconstrained_choice(form, dists);

  const std::u32string lowered = unicode::lowercase(unicode::decode(form));
  const auto pairs = collect_pairs(analyses, lowered, dists);
  if (pairs.empty()) {
    auto choice = unconstrained_choice(form, dists);
    choice.fallback = Fallback::NoValidPair;
    return choice;
  }

  std::size_t best = 0;
  Candidate best_key{};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double tp = dists.tag_probs[pairs[i].tag_index];
    const double rp = dists.rule_probs[pairs[i].rule_index];
    const Candidate key{tp * rp, tp, rp};
    if (i == 0 || ranks_above(key, best_key)) {
      best = i;
      best_key = key;
    }
  }
  const ValidPair& p = pairs[best];
  auto choice = make_choice(form, dists, p.tag_index, p.rule_index, analyses[p.analysis_index].lemma.raw());
  choice.constrained = true;
  if (best_key.product == 0.0) choice.fallback = Fallback::AllZero;
  return choice;
}

std::vector<RescoredChoice> rescore_sentence(const MorphDict& dict,
                                             std::span<const std::string> forms,
                                             std::span<const TokenDistributions> dists) {
  if (forms.size() != dists.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(forms.size()) + " forms but " +
                                               std::to_string(dists.size()) + " distributions");
  }
  std::vector<RescoredChoice> out;
  out.reserve(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) out.push_back(rescore_token(dict, forms[i], dists[i]));
  return out;
}

std::string candidate_table_json(const MorphDict& dict, std::string_view form,
                                 const TokenDistributions& dists) {
  using nlohmann::json;
  const Inventory& inv = *dists.inventory;
  const auto analyses = dict.lookup(form);
  const auto pairs = valid_pairs(dict, form, dists);

  double total = 0.0;
  for (const auto& p : pairs) total += dists.tag_probs[p.tag_index] * dists.rule_probs[p.rule_index];

  json candidates = json::array();
  for (const auto& p : pairs) {
    const double tp = dists.tag_probs[p.tag_index];
    const double rp = dists.rule_probs[p.rule_index];
    candidates.push_back({{"tag", inv.tags()[p.tag_index].value},
                          {"rule", inv.rule_strings()[p.rule_index]},
                          {"lemma", analyses[p.analysis_index].lemma.raw()},
                          {"tag_prob", tp},
                          {"rule_prob", rp},
                          {"product", tp * rp},
                          {"posterior", total > 0.0 ? tp * rp / total : 0.0}});
  }
  const auto choice = rescore_token(dict, form, dists);
  json selected = {{"tag", choice.tag.value},
                   {"rule", to_string(choice.rule)},
                   {"lemma", choice.lemma},
                   {"score", choice.score},
                   {"constrained", choice.constrained}};
  json out = {{"form", std::string(form)},
              {"ambiguity", analyses.size()},
              {"candidates", std::move(candidates)},
              {"selected", std::move(selected)},
              {"fallback", choice.fallback ? json(std::string(to_string(*choice.fallback))) : json(nullptr)}};
  return out.dump();
}

}  // namespace dictag
