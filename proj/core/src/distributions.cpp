#include <cmath>
#include <functional>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "dictag/error.hpp"
#include "dictag/tagger.hpp"
#include "dictag/unicode.hpp"

namespace dictag {

namespace {

using nlohmann::json;

struct RawToken {
  std::size_t line;
  std::string form;
  std::vector<std::pair<std::string, double>> tags;
  std::vector<std::pair<std::string, double>> rules;
};

std::vector<std::pair<std::string, double>> parse_pairs(const json& obj, const char* key,
                                                        std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    throw Error(ErrorCode::ParseError, std::string("missing array \"") + key + "\"", line);
  }
  std::vector<std::pair<std::string, double>> out;
  std::set<std::string> seen;
  for (const auto& item : *it) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_number()) {
      throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" entries must be [label, probability]",
                  line);
    }
    const double p = item[1].get<double>();
    if (!std::isfinite(p)) throw Error(ErrorCode::ParseError, "non-finite probability", line);
    if (p < 0.0) throw Error(ErrorCode::NegativeProbability, "negative probability", line);
    auto label = item[0].get<std::string>();
    if (!seen.insert(label).second) {
      throw Error(ErrorCode::ParseError, "duplicate label '" + label + "'", line);
    }
    out.emplace_back(std::move(label), p);
  }
  return out;
}

std::vector<double> densify(const std::vector<std::pair<std::string, double>>& pairs,
                            std::size_t size, std::size_t line,
                            const std::function<std::optional<std::size_t>(const std::string&)>& index) {
  std::vector<double> out(size, 0.0);
  double sum = 0.0;
  for (const auto& [label, p] : pairs) {
    const auto i = index(label);
    if (!i) throw Error(ErrorCode::ParseError, "label '" + label + "' not in inventory", line);
    out[*i] = p;
    sum += p;
  }
  if (!(sum > 0.0)) throw Error(ErrorCode::ParseError, "probabilities sum to zero", line);
  for (auto& p : out) p /= sum;
  return out;
}

}  // namespace

ExternalDistributions load_external_distributions(std::istream& in,
                                                  std::shared_ptr<const Inventory> inventory) {
  std::vector<std::vector<RawToken>> raw;
  bool open = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      open = false;
      continue;
    }
    if (!unicode::is_valid(line)) throw Error(ErrorCode::EncodingError, "invalid UTF-8", line_no);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what(), line_no);
    }
    if (!obj.is_object()) throw Error(ErrorCode::ParseError, "expected a JSON object", line_no);
    const auto form = obj.find("form");
    if (form == obj.end() || !form->is_string() || form->get_ref<const std::string&>().empty()) {
      throw Error(ErrorCode::ParseError, "missing \"form\"", line_no);
    }
    RawToken tok{line_no, form->get<std::string>(), parse_pairs(obj, "tags", line_no),
                 parse_pairs(obj, "rules", line_no)};
    for (const auto& [encoded, _] : tok.rules) {
      try {
        rule_from_string(encoded);
      } catch (const Error& e) {
        throw Error(ErrorCode::UnknownRuleEncoding, e.what(), line_no);
      }
    }
    if (!open) raw.emplace_back();
    open = true;
    raw.back().push_back(std::move(tok));
  }

  if (!inventory) {
    std::vector<Tag> tags;
    std::vector<EditRule> rules;
    std::set<std::string> seen_tags, seen_rules;
    for (const auto& sentence : raw) {
      for (const auto& tok : sentence) {
        for (const auto& [t, _] : tok.tags) {
          if (seen_tags.insert(t).second) tags.push_back(Tag{t});
        }
        for (const auto& [r, _] : tok.rules) {
          if (seen_rules.insert(r).second) rules.push_back(rule_from_string(r));
        }
      }
    }
    inventory = std::make_shared<const Inventory>(std::move(tags), std::move(rules));
  }

  ExternalDistributions out;
  out.inventory = inventory;
  const auto tag_index = [&](const std::string& t) { return inventory->tag_index(t); };
  const auto rule_index = [&](const std::string& r) { return inventory->rule_index(r); };
  for (const auto& sentence : raw) {
    out.forms.emplace_back();
    out.sentences.emplace_back();
    for (const auto& tok : sentence) {
      out.forms.back().push_back(tok.form);
      out.sentences.back().push_back(TokenDistributions{
          inventory, densify(tok.tags, inventory->tags().size(), tok.line, tag_index),
          densify(tok.rules, inventory->rules().size(), tok.line, rule_index)});
    }
  }
  return out;
}

ExternalDistributions load_external_distributions(const std::filesystem::path& path,
                                                  std::shared_ptr<const Inventory> inventory) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return load_external_distributions(in, std::move(inventory));
}

void write_external_distributions(std::ostream& out,
                                  const std::vector<std::vector<std::string>>& forms,
                                  const std::vector<SentenceDistributions>& sentences) {
  if (forms.size() != sentences.size()) {
    throw Error(ErrorCode::LengthMismatch, "forms and distributions differ in sentence count");
  }
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (s) out << '\n';
    if (forms[s].size() != sentences[s].size()) {
      throw Error(ErrorCode::LengthMismatch, "forms and distributions differ in token count");
    }
    for (std::size_t i = 0; i < forms[s].size(); ++i) {
      const auto& d = sentences[s][i];
      json tags = json::array(), rules = json::array();
      for (std::size_t k = 0; k < d.tag_probs.size(); ++k) {
        if (d.tag_probs[k] > 0.0) tags.push_back({d.inventory->tags()[k].value, d.tag_probs[k]});
      }
      for (std::size_t k = 0; k < d.rule_probs.size(); ++k) {
        if (d.rule_probs[k] > 0.0) rules.push_back({d.inventory->rule_strings()[k], d.rule_probs[k]});
      }
      json obj = {{"form", forms[s][i]}, {"tags", std::move(tags)}, {"rules", std::move(rules)}};
      out << obj.dump() << '\n';
    }
  }
}

}  // namespace dictag
