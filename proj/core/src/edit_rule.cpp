#include "dictag/edit_rule.hpp"

#include <charconv>

#include "dictag/error.hpp"
#include "dictag/unicode.hpp"

namespace dictag {

namespace {

bool is_cased(char32_t cp) { return unicode::is_upper(cp) || unicode::is_lower(cp); }

// Returns false when the casing cannot be imposed on a string of this length.
bool impose_casing(const Casing& casing, std::u32string& text) {
  switch (casing.kind) {
    case CasingKind::AllLower:
      for (auto& cp : text) cp = unicode::to_lower(cp);
      return true;
    case CasingKind::AllUpper:
      for (auto& cp : text) cp = unicode::to_upper(cp);
      return true;
    case CasingKind::FirstUpperRestLower: {
      bool first = true;
      for (auto& cp : text) {
        cp = unicode::to_lower(cp);
        if (first && is_cased(cp)) {
          cp = unicode::to_upper(cp);
          first = false;
        }
      }
      return true;
    }
    case CasingKind::Explicit:
      for (auto& cp : text) cp = unicode::to_lower(cp);
      for (const auto& r : casing.upper) {
        if (r.end > text.size()) return false;
        for (auto i = r.begin; i < r.end; ++i) text[i] = unicode::to_upper(text[i]);
      }
      return true;
  }
  return false;
}

struct CommonBlock {
  std::size_t form_start = 0;
  std::size_t lemma_start = 0;
  std::size_t length = 0;
};

CommonBlock longest_common_block(std::u32string_view f, std::u32string_view l) {
  CommonBlock best;
  // run[j] = length of the common run ending at f[i-1], l[j-1]
  std::vector<std::size_t> prev(l.size() + 1, 0), run(l.size() + 1, 0);
  for (std::size_t i = 1; i <= f.size(); ++i) {
    for (std::size_t j = 1; j <= l.size(); ++j) {
      run[j] = f[i - 1] == l[j - 1] ? prev[j - 1] + 1 : 0;
      const std::size_t len = run[j];
      if (len == 0) continue;
      const std::size_t fs = i - len;
      const std::size_t ls = j - len;
      if (len > best.length ||
          (len == best.length && (fs < best.form_start ||
                                  (fs == best.form_start && ls < best.lemma_start)))) {
        best = {fs, ls, len};
      }
    }
    std::swap(prev, run);
  }
  return best;
}

void escape_into(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '|': out += "\\p"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
}

[[noreturn]] void parse_fail(std::string_view encoded, const char* why) {
  throw Error(ErrorCode::ParseError,
              std::string("malformed edit rule (") + why + "): '" + std::string(encoded) + "'");
}

// Splits on unescaped '|' and unescapes each field.
std::vector<std::string> split_fields(std::string_view s) {
  std::vector<std::string> fields(1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\t' || c == '\n' || c == '\r') parse_fail(s, "control character");
    if (c == '|') {
      fields.emplace_back();
    } else if (c == '\\') {
      if (++i == s.size()) parse_fail(s, "dangling escape");
      switch (s[i]) {
        case '\\': fields.back() += '\\'; break;
        case 'p': fields.back() += '|'; break;
        case 't': fields.back() += '\t'; break;
        case 'n': fields.back() += '\n'; break;
        case 'r': fields.back() += '\r'; break;
        default: parse_fail(s, "unknown escape");
      }
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::uint32_t parse_count(std::string_view encoded, std::string_view field) {
  if (field.empty() || (field.size() > 1 && field[0] == '0')) parse_fail(encoded, "bad count");
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) parse_fail(encoded, "bad count");
  return value;
}

Casing parse_casing(std::string_view encoded, std::string_view field) {
  if (field == "l") return {CasingKind::AllLower, {}};
  if (field == "t") return {CasingKind::FirstUpperRestLower, {}};
  if (field == "u") return {CasingKind::AllUpper, {}};
  if (field.substr(0, 2) != "e:" || field.size() == 2) parse_fail(encoded, "bad casing");
  Casing casing{CasingKind::Explicit, {}};
  std::string_view rest = field.substr(2);
  while (true) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) parse_fail(encoded, "bad casing range");
    UpperRange r{parse_count(encoded, item.substr(0, dash)),
                 parse_count(encoded, item.substr(dash + 1))};
    if (r.begin >= r.end) parse_fail(encoded, "empty casing range");
    if (!casing.upper.empty() && casing.upper.back().end >= r.begin) {
      parse_fail(encoded, "casing ranges not canonical");
    }
    casing.upper.push_back(r);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return casing;
}

void append_casing(std::string& out, const Casing& casing) {
  switch (casing.kind) {
    case CasingKind::AllLower: out += 'l'; return;
    case CasingKind::FirstUpperRestLower: out += 't'; return;
    case CasingKind::AllUpper: out += 'u'; return;
    case CasingKind::Explicit:
      out += "e:";
      for (std::size_t i = 0; i < casing.upper.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(casing.upper[i].begin);
        out += '-';
        out += std::to_string(casing.upper[i].end);
      }
      return;
  }
}

}  // namespace

Casing casing_of(std::u32string_view lemma) {
  bool any_upper = false, any_lower = false;
  bool seen_cased = false, first_upper = false, rest_lower = true;
  for (char32_t cp : lemma) {
    const bool up = unicode::is_upper(cp);
    const bool low = unicode::is_lower(cp);
    any_upper |= up;
    any_lower |= low;
    if (!up && !low) continue;
    if (!seen_cased) {
      seen_cased = true;
      first_upper = up;
    } else if (up) {
      rest_lower = false;
    }
  }
  if (!any_upper) return {CasingKind::AllLower, {}};
  if (first_upper && rest_lower) return {CasingKind::FirstUpperRestLower, {}};
  if (!any_lower) return {CasingKind::AllUpper, {}};

  Casing casing{CasingKind::Explicit, {}};
  for (std::uint32_t i = 0; i < lemma.size(); ++i) {
    if (!unicode::is_upper(lemma[i])) continue;
    if (!casing.upper.empty() && casing.upper.back().end == i) {
      casing.upper.back().end = i + 1;
    } else {
      casing.upper.push_back({i, i + 1});
    }
  }
  return casing;
}

EditRule induce_rule(std::string_view form, const Lemma& lemma) {
  if (form.empty()) throw Error(ErrorCode::InvalidArgument, "cannot induce a rule for an empty form");
  const std::u32string f = unicode::lowercase(unicode::decode(form));
  const std::u32string lemma_cp = unicode::decode(lemma.raw());
  const std::u32string l = unicode::lowercase(lemma_cp);

  EditRule rule;
  rule.casing = casing_of(lemma_cp);
  const CommonBlock block = longest_common_block(f, l);
  if (block.length == 0) {
    rule.kind = EditRule::Kind::Absolute;
    rule.replacement = unicode::encode(l);
    return rule;
  }
  rule.kind = EditRule::Kind::Affix;
  rule.strip_prefix = static_cast<std::uint32_t>(block.form_start);
  rule.prefix_insert = unicode::encode(std::u32string_view(l).substr(0, block.lemma_start));
  rule.strip_suffix = static_cast<std::uint32_t>(f.size() - block.form_start - block.length);
  rule.suffix_insert =
      unicode::encode(std::u32string_view(l).substr(block.lemma_start + block.length));
  return rule;
}

std::optional<std::string> try_apply_rule(const EditRule& rule, std::u32string_view lowered_form) {
  std::u32string out;
  if (rule.kind == EditRule::Kind::Absolute) {
    out = unicode::decode(rule.replacement);
  } else {
    if (std::size_t{rule.strip_prefix} + rule.strip_suffix > lowered_form.size()) {
      return std::nullopt;
    }
    out = unicode::decode(rule.prefix_insert);
    out.append(lowered_form.substr(rule.strip_prefix,
                                   lowered_form.size() - rule.strip_prefix - rule.strip_suffix));
    out += unicode::decode(rule.suffix_insert);
  }
  if (!impose_casing(rule.casing, out)) return std::nullopt;
  return unicode::encode(out);
}

std::string apply_rule(const EditRule& rule, std::string_view form) {
  if (form.empty()) throw Error(ErrorCode::InvalidArgument, "cannot apply a rule to an empty form");
  const std::u32string lowered = unicode::lowercase(unicode::decode(form));
  auto result = try_apply_rule(rule, lowered);
  if (!result) {
    throw Error(ErrorCode::RuleNotApplicable,
                "rule " + to_string(rule) + " does not apply to '" + std::string(form) + "'");
  }
  return std::move(*result);
}

std::string to_string(const EditRule& rule) {
  std::string out;
  if (rule.kind == EditRule::Kind::Absolute) {
    out += "R|";
    escape_into(out, rule.replacement);
  } else {
    out += "A|";
    out += std::to_string(rule.strip_prefix);
    out += '|';
    escape_into(out, rule.prefix_insert);
    out += '|';
    out += std::to_string(rule.strip_suffix);
    out += '|';
    escape_into(out, rule.suffix_insert);
  }
  out += '|';
  append_casing(out, rule.casing);
  return out;
}

EditRule rule_from_string(std::string_view encoded) {
  if (!unicode::is_valid(encoded)) parse_fail(encoded, "invalid UTF-8");
  const auto fields = split_fields(encoded);
  EditRule rule;
  if (fields[0] == "A") {
    if (fields.size() != 6) parse_fail(encoded, "affix rule needs 6 fields");
    rule.kind = EditRule::Kind::Affix;
    rule.strip_prefix = parse_count(encoded, fields[1]);
    rule.prefix_insert = fields[2];
    rule.strip_suffix = parse_count(encoded, fields[3]);
    rule.suffix_insert = fields[4];
    rule.casing = parse_casing(encoded, fields[5]);
  } else if (fields[0] == "R") {
    if (fields.size() != 3) parse_fail(encoded, "absolute rule needs 3 fields");
    rule.kind = EditRule::Kind::Absolute;
    rule.replacement = fields[1];
    rule.casing = parse_casing(encoded, fields[2]);
  } else {
    parse_fail(encoded, "unknown rule kind");
  }
  return rule;
}

}  // namespace dictag
