#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "dictag/error.hpp"
#include "dictag/tagger.hpp"
#include "fixtures.hpp"

using namespace dictag;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected dictag::Error");
  return ErrorCode::InvalidArgument;
}

std::optional<std::size_t> line_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.line();
  }
  return std::nullopt;
}

const std::vector<Sentence>& train_corpus() {
  static const auto corpus = read_conllu(testing::data("train.conllu"));
  return corpus;
}

const TaggerModel& trained() {
  static const auto model = TaggerModel::train(train_corpus(), {10, 3});
  return model;
}

ExternalDistributions parse(const std::string& text, std::shared_ptr<const Inventory> inv = nullptr) {
  std::istringstream in(text);
  return load_external_distributions(in, std::move(inv));
}

}  // namespace

TEST_CASE("softmax") {
  const std::vector<double> scores{1.0, 2.0, 3.0};
  const auto p = softmax(scores);
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
  CHECK(p[2] == doctest::Approx(std::exp(3.0) / (std::exp(1.0) + std::exp(2.0) + std::exp(3.0))));
  const std::vector<double> huge{1000.0, 1000.0};
  CHECK(softmax(huge)[0] == doctest::Approx(0.5));
  const auto sharp = softmax(scores, 0.1);
  CHECK(sharp[2] > p[2]);
  CHECK(code_of([&] { softmax(scores, 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(softmax(std::vector<double>{}).empty());
}

TEST_CASE("inventory is canonical") {
  const Inventory inv({Tag{"B"}, Tag{"A"}, Tag{"B"}},
                      {rule_from_string("A|0||1|a|l"), rule_from_string("A|0||0||l"), rule_from_string("A|0||1|a|l")});
  CHECK(inv.tags().size() == 2);
  CHECK(inv.tags()[0].value == "A");
  CHECK(inv.rules().size() == 2);
  CHECK(inv.rule_strings()[0] == "A|0||0||l");
  CHECK(inv.rule_index("A|0||1|a|l") == 1u);
  CHECK(inv.tag_index("C") == std::nullopt);
}

TEST_CASE("feature template") {
  const std::vector<std::string> forms{"Pes", "štěkal", "."};
  const auto f = extract_features(forms, 1);
  auto has = [&](const std::string& x) { return std::find(f.begin(), f.end(), x) != f.end(); };
  CHECK(has("w=štěkal"));
  CHECK(has("s2=al"));
  CHECK(has("p1=š"));
  CHECK(has("l-1=pes"));
  CHECK(has("l+1=."));
  CHECK(has("l+2=</s>"));
  CHECK(has("l-2=<s>"));
  const auto first = extract_features(forms, 0);
  CHECK(std::find(first.begin(), first.end(), "sh=Xx") != first.end());
}

TEST_CASE("training errors") {
  CHECK(code_of([] { TaggerModel::train({}, {}); }) == ErrorCode::EmptyCorpus);
  CHECK(code_of([] { TaggerModel::train(train_corpus(), {0, 1}); }) == ErrorCode::InvalidArgument);
  auto broken = read_conllu_string("1\tpes\t_\t_\t_\tNNMS1-----A----\t_\t_\t_\t_\n\n");
  CHECK(code_of([&] { TaggerModel::train(broken, {}); }) == ErrorCode::CorpusFormatError);
}

TEST_CASE("training fits the fixture and is deterministic") {
  const auto& model = trained();
  std::size_t total = 0, tag_ok = 0;
  for (const auto& s : train_corpus()) {
    const auto forms = s.forms();
    const auto dists = model.predict(forms);
    REQUIRE(dists.size() == forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i) {
      ++total;
      const auto& d = dists[i];
      CHECK(std::accumulate(d.tag_probs.begin(), d.tag_probs.end(), 0.0) == doctest::Approx(1.0));
      CHECK(std::accumulate(d.rule_probs.begin(), d.rule_probs.end(), 0.0) == doctest::Approx(1.0));
      tag_ok += model.inventory()->tags()[d.best_tag()] == *s.tokens[i].xpos;
    }
  }
  CHECK(100.0 * tag_ok / total >= 99.0);
  CHECK(model.metadata().seed == 3);
  CHECK(model.metadata().sentences == train_corpus().size());
  CHECK(model.metadata().corpus_fingerprint == corpus_fingerprint(train_corpus()));

  CHECK(TaggerModel::train(train_corpus(), {10, 3}).serialize() == model.serialize());
  CHECK(TaggerModel::train(train_corpus(), {10, 4}).serialize() != model.serialize());
}

TEST_CASE("model files round-trip") {
  const auto& model = trained();
  const auto bytes = model.serialize();
  std::istringstream in(bytes);
  const auto back = TaggerModel::load(in);
  CHECK(back.serialize() == bytes);
  CHECK(back.metadata() == model.metadata());
  const std::vector<std::string> forms{"Velký", "neznámý", "hrad", "."};
  const auto a = model.predict(forms), b = back.predict(forms);
  for (std::size_t i = 0; i < forms.size(); ++i) {
    CHECK(a[i].tag_probs == b[i].tag_probs);
    CHECK(a[i].rule_probs == b[i].rule_probs);
  }

  auto load_bytes = [](std::string s) {
    std::istringstream is(s);
    return TaggerModel::load(is);
  };
  auto bad_version = bytes;
  bad_version[8] = 9;
  CHECK(code_of([&] { load_bytes(bad_version); }) == ErrorCode::VersionMismatch);
  auto flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x20;
  CHECK(code_of([&] { load_bytes(flipped); }) == ErrorCode::CorruptFile);
  CHECK(code_of([&] { load_bytes(bytes.substr(0, 100)); }) == ErrorCode::CorruptFile);
  CHECK(code_of([&] { load_bytes("DTAGDICT"); }) == ErrorCode::CorruptFile);
}

TEST_CASE("temperature changes sharpness, not the argmax") {
  const std::vector<std::string> forms{"Pes", "hradu"};
  const auto cold = trained().predict(forms, 0.5);
  const auto warm = trained().predict(forms, 2.0);
  for (std::size_t i = 0; i < forms.size(); ++i) {
    CHECK(cold[i].best_tag() == warm[i].best_tag());
    CHECK(cold[i].tag_probs[cold[i].best_tag()] >= warm[i].tag_probs[warm[i].best_tag()]);
  }
}

TEST_SUITE("external distributions") {
  TEST_CASE("parse, densify and renormalise") {
    const auto ext = parse(
        R"({"form": "psa", "tags": [["NNMS2-----A----", 3], ["NNMS4-----A----", 1]], "rules": [["A|0|pe|2|s|l", 1]]})"
        "\n"
        R"({"form": ".", "tags": [["Z:-------------", 1]], "rules": [["A|0||0||l", 0.5]]})"
        "\n\n"
        R"({"form": "ano", "tags": [["TT-------------", 1]], "rules": [["A|0||0||l", 2]]})"
        "\n");
    REQUIRE(ext.sentences.size() == 2);
    CHECK(ext.forms[0] == std::vector<std::string>{"psa", "."});
    CHECK(ext.inventory->tags().size() == 4);
    CHECK(ext.inventory->rules().size() == 2);
    const auto& psa = ext.sentences[0][0];
    CHECK(psa.tag_prob("NNMS2-----A----") == doctest::Approx(0.75));
    CHECK(psa.tag_prob("Z:-------------") == 0.0);
    CHECK(psa.rule_prob(rule_from_string("A|0|pe|2|s|l")) == 1.0);
    CHECK(ext.sentences[1][0].rule_prob(rule_from_string("A|0||0||l")) == 1.0);
  }
  TEST_CASE("write then read is stable") {
    const auto ext = parse(R"({"form": "a", "tags": [["X", 0.25], ["Y", 0.75]], "rules": [["A|0||0||l", 1]]})"
                           "\n");
    std::ostringstream out;
    write_external_distributions(out, ext.forms, ext.sentences);
    const auto again = parse(out.str(), ext.inventory);
    CHECK(again.sentences[0][0].tag_probs == ext.sentences[0][0].tag_probs);
    std::ostringstream out2;
    write_external_distributions(out2, again.forms, again.sentences);
    CHECK(out2.str() == out.str());
  }
  TEST_CASE("errors carry line numbers") {
    const std::string ok = R"({"form": "a", "tags": [["X", 1]], "rules": [["A|0||0||l", 1]]})";
    CHECK(code_of([&] { parse(ok + "\nnot json\n"); }) == ErrorCode::ParseError);
    CHECK(line_of([&] { parse(ok + "\nnot json\n"); }) == 2u);
    CHECK(code_of([] { parse(R"({"form": "a", "tags": [["X", -1]], "rules": [["A|0||0||l", 1]]})"); }) ==
          ErrorCode::NegativeProbability);
    CHECK(code_of([] { parse(R"({"form": "a", "tags": [["X", 1]], "rules": [["Q|0", 1]]})"); }) ==
          ErrorCode::UnknownRuleEncoding);
    CHECK(code_of([] { parse(R"({"form": "a", "tags": [["X", 0]], "rules": [["A|0||0||l", 1]]})"); }) ==
          ErrorCode::ParseError);
    CHECK(code_of([] { parse(R"({"form": "a", "tags": [["X", 1], ["X", 1]], "rules": [["A|0||0||l", 1]]})"); }) ==
          ErrorCode::ParseError);
    CHECK(code_of([] { parse(R"({"form": "a", "rules": [["A|0||0||l", 1]]})"); }) == ErrorCode::ParseError);
    auto inv = std::make_shared<const Inventory>(std::vector<Tag>{Tag{"X"}}, std::vector<EditRule>{EditRule::identity()});
    CHECK(code_of([&] { parse(R"({"form": "a", "tags": [["Y", 1]], "rules": [["A|0||0||l", 1]]})", inv); }) ==
          ErrorCode::ParseError);
  }
}
