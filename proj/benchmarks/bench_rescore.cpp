#include <benchmark/benchmark.h>

#include <random>

#include "dictag/rescore.hpp"

using namespace dictag;

namespace {

// `analyses` analyses for one form, `rules` inventory rules, all applicable
struct Case {
  MorphDict dict;
  TokenDistributions dists;
};

Case make_case(int analyses, int rules) {
  const std::string form = "zkouškami";
  std::vector<Tag> tags;
  std::vector<EditRule> inventory;
  MorphDictBuilder b;
  for (int i = 0; i < analyses; ++i) {
    tags.push_back(Tag{"T" + std::to_string(i)});
    b.add(form, Lemma::from_raw("zkouška-" + std::to_string(i % 3 + 1)), tags.back());
  }
  for (int i = 0; i < rules; ++i) {
    const std::string tail = "abcdefghijklmnopqrstuvwxyz";
    inventory.push_back(rule_from_string("A|0||" + std::to_string(i % 5) + "|" + tail.substr(0, i / 5) + "|l"));
  }
  inventory.push_back(induce_rule(form, Lemma::from_raw("zkouška-1")));
  auto inv = std::make_shared<const Inventory>(tags, inventory);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> tp(inv->tags().size()), rp(inv->rules().size());
  for (auto& p : tp) p = u(rng);
  for (auto& p : rp) p = u(rng);
  return {std::move(b).build(), TokenDistributions{inv, tp, rp}};
}

void BM_RescoreToken(benchmark::State& state) {
  const auto c = make_case(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(rescore_token(c.dict, "zkouškami", c.dists));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RescoreToken)->Args({1, 50})->Args({10, 50})->Args({10, 500})->Args({40, 500});

void BM_Unconstrained(benchmark::State& state) {
  const auto c = make_case(10, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(unconstrained_choice("zkouškami", c.dists));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Unconstrained)->Arg(50)->Arg(500);

void BM_InduceApply(benchmark::State& state) {
  const auto lemma = Lemma::from_raw("nejlepší");
  for (auto _ : state) {
    const auto rule = induce_rule("nejlepšími", lemma);
    benchmark::DoNotOptimize(apply_rule(rule, "nejlepšími"));
  }
}
BENCHMARK(BM_InduceApply);

}  // namespace

BENCHMARK_MAIN();
