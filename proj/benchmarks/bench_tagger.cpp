#include <benchmark/benchmark.h>

#include "dictag/pipeline.hpp"

using namespace dictag;

namespace {

std::filesystem::path data(const char* name) { return std::filesystem::path(DICTAG_TEST_DATA_DIR) / name; }

const std::vector<Sentence>& train_corpus() {
  static const auto c = read_conllu(data("train.conllu"));
  return c;
}

std::size_t token_count(const std::vector<Sentence>& corpus) {
  std::size_t n = 0;
  for (const auto& s : corpus) n += s.tokens.size();
  return n;
}

void BM_Train(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(TaggerModel::train(train_corpus(), {static_cast<int>(state.range(0)), 1}));
  }
}
BENCHMARK(BM_Train)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Annotate(benchmark::State& state) {
  static const auto model = TaggerModel::train(train_corpus(), {});
  static const auto dict = load_dictionary(data("dict.tsv"), ColumnOrder::LemmaTagForm);
  const auto dev = read_conllu(data("dev.conllu"));
  const MorphDict* d = state.range(0) ? &dict : nullptr;
  for (auto _ : state) benchmark::DoNotOptimize(annotate(model, d, dev));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * token_count(dev)));
}
BENCHMARK(BM_Annotate)->ArgName("dict")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ReadWriteConllu(benchmark::State& state) {
  const auto text = write_conllu(train_corpus());
  for (auto _ : state) benchmark::DoNotOptimize(write_conllu(read_conllu_string(text)));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ReadWriteConllu);

}  // namespace

BENCHMARK_MAIN();
