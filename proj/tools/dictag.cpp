#include <csignal>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dictag/error.hpp"
#include "dictag/eval.hpp"
#include "dictag/morph_dict.hpp"
#include "dictag/pipeline.hpp"
#include "dictag/rescore.hpp"
#include "dictag/service.hpp"
#include "dictag/tagger.hpp"

namespace {

using namespace dictag;
using Clock = std::chrono::steady_clock;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void log(const std::string& msg) { std::cerr << "dictag: " << msg << '\n'; }

ColumnOrder parse_order(const std::string& s) {
  if (s == "lemma-tag-form") return ColumnOrder::LemmaTagForm;
  if (s == "form-lemma-tag") return ColumnOrder::FormLemmaTag;
  throw UsageError("--order must be lemma-tag-form or form-lemma-tag");
}

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Sentence> read_sentences(const std::string& path) {
  if (path == "-") return read_conllu(std::cin);
  return read_conllu(std::filesystem::path(path));
}

template <class F>
void with_output(const std::string& path, F&& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write(out);
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

std::optional<MorphDict> maybe_dict(const std::string& path, const std::string& order) {
  if (path.empty()) return std::nullopt;
  return load_any_dictionary(path, parse_order(order));
}

Tokenizer make_tokenizer(const std::string& abbrev) {
  return abbrev.empty() ? Tokenizer{} : Tokenizer::from_file(abbrev);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t token_count(const std::vector<Sentence>& s) {
  std::size_t n = 0;
  for (const auto& x : s) n += x.tokens.size();
  return n;
}

// dict-build ---------------------------------------------------------------

struct DictBuildArgs {
  std::string input, output, order = "lemma-tag-form";
};

void run_dict_build(const DictBuildArgs& a) {
  const auto t0 = Clock::now();
  const auto dict = load_dictionary(a.input, parse_order(a.order));
  save_binary(dict, a.output);
  log("wrote " + a.output + ": " + std::to_string(dict.entry_count()) + " entries, " +
      std::to_string(dict.form_count()) + " forms in " + std::to_string(seconds_since(t0)) + " s");
}

// dict-stats ---------------------------------------------------------------

struct DictStatsArgs {
  std::string dict, order = "lemma-tag-form";
  bool json = false;
};

void run_dict_stats(const DictStatsArgs& a) {
  const auto dict = load_any_dictionary(a.dict, parse_order(a.order));
  std::array<std::size_t, kBucketCount> histogram{};
  for (auto form : dict.sorted_forms()) ++histogram[std::min(dict.ambiguity(form), kBucketCount - 1)];
  if (a.json) {
    nlohmann::ordered_json j;
    j["entries"] = dict.entry_count();
    j["forms"] = dict.form_count();
    j["lemmas"] = dict.lemma_count();
    j["ambiguity"] = nlohmann::ordered_json::object();
    for (std::size_t b = 1; b < kBucketCount; ++b) j["ambiguity"][bucket_label(b)] = histogram[b];
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::cout << "entries\t" << dict.entry_count() << "\nforms\t" << dict.form_count() << "\nlemmas\t"
            << dict.lemma_count() << "\nanalyses per form:\n";
  for (std::size_t b = 1; b < kBucketCount; ++b) std::cout << "  " << bucket_label(b) << '\t' << histogram[b] << '\n';
}

// train --------------------------------------------------------------------

struct TrainArgs {
  std::string corpus, output;
  int epochs = 20;
  std::uint64_t seed = 1;
};

void run_train(const TrainArgs& a) {
  if (a.epochs < 1) throw UsageError("--epochs must be at least 1");
  const auto corpus = read_sentences(a.corpus);
  const auto t0 = Clock::now();
  const auto model = TaggerModel::train(corpus, {a.epochs, a.seed});
  model.save(a.output);
  log("trained on " + std::to_string(corpus.size()) + " sentences (" + std::to_string(model.feature_count()) +
      " features, " + std::to_string(model.inventory()->tags().size()) + " tags, " +
      std::to_string(model.inventory()->rules().size()) + " rules) in " + std::to_string(seconds_since(t0)) +
      " s");
}

// tag ----------------------------------------------------------------------

struct TagArgs {
  std::string model, dict, order = "lemma-tag-form", distributions, input = "-", output = "-", abbrev,
                                  candidates;
  bool text = false;
  unsigned threads = 1;
};

void run_tag(const TagArgs& a) {
  if (a.model.empty() && a.distributions.empty()) throw UsageError("tag needs --model or --distributions");
  if (a.threads == 0) throw UsageError("--threads must be positive");
  const auto dict = maybe_dict(a.dict, a.order);
  const MorphDict* d = dict ? &*dict : nullptr;

  std::vector<Sentence> input =
      a.text ? make_tokenizer(a.abbrev).tokenize(slurp(a.input)) : read_sentences(a.input);

  std::optional<TaggerModel> model;
  if (!a.model.empty()) model = TaggerModel::load(std::filesystem::path(a.model));

  std::vector<Sentence> output;
  std::optional<ExternalDistributions> external;
  if (!a.distributions.empty()) {
    external = load_external_distributions(std::filesystem::path(a.distributions),
                                           model ? model->inventory() : nullptr);
    output = annotate(*external, d, input);
  } else {
    output = annotate(*model, d, input, a.threads);
  }

  if (!a.candidates.empty()) {
    const MorphDict empty;
    with_output(a.candidates, [&](std::ostream& out) {
      for (std::size_t s = 0; s < input.size(); ++s) {
        const auto forms = input[s].forms();
        const auto dists = external ? external->sentences[s] : model->predict(forms);
        for (std::size_t i = 0; i < forms.size(); ++i) out << candidate_table_json(d ? *d : empty, forms[i], dists[i]) << '\n';
      }
    });
  }
  with_output(a.output, [&](std::ostream& out) { out << write_conllu(output); });
}

// eval ---------------------------------------------------------------------

struct EvalArgs {
  std::vector<std::string> gold, system, baseline, names;
  std::string dict, order = "lemma-tag-form", json_path;
};

void run_eval(const EvalArgs& a) {
  if (a.gold.size() != a.system.size()) throw UsageError("--gold and --system must be given the same number of times");
  if (!a.baseline.empty() && a.baseline.size() != a.gold.size()) {
    throw UsageError("--baseline must be given once per --gold");
  }
  if (!a.names.empty() && a.names.size() != a.gold.size()) throw UsageError("--name must be given once per --gold");
  const auto dict = maybe_dict(a.dict, a.order);

  EvalReport report;
  std::vector<double> lemma, pos, base_lemma, base_pos;
  std::vector<Sentence> all_gold, all_system, all_base;
  for (std::size_t i = 0; i < a.gold.size(); ++i) {
    const auto gold = read_sentences(a.gold[i]);
    const auto system = read_sentences(a.system[i]);
    std::string name = a.names.empty() ? std::filesystem::path(a.gold[i]).stem().string() : a.names[i];
    if (report.sections.count(name)) name += "#" + std::to_string(i + 1);
    const auto score = score_section(gold, system);
    report.sections[name] = score;
    lemma.push_back(score.lemma_acc);
    pos.push_back(score.pos_acc);
    all_gold.insert(all_gold.end(), gold.begin(), gold.end());
    all_system.insert(all_system.end(), system.begin(), system.end());
    if (!a.baseline.empty()) {
      const auto base = read_sentences(a.baseline[i]);
      const auto b = score_section(gold, base);
      base_lemma.push_back(b.lemma_acc);
      base_pos.push_back(b.pos_acc);
      all_base.insert(all_base.end(), base.begin(), base.end());
    }
  }
  report.macro_avg = Reduction{macro_average(lemma), macro_average(pos)};
  if (!a.baseline.empty()) {
    auto safe = [](double b, double n) { return b == 100.0 ? 0.0 : error_reduction(b, n); };
    report.error_reductions["baseline"] = {safe(macro_average(base_lemma), report.macro_avg->lemma),
                                           safe(macro_average(base_pos), report.macro_avg->pos)};
    report.diffs["baseline"] = {diff_systems(all_gold, all_base, all_system, Field::Lemma),
                                diff_systems(all_gold, all_base, all_system, Field::Pos)};
  }
  if (dict) {
    report.buckets = bucket_by_ambiguity(*dict, all_gold, all_system);
    report.errors = categorize_errors(*dict, all_gold, all_system);
  }
  std::cout << report.to_text();
  if (!a.json_path.empty()) {
    with_output(a.json_path, [&](std::ostream& out) { out << report.to_json() << '\n'; });
  }
}

// selftrain ----------------------------------------------------------------

struct SelfTrainArgs {
  std::string gold, raw, output, dict, order = "lemma-tag-form";
  int epochs = 20;
  std::uint64_t seed = 1;
};

void run_selftrain(const SelfTrainArgs& a) {
  if (a.epochs < 1) throw UsageError("--epochs must be at least 1");
  const auto dict = maybe_dict(a.dict, a.order);
  const auto gold = read_sentences(a.gold);
  auto raw = a.raw.empty() ? std::vector<Sentence>{} : read_sentences(a.raw);
  const auto t0 = Clock::now();
  auto result = self_train(gold, std::move(raw), {a.epochs, a.seed}, dict ? &*dict : nullptr);
  result.stage2.save(a.output);
  with_output(a.output + ".provenance.json", [&](std::ostream& out) { out << result.provenance_json << '\n'; });
  log("self-training finished in " + std::to_string(seconds_since(t0)) + " s; wrote " + a.output);
}

// serve --------------------------------------------------------------------

struct ServeArgs {
  std::vector<std::string> models;
  std::string dict, order = "lemma-tag-form", abbrev, host = "127.0.0.1";
  int port = 8080;
  unsigned workers = 4;
  std::size_t max_bytes = 1 << 20;
};

void run_serve(const ServeArgs& a) {
  std::shared_ptr<const MorphDict> dict;
  if (!a.dict.empty()) dict = std::make_shared<const MorphDict>(load_any_dictionary(a.dict, parse_order(a.order)));
  const Tokenizer tokenizer = make_tokenizer(a.abbrev);

  std::vector<ServiceModel> models;
  for (const auto& spec : a.models) {
    // NAME=PATH or PATH (named after the file stem)
    const auto eq = spec.find('=');
    const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    const std::string name = eq == std::string::npos ? std::filesystem::path(path).stem().string() : spec.substr(0, eq);
    models.push_back({name, std::make_shared<const TaggerModel>(TaggerModel::load(std::filesystem::path(path))),
                      dict, tokenizer});
  }

  // Handle SIGINT/SIGTERM on a dedicated thread so that stop() runs outside
  // signal context.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service(std::move(models), {a.host, a.port, a.workers, a.max_bytes, &std::cerr});
  const int port = service.bind();
  log("listening on http://" + a.host + ":" + std::to_string(port));
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    log("shutting down");
    service.stop();
  });
  service.run();
  // run() can also return on its own (listener failure); wake the waiter.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
}

// bench --------------------------------------------------------------------

struct BenchArgs {
  std::string model, dict, order = "lemma-tag-form", input;
  double min_seconds = 1.0;
  bool json = false;
};

void run_bench(const BenchArgs& a) {
  const auto model = TaggerModel::load(std::filesystem::path(a.model));
  const auto dict = load_any_dictionary(a.dict, parse_order(a.order));
  const auto corpus = read_sentences(a.input);
  const std::size_t words = token_count(corpus);
  if (words == 0) throw Error(ErrorCode::EmptyInput, "benchmark corpus has no tokens");

  auto measure = [&](const MorphDict* d) {
    std::size_t done = 0;
    const auto t0 = Clock::now();
    do {
      auto out = annotate(model, d, corpus);
      done += words;
    } while (seconds_since(t0) < a.min_seconds);
    return static_cast<double>(done) / seconds_since(t0);
  };
  const double plain = measure(nullptr);
  const double with_dict = measure(&dict);
  if (a.json) {
    std::cout << nlohmann::json{{"words", words}, {"words_per_second_without_dictionary", plain},
                                {"words_per_second_with_dictionary", with_dict}}
                     .dump()
              << '\n';
  } else {
    std::cout << "corpus words\t" << words << "\nwords/s without dictionary\t" << static_cast<long long>(plain)
              << "\nwords/s with dictionary\t" << static_cast<long long>(with_dict) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dictag: morphological tagging and lemmatization with dictionary rescoring"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dictag 0.3.0");

  const std::string orders = "lemma-tag-form or form-lemma-tag";

  DictBuildArgs dict_build;
  auto* c = app.add_subcommand("dict-build", "Compile a TSV dictionary to the binary format");
  c->add_option("-i,--input", dict_build.input, "TSV dictionary")->required();
  c->add_option("-o,--output", dict_build.output, "Binary output path")->required();
  c->add_option("--order", dict_build.order, "Column order: " + orders)->capture_default_str();
  c->callback([&] { run_dict_build(dict_build); });

  DictStatsArgs dict_stats;
  c = app.add_subcommand("dict-stats", "Print dictionary size and ambiguity histogram");
  c->add_option("-d,--dict", dict_stats.dict, "Dictionary (TSV or binary)")->required();
  c->add_option("--order", dict_stats.order, "TSV column order: " + orders)->capture_default_str();
  c->add_flag("--json", dict_stats.json, "Emit JSON");
  c->callback([&] { run_dict_stats(dict_stats); });

  TrainArgs train;
  c = app.add_subcommand("train", "Train a tagger/lemmatizer on CoNLL-U");
  c->add_option("-t,--train", train.corpus, "Training CoNLL-U ('-' for stdin)")->required();
  c->add_option("-o,--output", train.output, "Model path")->required();
  c->add_option("--epochs", train.epochs)->capture_default_str();
  c->add_option("--seed", train.seed)->capture_default_str();
  c->callback([&] { run_train(train); });

  TagArgs tag;
  c = app.add_subcommand("tag", "Annotate CoNLL-U or plain text");
  c->add_option("-m,--model", tag.model, "Model path");
  c->add_option("-d,--dict", tag.dict, "Dictionary for rescoring (TSV or binary)");
  c->add_option("--order", tag.order, "TSV column order: " + orders)->capture_default_str();
  c->add_option("--distributions", tag.distributions, "Precomputed distributions (JSON lines) instead of the model");
  c->add_option("-i,--input", tag.input, "Input ('-' for stdin)")->capture_default_str();
  c->add_option("-o,--output", tag.output, "Output CoNLL-U ('-' for stdout)")->capture_default_str();
  c->add_flag("--text", tag.text, "Input is plain text; tokenize it first");
  c->add_option("--abbreviations", tag.abbrev, "Abbreviation list for the tokenizer");
  c->add_option("--threads", tag.threads, "Worker threads")->capture_default_str();
  c->add_option("--candidates", tag.candidates, "Write per-token candidate tables (JSON lines)");
  c->callback([&] { run_tag(tag); });

  EvalArgs eval;
  c = app.add_subcommand("eval", "Score system output against gold data");
  c->add_option("-g,--gold", eval.gold, "Gold CoNLL-U (repeat per section)")->required();
  c->add_option("-s,--system", eval.system, "System CoNLL-U (repeat per section)")->required();
  c->add_option("-b,--baseline", eval.baseline, "Baseline CoNLL-U (once per section)");
  c->add_option("--name", eval.names, "Section names (default: gold file stems)");
  c->add_option("-d,--dict", eval.dict, "Dictionary for ambiguity buckets and error categories");
  c->add_option("--order", eval.order, "TSV column order: " + orders)->capture_default_str();
  c->add_option("--json", eval.json_path, "Also write the JSON report here ('-' for stdout)");
  c->callback([&] { run_eval(eval); });

  SelfTrainArgs selftrain;
  c = app.add_subcommand("selftrain", "Train, annotate raw data, retrain on the union");
  c->add_option("-g,--gold", selftrain.gold, "Gold CoNLL-U")->required();
  c->add_option("-r,--raw", selftrain.raw, "Unannotated CoNLL-U (annotations are overwritten)");
  c->add_option("-o,--output", selftrain.output, "Stage-2 model path")->required();
  c->add_option("-d,--dict", selftrain.dict, "Dictionary used when annotating the raw part");
  c->add_option("--order", selftrain.order, "TSV column order: " + orders)->capture_default_str();
  c->add_option("--epochs", selftrain.epochs)->capture_default_str();
  c->add_option("--seed", selftrain.seed)->capture_default_str();
  c->callback([&] { run_selftrain(selftrain); });

  ServeArgs serve;
  c = app.add_subcommand("serve", "Run the HTTP service");
  c->add_option("-m,--model", serve.models, "Model as PATH or NAME=PATH (repeatable; first is default)")
      ->required()
      ->envname("DICTAG_MODEL");
  c->add_option("-d,--dict", serve.dict, "Dictionary for rescoring")->envname("DICTAG_DICT");
  c->add_option("--order", serve.order, "TSV column order: " + orders)->capture_default_str();
  c->add_option("--abbreviations", serve.abbrev, "Abbreviation list for the tokenizer");
  c->add_option("--host", serve.host)->capture_default_str()->envname("DICTAG_HOST");
  c->add_option("-p,--port", serve.port)->capture_default_str()->envname("DICTAG_PORT");
  c->add_option("--workers", serve.workers)->capture_default_str()->envname("DICTAG_WORKERS");
  c->add_option("--max-bytes", serve.max_bytes, "Request data size limit")
      ->capture_default_str()
      ->envname("DICTAG_MAX_BYTES");
  c->callback([&] { run_serve(serve); });

  BenchArgs bench;
  c = app.add_subcommand("bench", "Measure tagging throughput with and without the dictionary");
  c->add_option("-m,--model", bench.model)->required();
  c->add_option("-d,--dict", bench.dict)->required();
  c->add_option("--order", bench.order, "TSV column order: " + orders)->capture_default_str();
  c->add_option("-i,--input", bench.input, "CoNLL-U corpus")->required();
  c->add_option("--min-seconds", bench.min_seconds)->capture_default_str();
  c->add_flag("--json", bench.json);
  c->callback([&] { run_bench(bench); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "dictag: " << e.what() << '\n';
    return 2;
  } catch (const dictag::Error& e) {
    std::cerr << "dictag: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "dictag: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
