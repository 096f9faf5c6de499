#include "dictag/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "dictag/error.hpp"

namespace dictag {

namespace {

const MorphDict& empty_dict() {
  static const MorphDict dict;
  return dict;
}

void annotate_one(const TaggerModel& model, const MorphDict& dict, Sentence& s) {
  const auto forms = s.forms();
  const auto dists = model.predict(forms);
  apply_choices(s, rescore_sentence(dict, forms, dists));
}

nlohmann::ordered_json stage_record(const TrainingMetadata& m) {
  return {{"corpus_fingerprint", m.corpus_fingerprint},
          {"sentences", m.sentences},
          {"tokens", m.tokens},
          {"epochs", m.epochs},
          {"seed", m.seed}};
}

}  // namespace

void apply_choices(Sentence& sentence, const std::vector<RescoredChoice>& choices) {
  if (choices.size() != sentence.tokens.size()) {
    throw Error(ErrorCode::LengthMismatch, "choice count does not match token count");
  }
  for (std::size_t i = 0; i < choices.size(); ++i) {
    sentence.tokens[i].lemma = choices[i].lemma;
    sentence.tokens[i].xpos = choices[i].tag;
  }
}

std::vector<Sentence> annotate(const TaggerModel& model, const MorphDict* dict, std::vector<Sentence> input,
                               unsigned threads) {
  const MorphDict& d = dict ? *dict : empty_dict();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(input.size())));
  if (threads <= 1) {
    for (auto& s : input) annotate_one(model, d, s);
    return input;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < input.size();) {
      try {
        annotate_one(model, d, input[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = input.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return input;
}

std::vector<Sentence> annotate(const ExternalDistributions& dists, const MorphDict* dict,
                               std::vector<Sentence> input) {
  const MorphDict& d = dict ? *dict : empty_dict();
  if (dists.sentences.size() != input.size()) {
    throw Error(ErrorCode::AlignmentError, std::to_string(input.size()) + " sentences but distributions for " +
                                               std::to_string(dists.sentences.size()));
  }
  for (std::size_t s = 0; s < input.size(); ++s) {
    const auto forms = input[s].forms();
    if (forms != dists.forms[s]) {
      throw Error(ErrorCode::AlignmentError,
                  "forms of sentence " + std::to_string(s + 1) + " do not match the distributions");
    }
    apply_choices(input[s], rescore_sentence(d, forms, dists.sentences[s]));
  }
  return input;
}

SelfTrainResult self_train(const std::vector<Sentence>& gold, std::vector<Sentence> raw,
                           const TrainOptions& options, const MorphDict* dict) {
  if (gold.empty()) throw Error(ErrorCode::EmptyCorpus, "gold part is empty");
  auto stage1 = TaggerModel::train(gold, options);

  auto annotated = annotate(stage1, dict, std::move(raw));
  const std::size_t auto_sentences = annotated.size();
  const std::uint64_t auto_fingerprint = annotated.empty() ? 0 : corpus_fingerprint(annotated);
  std::vector<Sentence> combined = gold;
  combined.insert(combined.end(), std::make_move_iterator(annotated.begin()),
                  std::make_move_iterator(annotated.end()));
  auto stage2 = TaggerModel::train(combined, options);

  nlohmann::ordered_json prov;
  prov["stage1"] = stage_record(stage1.metadata());
  prov["stage1"]["corpus"] = "gold";
  prov["stage2"] = stage_record(stage2.metadata());
  prov["stage2"]["corpus"] = "gold+auto";
  prov["auto_annotated"] = {{"sentences", auto_sentences}, {"corpus_fingerprint", auto_fingerprint}};
  prov["dictionary"] = dict ? nlohmann::ordered_json(dict->source()) : nlohmann::ordered_json(nullptr);
  return {std::move(stage1), std::move(stage2), prov.dump(2)};
}

}  // namespace dictag
