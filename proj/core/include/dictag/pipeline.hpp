#pragma once

#include <string>
#include <vector>

#include "dictag/conllu.hpp"
#include "dictag/morph_dict.hpp"
#include "dictag/rescore.hpp"
#include "dictag/tagger.hpp"

namespace dictag {

/// Writes the decoded lemma and tag into LEMMA/XPOS. Throws LengthMismatch.
void apply_choices(Sentence& sentence, const std::vector<RescoredChoice>& choices);

/// predict -> rescore (when `dict` is non-null) -> fill LEMMA/XPOS.
/// Sentences are independent, so `threads` > 1 gives identical output.
std::vector<Sentence> annotate(const TaggerModel& model, const MorphDict* dict,
                               std::vector<Sentence> input, unsigned threads = 1);

/// Same, decoding precomputed distributions instead of running a model.
/// Throws AlignmentError when sentence/token counts or forms differ.
std::vector<Sentence> annotate(const ExternalDistributions& dists, const MorphDict* dict,
                               std::vector<Sentence> input);

struct SelfTrainResult {
  TaggerModel stage1;
  TaggerModel stage2;
  std::string provenance_json;
};

/// Train on `gold`, annotate `raw` with that model (and `dict`), retrain on
/// gold followed by the annotated raw part. An empty `raw` yields a stage-2
/// model identical to stage 1. Throws EmptyCorpus when `gold` is empty.
SelfTrainResult self_train(const std::vector<Sentence>& gold, std::vector<Sentence> raw,
                           const TrainOptions& options, const MorphDict* dict);

}  // namespace dictag
