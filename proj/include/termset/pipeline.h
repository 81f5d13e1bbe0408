// Copyright 2026 The termset Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Corpus to models: candidate terms, term groups, then one embedding model
// per requested context type.

#ifndef TERMSET_PIPELINE_H_
#define TERMSET_PIPELINE_H_

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "termset/contexts.h"
#include "termset/corpus.h"
#include "termset/embedding.h"
#include "termset/expansion.h"
#include "termset/termgroup.h"

namespace termset {

struct PipelineConfig {
  std::vector<ContextType> contexts = {ContextType::kLinear, ContextType::kList,
                                       ContextType::kUnary};
  TrainConfig train;
  GroupConfig group;
  // Terms seen fewer times than this are not candidates.
  uint64_t min_term_freq = 2;
  // Train a linear model over term surfaces and let it merge variants that
  // share a head word.
  bool group_embedding = false;
  size_t window = 5;
  size_t min_list_items = 3;

  // Throws kInvalidArgument naming the offending field.
  void Validate() const;
};

// JSON field names: contexts, min_term_freq, group_embedding, window,
// min_list_items, train_config{dim, epochs, negatives, alpha, min_count,
// subsample, seed, workers}, group_config{max_edit_ratio, sim_threshold}.
// Missing fields keep the values already in `config`; unknown fields and
// wrongly typed values throw kInvalidArgument with the field path.
void ApplyTrainConfigJson(std::string_view json_text, TrainConfig &config,
                          std::string_view field_prefix = "train_config");
void ApplyGroupConfigJson(std::string_view json_text, GroupConfig &config,
                          std::string_view field_prefix = "group_config");
std::string TrainConfigToJson(const TrainConfig &config);
// Same rules for a whole PipelineConfig object (the train request body).
// Context names are those of ContextTypeName.
void ApplyPipelineJson(std::string_view json_text, PipelineConfig &config,
                       std::string_view field_prefix = "");
std::string PipelineConfigToJson(const PipelineConfig &config);
std::string GroupConfigToJson(const GroupConfig &config);

// Chunking mode for a corpus: noun-phrase chunks when every sentence carries
// POS tags, n-grams otherwise.
ChunkMode ChooseChunkMode(const Corpus &corpus);

// Candidate surfaces with their occurrence counts, keeping those seen at
// least min_freq times. Sorted by surface.
std::vector<Term> CountTerms(const Corpus &corpus, uint64_t min_freq);

struct PipelineStage {
  std::string name;  // "group" or "train:<ctype>"
  double fraction = 0;  // overall progress in [0, 1]
  std::string detail;
};
using StageCallback = std::function<void(const PipelineStage &)>;

struct PipelineOutput {
  std::vector<TermGroup> groups;
  ModelSet models;
  // Requested context types that produced no model, with the reason.
  std::map<ContextType, std::string> skipped;
};

// Throws kConflict on an empty corpus or when no candidate term survives,
// kMode when dependency contexts are requested on an unparsed corpus.
PipelineOutput RunPipeline(const Corpus &corpus, const PipelineConfig &config,
                           const StageCallback &stage = {});

}  // namespace termset

#endif  // TERMSET_PIPELINE_H_
