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

// Seed set expansion. Each context model contributes one feature per
// candidate: the cosine between the candidate and the centroid of the seeds
// the model knows. A classifier (or, without one, the mean of the available
// features) turns the features into a certainty in [0, 1]. Seeds always get
// certainty 1.

#ifndef TERMSET_EXPANSION_H_
#define TERMSET_EXPANSION_H_

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "termset/context_type.h"
#include "termset/contexts.h"
#include "termset/embedding.h"
#include "termset/mlp.h"
#include "termset/termgroup.h"

namespace termset {

using ModelSet = std::map<ContextType, std::shared_ptr<const EmbeddingModel>>;

struct SeedSet {
  std::string category;
  std::set<GroupId> ids;
};

struct Candidate {
  GroupId group = 0;
  Features features{};  // 0 where the context model cannot score
  std::array<bool, kNumContextTypes> available{};
  double certainty = 0;
  bool seed = false;
};

enum class Scorer { kMlp, kMean };

struct ExpansionResult {
  SeedSet seed;
  // Seeds first (ascending id), then candidates by certainty descending,
  // ties by ascending group id.
  std::vector<Candidate> items;
  std::set<GroupId> validated;
  Scorer scorer = Scorer::kMean;
  size_t k = 0;
  size_t pool_size = 0;
};

inline constexpr size_t kDefaultPoolSize = 500;
inline constexpr size_t kDefaultK = 50;

// Row of group `id` in `model`, if the group is in its target vocabulary.
std::optional<size_t> GroupRow(const EmbeddingModel &model, GroupId id);

// Centroid baseline on a single model. Throws kInvalidArgument listing the
// seed ids missing from the vocabulary.
std::vector<std::pair<GroupId, double>> ExpandSimple(const EmbeddingModel &model,
                                                     const SeedSet &seed,
                                                     size_t k);

// Candidate pool: union over models of the top pool_size neighbours of the
// per-model seed centroid. Returned in ascending group id order. Throws
// kInvalidArgument when no model knows any seed.
std::vector<Candidate> ScoreCandidates(const ModelSet &models,
                                       const SeedSet &seed, size_t pool_size);

// `mlp` may be null, in which case certainty = (1 + mean of available
// features) / 2 and the result is flagged Scorer::kMean.
ExpansionResult Expand(const ModelSet &models, const MlpModel *mlp,
                       const SeedSet &seed, size_t k,
                       size_t pool_size = kDefaultPoolSize);

// New seed = old seed + accepted; category, k and pool size carry over.
// Throws kInvalidArgument if an accepted id is not in `result`.
ExpansionResult Reexpand(const ExpansionResult &result,
                         const std::set<GroupId> &accepted,
                         const ModelSet &models, const MlpModel *mlp);

std::string_view ScorerName(Scorer scorer);

// {session_id?, category, scorer, k, pool_size, items:[{group_id, canonical,
// certainty, seed, completed, features:[5]}]}
std::string ExpansionToJson(const ExpansionResult &result,
                            const GroupIndex &groups,
                            std::string_view session_id = {});
ExpansionResult ExpansionFromJson(std::string_view text);

// "canonical,group_id,certainty" for validated items in result order.
std::string ExportValidatedCsv(const ExpansionResult &result,
                               const GroupIndex &groups);

}  // namespace termset

#endif  // TERMSET_EXPANSION_H_
