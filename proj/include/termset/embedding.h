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

// Skip-gram negative-sampling embeddings over arbitrary (target, context)
// pairs, in the style of word2vecf: targets and contexts have separate
// vocabularies and the pair stream is given rather than derived from a
// sliding window.

#ifndef TERMSET_EMBEDDING_H_
#define TERMSET_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "termset/context_type.h"

namespace termset {

struct UnitPair {
  std::string target;
  std::string context;
};

// Dense index over units, ordered by descending count then unit string.
class Vocabulary {
 public:
  Vocabulary() = default;
  // `units` must already be in vocabulary order.
  Vocabulary(std::vector<std::string> units, std::vector<uint64_t> counts);

  // Counts every unit and keeps those with count >= min_count.
  static Vocabulary FromCounts(
      const std::unordered_map<std::string, uint64_t> &counts,
      uint64_t min_count);

  size_t size() const { return units_.size(); }
  bool empty() const { return units_.empty(); }
  const std::string &unit(size_t i) const { return units_[i]; }
  uint64_t count(size_t i) const { return counts_[i]; }
  std::optional<size_t> Find(std::string_view unit) const;

 private:
  std::vector<std::string> units_;
  std::vector<uint64_t> counts_;
  std::unordered_map<std::string, size_t> index_;
};

// Target and context vocabularies over a pair stream. Throws kTraining when
// either side is empty after the min_count cut.
std::pair<Vocabulary, Vocabulary> BuildVocab(std::span<const UnitPair> pairs,
                                             uint64_t min_count);

class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  std::span<double> row(size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::vector<double> &data() { return data_; }
  const std::vector<double> &data() const { return data_; }

  bool operator==(const Matrix &) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

struct TrainConfig {
  int dim = 100;
  int epochs = 5;
  int negatives = 5;
  double alpha = 0.025;  // decays linearly to alpha * 1e-4
  uint64_t min_count = 5;
  double subsample = 1e-4;
  uint64_t seed = 1;
  // 1 = deterministic. More workers apply lock-free updates to the shared
  // matrices and the result depends on scheduling.
  int workers = 1;
  size_t table_size = 10'000'000;
  uint64_t progress_every = 100'000;  // pair visits between reports

  void Validate() const;
};

struct TrainProgress {
  uint64_t pairs = 0;  // pair visits so far, including subsampled ones
  double alpha = 0;
  double mean_loss = 0;  // over updates since the previous report
};

// "PROGRESS <pairs> <alpha> <loss>"
std::string FormatProgress(const TrainProgress &progress);

using ProgressCallback = std::function<void(const TrainProgress &)>;

struct Neighbor {
  size_t index = 0;
  std::string unit;
  double similarity = 0;
};

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(ContextType ctype, Vocabulary targets, Vocabulary contexts,
                 Matrix target_matrix, Matrix context_matrix);

  ContextType ctype() const { return ctype_; }
  size_t dim() const { return target_matrix_.cols(); }
  const Vocabulary &targets() const { return targets_; }
  const Vocabulary &contexts() const { return contexts_; }
  const Matrix &target_matrix() const { return target_matrix_; }
  const Matrix &context_matrix() const { return context_matrix_; }
  // Mutable access for training and tests; call RefreshNorms() afterwards.
  Matrix &mutable_target_matrix() { return target_matrix_; }
  Matrix &mutable_context_matrix() { return context_matrix_; }
  void RefreshNorms();

  std::optional<size_t> TargetIndex(std::string_view unit) const {
    return targets_.Find(unit);
  }
  std::span<const double> TargetRow(size_t i) const {
    return target_matrix_.row(i);
  }

  // Cosine between `query` and target row `i`; 0 for a zero row.
  double Similarity(std::span<const double> query, size_t i) const;

  // Top-k target units by cosine to `query`, excluding `exclude`. Ties are
  // broken by unit order (numeric units compare numerically). Zero rows are
  // never returned. Throws kInvalidArgument on a zero or wrong-size query.
  std::vector<Neighbor> Nearest(std::span<const double> query, size_t k,
                                const std::set<std::string> &exclude = {}) const;

 private:
  ContextType ctype_ = ContextType::kLinear;
  Vocabulary targets_;
  Vocabulary contexts_;
  Matrix target_matrix_;
  Matrix context_matrix_;
  std::vector<double> target_norms_;
};

// Ordering used for nearest-neighbour tie breaks.
bool UnitLess(std::string_view a, std::string_view b);

// Target rows uniform in [-0.5/dim, 0.5/dim], context rows zero.
EmbeddingModel InitModel(ContextType ctype, Vocabulary targets,
                         Vocabulary contexts, const TrainConfig &config);

// Pairs with a side outside the vocabularies are skipped. Throws kTraining
// on an empty vocabulary or a non-finite parameter.
EmbeddingModel TrainSgns(std::span<const UnitPair> pairs, ContextType ctype,
                         const TrainConfig &config,
                         const ProgressCallback &progress = {});

// Negative-sampling loss of one example:
//   -log sigmoid(t.c) - sum_i log sigmoid(-t.n_i)
double SgnsLoss(std::span<const double> target, std::span<const double> context,
                const std::vector<std::span<const double>> &negatives);

struct SgnsGradient {
  double loss = 0;
  std::vector<double> target;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

// Analytic gradient of SgnsLoss with respect to every input vector.
SgnsGradient ComputeSgnsGradient(
    std::span<const double> target, std::span<const double> context,
    const std::vector<std::span<const double>> &negatives);

double Dot(std::span<const double> a, std::span<const double> b);
bool IsZero(std::span<const double> v);
// Throws kInvalidArgument for a zero vector or mismatched sizes.
double Cosine(std::span<const double> a, std::span<const double> b);
// Throws kInvalidArgument on empty input or mismatched sizes.
std::vector<double> Centroid(const std::vector<std::span<const double>> &vectors);

// Writes `path` (targets) and `path`.ctx (contexts). Header "V dim", then one
// row per unit: the percent-escaped unit followed by dim reals.
void SaveModel(const EmbeddingModel &model, const std::string &path);
EmbeddingModel LoadModel(const std::string &path, ContextType ctype);

std::string EscapeUnit(std::string_view unit);
std::string UnescapeUnit(std::string_view escaped);

}  // namespace termset

#endif  // TERMSET_EMBEDDING_H_
