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

// A [5, H, 1] perceptron: ReLU hidden layer, logistic output. Input i is the
// seed-centroid similarity under context type i.

#ifndef TERMSET_MLP_H_
#define TERMSET_MLP_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "termset/context_type.h"

namespace termset {

using Features = std::array<double, kNumContextTypes>;

struct MlpModel {
  size_t hidden = 0;
  std::vector<double> w1;  // hidden x 5, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // 1 x hidden
  double b2 = 0;

  // All parameters zero.
  static MlpModel Zero(size_t hidden);
  size_t NumParameters() const { return w1.size() + b1.size() + w2.size() + 1; }
  // Flat parameter view in the order w1, b1, w2, b2.
  std::vector<double> Flatten() const;
  void Unflatten(const std::vector<double> &params);

  bool operator==(const MlpModel &) const = default;
};

// sigmoid(w2 . relu(w1 x + b1) + b2). Throws kInvalidArgument on a
// non-finite feature.
double Forward(const MlpModel &model, const Features &x);

struct LabeledRow {
  Features features{};
  int label = 0;  // 0 or 1
  bool dev = false;
};

struct TrainSet {
  std::vector<LabeledRow> rows;

  // CSV "f1,f2,f3,f4,f5,label,split" with split in {train, dev}. A header
  // line is skipped when its first field is not numeric.
  static TrainSet ParseCsv(std::string_view text);
  std::string ToCsv() const;
};

// Binary cross-entropy summed over `batch`.
double Loss(const MlpModel &model, const std::vector<LabeledRow> &batch);

// Analytic gradient of Loss, flat in MlpModel::Flatten order.
std::vector<double> Gradient(const MlpModel &model,
                             const std::vector<LabeledRow> &batch);

// Max relative error between Gradient and central differences with step h.
double GradCheck(const MlpModel &model, const std::vector<LabeledRow> &batch,
                 double h = 1e-5);

struct MlpTrainConfig {
  size_t hidden = 8;
  double lr = 0.1;
  int epochs = 200;
  uint64_t seed = 1;
  int patience = 20;  // epochs without dev improvement before stopping
};

struct MlpTrainResult {
  MlpModel model;  // parameters with the lowest dev loss seen
  // Mean train-split loss after each accepted epoch (index 0 = initial).
  std::vector<double> train_loss;
  std::vector<double> dev_loss;
  int epochs_run = 0;
};

// Glorot-uniform weights, zero biases.
MlpModel InitMlp(size_t hidden, uint64_t seed);

// Per-row SGD on cross-entropy. An epoch that raises the train loss is
// rolled back and retried with half the learning rate, so train_loss never
// increases. Without dev rows the train loss drives model selection. Throws
// kInvalidArgument unless the train split holds both labels.
MlpTrainResult TrainMlp(const TrainSet &data, const MlpTrainConfig &config);

std::string MlpToJson(const MlpModel &model);
// Throws kFormat on missing fields or shape mismatch.
MlpModel MlpFromJson(std::string_view text);

}  // namespace termset

#endif  // TERMSET_MLP_H_
