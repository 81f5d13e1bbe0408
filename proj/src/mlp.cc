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

#include "termset/mlp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"
#include "termset/error.h"
#include "termset/text.h"

namespace termset {

using nlohmann::json;

namespace {

constexpr size_t kInputs = kNumContextTypes;

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

struct Activations {
  std::vector<double> pre;     // hidden pre-activations
  std::vector<double> hidden;  // relu(pre)
  double logit = 0;
};

Activations Run(const MlpModel &m, const Features &x) {
  Activations a;
  a.pre.resize(m.hidden);
  a.hidden.resize(m.hidden);
  a.logit = m.b2;
  for (size_t h = 0; h < m.hidden; ++h) {
    double z = m.b1[h];
    for (size_t i = 0; i < kInputs; ++i) z += m.w1[h * kInputs + i] * x[i];
    a.pre[h] = z;
    a.hidden[h] = z > 0 ? z : 0;
    a.logit += m.w2[h] * a.hidden[h];
  }
  return a;
}

// Cross-entropy written on the logit: y*softplus(-z) + (1-y)*softplus(z).
double RowLoss(double logit, int label) {
  return label == 1 ? Softplus(-logit) : Softplus(logit);
}

void CheckFeatures(const Features &x) {
  for (size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "non-finite classifier feature " + std::to_string(i),
                  "features[" + std::to_string(i) + "]");
    }
  }
}

}  // namespace

MlpModel MlpModel::Zero(size_t hidden) {
  MlpModel m;
  m.hidden = hidden;
  m.w1.assign(hidden * kInputs, 0.0);
  m.b1.assign(hidden, 0.0);
  m.w2.assign(hidden, 0.0);
  m.b2 = 0;
  return m;
}

std::vector<double> MlpModel::Flatten() const {
  std::vector<double> p;
  p.reserve(NumParameters());
  p.insert(p.end(), w1.begin(), w1.end());
  p.insert(p.end(), b1.begin(), b1.end());
  p.insert(p.end(), w2.begin(), w2.end());
  p.push_back(b2);
  return p;
}

void MlpModel::Unflatten(const std::vector<double> &p) {
  auto it = p.begin();
  std::copy_n(it, w1.size(), w1.begin());
  it += static_cast<long>(w1.size());
  std::copy_n(it, b1.size(), b1.begin());
  it += static_cast<long>(b1.size());
  std::copy_n(it, w2.size(), w2.begin());
  it += static_cast<long>(w2.size());
  b2 = *it;
}

double Forward(const MlpModel &model, const Features &x) {
  CheckFeatures(x);
  // Saturated logits still map strictly inside (0, 1).
  return std::clamp(Sigmoid(Run(model, x).logit),
                    std::numeric_limits<double>::denorm_min(),
                    std::nextafter(1.0, 0.0));
}

double Loss(const MlpModel &model, const std::vector<LabeledRow> &batch) {
  double sum = 0;
  for (const LabeledRow &r : batch) sum += RowLoss(Run(model, r.features).logit, r.label);
  return sum;
}

std::vector<double> Gradient(const MlpModel &m,
                             const std::vector<LabeledRow> &batch) {
  const size_t H = m.hidden;
  std::vector<double> g(m.NumParameters(), 0.0);
  double *gw1 = g.data();
  double *gb1 = gw1 + H * kInputs;
  double *gw2 = gb1 + H;
  double *gb2 = gw2 + H;
  for (const LabeledRow &r : batch) {
    Activations a = Run(m, r.features);
    double delta = Sigmoid(a.logit) - r.label;  // dLoss/dlogit
    *gb2 += delta;
    for (size_t h = 0; h < H; ++h) {
      gw2[h] += delta * a.hidden[h];
      if (a.pre[h] <= 0) continue;
      double dh = delta * m.w2[h];
      gb1[h] += dh;
      for (size_t i = 0; i < kInputs; ++i) gw1[h * kInputs + i] += dh * r.features[i];
    }
  }
  return g;
}

double GradCheck(const MlpModel &model, const std::vector<LabeledRow> &batch,
                 double h) {
  std::vector<double> analytic = Gradient(model, batch);
  std::vector<double> params = model.Flatten();
  MlpModel probe = model;
  double worst = 0;
  for (size_t i = 0; i < params.size(); ++i) {
    double saved = params[i];
    params[i] = saved + h;
    probe.Unflatten(params);
    double up = Loss(probe, batch);
    params[i] = saved - h;
    probe.Unflatten(params);
    double down = Loss(probe, batch);
    params[i] = saved;
    double numeric = (up - down) / (2 * h);
    double scale = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
  }
  return worst;
}

MlpModel InitMlp(size_t hidden, uint64_t seed) {
  if (hidden == 0) {
    throw Error(ErrorCode::kInvalidArgument, "hidden layer width must be >= 1",
                "hidden");
  }
  MlpModel m = MlpModel::Zero(hidden);
  std::mt19937_64 rng(seed);
  const auto uniform = [&](double limit) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return (2 * u - 1) * limit;
  };
  double limit1 = std::sqrt(6.0 / static_cast<double>(kInputs + hidden));
  double limit2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
  for (double &w : m.w1) w = uniform(limit1);
  for (double &w : m.w2) w = uniform(limit2);
  return m;
}

MlpTrainResult TrainMlp(const TrainSet &data, const MlpTrainConfig &config) {
  std::vector<LabeledRow> train, dev;
  for (const LabeledRow &r : data.rows) {
    CheckFeatures(r.features);
    if (r.label != 0 && r.label != 1) {
      throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
    (r.dev ? dev : train).push_back(r);
  }
  bool has_pos = std::any_of(train.begin(), train.end(),
                             [](const LabeledRow &r) { return r.label == 1; });
  bool has_neg = std::any_of(train.begin(), train.end(),
                             [](const LabeledRow &r) { return r.label == 0; });
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::kInvalidArgument,
                "classifier training needs both labels in the train split");
  }
  if (!(config.lr > 0) || config.epochs < 0 || config.patience < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid classifier train config");
  }

  MlpTrainResult result;
  MlpModel model = InitMlp(config.hidden, config.seed);
  const auto mean = [](double sum, size_t n) { return n ? sum / n : 0.0; };
  const std::vector<LabeledRow> &selection = dev.empty() ? train : dev;

  double train_loss = mean(Loss(model, train), train.size());
  double best = mean(Loss(model, selection), selection.size());
  result.train_loss.push_back(train_loss);
  result.dev_loss.push_back(mean(Loss(model, dev), dev.size()));
  result.model = model;

  std::mt19937_64 rng(config.seed ^ 0xD1B54A32D192ED03ULL);
  std::vector<size_t> order(train.size());
  double lr = config.lr;
  int since_best = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    MlpModel candidate = model;
    std::vector<double> params = candidate.Flatten();
    for (size_t idx : order) {
      std::vector<double> g = Gradient(candidate, {train[idx]});
      for (size_t p = 0; p < params.size(); ++p) params[p] -= lr * g[p];
      candidate.Unflatten(params);
    }
    ++result.epochs_run;
    double candidate_loss = mean(Loss(candidate, train), train.size());
    if (!std::isfinite(candidate_loss) || candidate_loss > train_loss) {
      lr /= 2;  // reject the epoch
    } else {
      model = std::move(candidate);
      train_loss = candidate_loss;
    }
    result.train_loss.push_back(train_loss);
    double dev_loss = mean(Loss(model, dev), dev.size());
    result.dev_loss.push_back(dev_loss);
    double select = dev.empty() ? train_loss : dev_loss;
    if (select < best) {
      best = select;
      result.model = model;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

TrainSet TrainSet::ParseCsv(std::string_view text) {
  TrainSet set;
  size_t line_no = 0;
  for (std::string_view raw : Split(text, '\n')) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty()) continue;
    std::vector<std::string> fields = Split(line, ',');
    const auto fail = [&](const std::string &what) {
      throw Error(ErrorCode::kFormat,
                  "train set line " + std::to_string(line_no) + ": " + what);
    };
    if (fields.size() != kInputs + 2) {
      fail("expected " + std::to_string(kInputs + 2) + " fields, found " +
           std::to_string(fields.size()));
    }
    LabeledRow row;
    bool numeric = true;
    for (size_t i = 0; i < kInputs; ++i) {
      std::string f(Trim(fields[i]));
      char *end = nullptr;
      row.features[i] = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size()) numeric = false;
    }
    if (!numeric) {
      if (set.rows.empty() && line_no == 1) continue;  // header
      fail("non-numeric feature");
    }
    std::string label(Trim(fields[kInputs]));
    if (label != "0" && label != "1") fail("label must be 0 or 1");
    row.label = label == "1" ? 1 : 0;
    std::string split(Trim(fields[kInputs + 1]));
    if (split != "train" && split != "dev") fail("split must be train or dev");
    row.dev = split == "dev";
    set.rows.push_back(row);
  }
  return set;
}

std::string TrainSet::ToCsv() const {
  std::string out = "f1,f2,f3,f4,f5,label,split\n";
  char buffer[32];
  for (const LabeledRow &r : rows) {
    for (double f : r.features) {
      std::snprintf(buffer, sizeof(buffer), "%.17g,", f);
      out += buffer;
    }
    out += std::to_string(r.label) + (r.dev ? ",dev\n" : ",train\n");
  }
  return out;
}

std::string MlpToJson(const MlpModel &model) {
  json doc = {{"layer_sizes", {kInputs, model.hidden, 1}},
              {"w1", model.w1},
              {"b1", model.b1},
              {"w2", model.w2},
              {"b2", {model.b2}}};
  return doc.dump(2) + "\n";
}

MlpModel MlpFromJson(std::string_view text) {
  try {
    json doc = json::parse(text);
    auto sizes = doc.at("layer_sizes").get<std::vector<size_t>>();
    if (sizes.size() != 3 || sizes[0] != kInputs || sizes[2] != 1 ||
        sizes[1] == 0) {
      throw Error(ErrorCode::kFormat, "layer_sizes must be [5, H, 1]");
    }
    MlpModel m;
    m.hidden = sizes[1];
    m.w1 = doc.at("w1").get<std::vector<double>>();
    m.b1 = doc.at("b1").get<std::vector<double>>();
    m.w2 = doc.at("w2").get<std::vector<double>>();
    auto b2 = doc.at("b2").get<std::vector<double>>();
    const auto check = [](const std::string &name, size_t got, size_t want) {
      if (got != want) {
        throw Error(ErrorCode::kFormat, name + " has " + std::to_string(got) +
                                            " values, expected " +
                                            std::to_string(want));
      }
    };
    check("w1", m.w1.size(), m.hidden * kInputs);
    check("b1", m.b1.size(), m.hidden);
    check("w2", m.w2.size(), m.hidden);
    check("b2", b2.size(), 1);
    m.b2 = b2[0];
    for (double p : m.Flatten()) {
      if (!std::isfinite(p)) throw Error(ErrorCode::kFormat, "non-finite parameter");
    }
    return m;
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kFormat, std::string("classifier model: ") + e.what());
  }
}

}  // namespace termset
