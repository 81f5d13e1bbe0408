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

#include "termset/embedding.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "termset/error.h"
#include "termset/text.h"

namespace termset {

std::string_view ContextTypeName(ContextType t) {
  switch (t) {
    case ContextType::kLinear: return "linear";
    case ContextType::kList: return "list";
    case ContextType::kDependency: return "dependency";
    case ContextType::kSymmetric: return "symmetric";
    case ContextType::kUnary: return "unary";
  }
  return "linear";
}

std::optional<ContextType> ParseContextType(std::string_view name) {
  for (ContextType t : kAllContextTypes) {
    if (ContextTypeName(t) == name) return t;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary(std::vector<std::string> units,
                       std::vector<uint64_t> counts)
    : units_(std::move(units)), counts_(std::move(counts)) {
  counts_.resize(units_.size(), 0);
  for (size_t i = 0; i < units_.size(); ++i) index_.emplace(units_[i], i);
}

Vocabulary Vocabulary::FromCounts(
    const std::unordered_map<std::string, uint64_t> &counts,
    uint64_t min_count) {
  std::vector<std::pair<std::string, uint64_t>> kept;
  for (const auto &[unit, count] : counts) {
    if (count >= min_count) kept.emplace_back(unit, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> units;
  std::vector<uint64_t> sorted_counts;
  for (auto &[unit, count] : kept) {
    units.push_back(std::move(unit));
    sorted_counts.push_back(count);
  }
  return Vocabulary(std::move(units), std::move(sorted_counts));
}

std::optional<size_t> Vocabulary::Find(std::string_view unit) const {
  auto it = index_.find(std::string(unit));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::pair<Vocabulary, Vocabulary> BuildVocab(std::span<const UnitPair> pairs,
                                             uint64_t min_count) {
  std::unordered_map<std::string, uint64_t> target_counts, context_counts;
  for (const UnitPair &p : pairs) {
    ++target_counts[p.target];
    ++context_counts[p.context];
  }
  Vocabulary targets = Vocabulary::FromCounts(target_counts, min_count);
  Vocabulary contexts = Vocabulary::FromCounts(context_counts, min_count);
  if (targets.empty() || contexts.empty()) {
    throw Error(ErrorCode::kTraining,
                "empty vocabulary after min_count=" + std::to_string(min_count) +
                    " (" + std::to_string(pairs.size()) + " pairs, " +
                    std::to_string(targets.size()) + " targets, " +
                    std::to_string(contexts.size()) + " contexts kept)");
  }
  return {std::move(targets), std::move(contexts)};
}

// ---------------------------------------------------------------------------
// Vector math

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

bool IsZero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cosine of vectors of size " +
                                                 std::to_string(a.size()) +
                                                 " and " +
                                                 std::to_string(b.size()));
  }
  double na = std::sqrt(Dot(a, a));
  double nb = std::sqrt(Dot(b, b));
  if (na == 0 || nb == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "cosine similarity is undefined for a zero vector");
  }
  return std::clamp(Dot(a, b) / (na * nb), -1.0, 1.0);
}

std::vector<double> Centroid(
    const std::vector<std::span<const double>> &vectors) {
  if (vectors.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "centroid of an empty set");
  }
  std::vector<double> out(vectors[0].size(), 0.0);
  for (const auto &v : vectors) {
    if (v.size() != out.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "centroid inputs have different dimensions");
    }
    for (size_t i = 0; i < v.size(); ++i) out[i] += v[i];
  }
  for (double &x : out) x /= static_cast<double>(vectors.size());
  return out;
}

namespace {

// log(1 + exp(x)) without overflow.
double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double SgnsLoss(std::span<const double> target, std::span<const double> context,
                const std::vector<std::span<const double>> &negatives) {
  double loss = Softplus(-Dot(target, context));
  for (const auto &n : negatives) loss += Softplus(Dot(target, n));
  return loss;
}

SgnsGradient ComputeSgnsGradient(
    std::span<const double> target, std::span<const double> context,
    const std::vector<std::span<const double>> &negatives) {
  const size_t dim = target.size();
  SgnsGradient g;
  g.loss = SgnsLoss(target, context, negatives);
  g.target.assign(dim, 0.0);
  // d/dx softplus(-x) = -sigmoid(-x); d/dx softplus(x) = sigmoid(x).
  double pos = -Sigmoid(-Dot(target, context));
  g.context.resize(dim);
  for (size_t i = 0; i < dim; ++i) {
    g.target[i] += pos * context[i];
    g.context[i] = pos * target[i];
  }
  for (const auto &n : negatives) {
    double neg = Sigmoid(Dot(target, n));
    std::vector<double> gn(dim);
    for (size_t i = 0; i < dim; ++i) {
      g.target[i] += neg * n[i];
      gn[i] = neg * target[i];
    }
    g.negatives.push_back(std::move(gn));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Model

EmbeddingModel::EmbeddingModel(ContextType ctype, Vocabulary targets,
                               Vocabulary contexts, Matrix target_matrix,
                               Matrix context_matrix)
    : ctype_(ctype),
      targets_(std::move(targets)),
      contexts_(std::move(contexts)),
      target_matrix_(std::move(target_matrix)),
      context_matrix_(std::move(context_matrix)) {
  if (target_matrix_.rows() != targets_.size() ||
      context_matrix_.rows() != contexts_.size()) {
    throw Error(ErrorCode::kInternal,
                "embedding matrix rows do not match vocabulary sizes");
  }
  RefreshNorms();
}

void EmbeddingModel::RefreshNorms() {
  target_norms_.resize(target_matrix_.rows());
  for (size_t i = 0; i < target_matrix_.rows(); ++i) {
    auto row = target_matrix_.row(i);
    target_norms_[i] = std::sqrt(Dot(row, row));
  }
}

double EmbeddingModel::Similarity(std::span<const double> query,
                                  size_t i) const {
  double qn = std::sqrt(Dot(query, query));
  if (qn == 0 || target_norms_[i] == 0) return 0.0;
  return std::clamp(Dot(query, target_matrix_.row(i)) / (qn * target_norms_[i]),
                    -1.0, 1.0);
}

bool UnitLess(std::string_view a, std::string_view b) {
  const auto numeric = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
      return c >= '0' && c <= '9';
    });
  };
  bool na = numeric(a), nb = numeric(b);
  if (na && nb) {
    // Compare without leading zeros by length, then lexicographically.
    while (a.size() > 1 && a.front() == '0') a.remove_prefix(1);
    while (b.size() > 1 && b.front() == '0') b.remove_prefix(1);
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
  if (na != nb) return na;
  return a < b;
}

std::vector<Neighbor> EmbeddingModel::Nearest(
    std::span<const double> query, size_t k,
    const std::set<std::string> &exclude) const {
  if (k == 0) return {};
  if (query.size() != dim()) {
    throw Error(ErrorCode::kInvalidArgument,
                "query has dimension " + std::to_string(query.size()) +
                    ", model has " + std::to_string(dim()));
  }
  double qn = std::sqrt(Dot(query, query));
  if (qn == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "nearest-neighbour query is a zero vector");
  }
  std::vector<Neighbor> all;
  for (size_t i = 0; i < targets_.size(); ++i) {
    if (target_norms_[i] == 0) continue;
    if (exclude.count(targets_.unit(i))) continue;
    all.push_back({i, targets_.unit(i), Similarity(query, i)});
  }
  const auto better = [](const Neighbor &a, const Neighbor &b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return UnitLess(a.unit, b.unit);
  };
  if (k < all.size()) {
    std::partial_sort(all.begin(), all.begin() + static_cast<long>(k),
                      all.end(), better);
    all.resize(k);
  } else {
    std::sort(all.begin(), all.end(), better);
  }
  return all;
}

// ---------------------------------------------------------------------------
// Training

void TrainConfig::Validate() const {
  const auto fail = [](const std::string &field, const std::string &why) {
    throw Error(ErrorCode::kInvalidArgument, "train_config." + field + " " + why,
                "train_config." + field);
  };
  if (dim < 2) fail("dim", "must be >= 2");
  if (epochs < 0) fail("epochs", "must be >= 0");
  if (negatives < 1) fail("negatives", "must be >= 1");
  if (!(alpha > 0)) fail("alpha", "must be positive");
  if (min_count < 1) fail("min_count", "must be >= 1");
  if (!(subsample >= 0)) fail("subsample", "must be >= 0");
  if (workers < 1) fail("workers", "must be >= 1");
  if (table_size < 1) fail("table_size", "must be >= 1");
  if (progress_every < 1) fail("progress_every", "must be >= 1");
}

std::string FormatProgress(const TrainProgress &progress) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), "PROGRESS %llu %.6g %.6f",
                static_cast<unsigned long long>(progress.pairs), progress.alpha,
                progress.mean_loss);
  return buffer;
}

namespace {

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  uint64_t Next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  uint64_t Below(uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

std::vector<uint32_t> BuildUnigramTable(const Vocabulary &contexts,
                                        size_t table_size) {
  constexpr double kPower = 0.75;
  double total = 0;
  for (size_t i = 0; i < contexts.size(); ++i) {
    total += std::pow(static_cast<double>(contexts.count(i)), kPower);
  }
  std::vector<uint32_t> table(table_size);
  size_t unit = 0;
  double cumulative =
      std::pow(static_cast<double>(contexts.count(0)), kPower) / total;
  for (size_t a = 0; a < table_size; ++a) {
    table[a] = static_cast<uint32_t>(unit);
    if (static_cast<double>(a) / static_cast<double>(table_size) > cumulative &&
        unit + 1 < contexts.size()) {
      ++unit;
      cumulative +=
          std::pow(static_cast<double>(contexts.count(unit)), kPower) / total;
    }
  }
  return table;
}

template <bool kShared>
inline double Load(const double &x) {
  if constexpr (kShared) {
    return std::atomic_ref<const double>(x).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool kShared>
inline void Add(double &x, double delta) {
  if constexpr (kShared) {
    std::atomic_ref<double> ref(x);
    ref.store(ref.load(std::memory_order_relaxed) + delta,
              std::memory_order_relaxed);
  } else {
    x += delta;
  }
}

struct Trainer {
  const TrainConfig &config;
  EmbeddingModel &model;
  const std::vector<std::pair<uint32_t, uint32_t>> &pairs;
  const std::vector<double> &keep_prob;
  const std::vector<uint32_t> &table;
  uint64_t total_visits;
  std::atomic<uint64_t> visits{0};
  // Reports fire on multiples of progress_every in the global visit count,
  // from whichever worker reaches them.
  std::mutex progress_mu{};
  uint64_t last_report = 0;

  double Alpha(uint64_t done) const {
    double frac = 1.0 - static_cast<double>(done) /
                            static_cast<double>(total_visits + 1);
    return config.alpha * std::max(frac, 1e-4);
  }

  // One SGD step on a (target, context) example; returns its loss.
  template <bool kShared>
  double Step(uint32_t t, uint32_t c, double alpha, Rng &rng,
              std::vector<double> &grad) {
    const size_t dim = static_cast<size_t>(config.dim);
    double *v = model.mutable_target_matrix().row(t).data();
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0;
    for (int d = 0; d <= config.negatives; ++d) {
      uint32_t unit;
      double label;
      if (d == 0) {
        unit = c;
        label = 1;
      } else {
        unit = table[rng.Below(table.size())];
        if (unit == c) continue;
        label = 0;
      }
      double *u = model.mutable_context_matrix().row(unit).data();
      double f = 0;
      for (size_t i = 0; i < dim; ++i) f += Load<kShared>(v[i]) * Load<kShared>(u[i]);
      loss += label == 1 ? Softplus(-f) : Softplus(f);
      double g = (label - Sigmoid(f)) * alpha;
      for (size_t i = 0; i < dim; ++i) {
        grad[i] += g * Load<kShared>(u[i]);
        Add<kShared>(u[i], g * Load<kShared>(v[i]));
      }
    }
    for (size_t i = 0; i < dim; ++i) Add<kShared>(v[i], grad[i]);
    return loss;
  }

  template <bool kShared>
  void Run(const std::vector<size_t> &order, size_t begin, size_t end,
           Rng &rng, int epoch, const ProgressCallback *progress) {
    std::vector<double> grad(static_cast<size_t>(config.dim));
    double loss_sum = 0;
    uint64_t loss_n = 0;
    for (size_t p = begin; p < end; ++p) {
      uint64_t done = visits.fetch_add(1, std::memory_order_relaxed);
      double alpha = Alpha(done);
      auto [t, c] = pairs[order[p]];
      bool keep = keep_prob[c] >= 1.0 || rng.Uniform() < keep_prob[c];
      if (keep) {
        double loss = Step<kShared>(t, c, alpha, rng, grad);
        if (!std::isfinite(loss)) {
          throw Error(ErrorCode::kTraining,
                      "non-finite loss at epoch " + std::to_string(epoch) +
                          ", pair " + std::to_string(order[p]) + " (target '" +
                          model.targets().unit(t) + "', context '" +
                          model.contexts().unit(c) + "'), alpha " +
                          std::to_string(alpha));
        }
        loss_sum += loss;
        ++loss_n;
      }
      if (progress != nullptr && *progress &&
          (done + 1) % config.progress_every == 0) {
        std::lock_guard<std::mutex> lock(progress_mu);
        (*progress)({done + 1, alpha, loss_n ? loss_sum / loss_n : 0.0});
        last_report = done + 1;
        loss_sum = 0;
        loss_n = 0;
      }
    }
  }
};

void CheckFinite(const Matrix &m, std::string_view name, int epoch) {
  for (size_t r = 0; r < m.rows(); ++r) {
    for (double x : m.row(r)) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kTraining,
                    "non-finite value in " + std::string(name) + " row " +
                        std::to_string(r) + " after epoch " +
                        std::to_string(epoch));
      }
    }
  }
}

}  // namespace

EmbeddingModel InitModel(ContextType ctype, Vocabulary targets,
                         Vocabulary contexts, const TrainConfig &config) {
  config.Validate();
  const size_t dim = static_cast<size_t>(config.dim);
  Matrix target_matrix(targets.size(), dim);
  Matrix context_matrix(contexts.size(), dim);
  Rng rng(config.seed);
  for (double &x : target_matrix.data()) {
    x = (rng.Uniform() - 0.5) / static_cast<double>(dim);
  }
  return EmbeddingModel(ctype, std::move(targets), std::move(contexts),
                        std::move(target_matrix), std::move(context_matrix));
}

EmbeddingModel TrainSgns(std::span<const UnitPair> pairs, ContextType ctype,
                         const TrainConfig &config,
                         const ProgressCallback &progress) {
  config.Validate();
  auto [targets, contexts] = BuildVocab(pairs, config.min_count);
  EmbeddingModel model =
      InitModel(ctype, std::move(targets), std::move(contexts), config);

  std::vector<std::pair<uint32_t, uint32_t>> indexed;
  indexed.reserve(pairs.size());
  for (const UnitPair &p : pairs) {
    auto t = model.targets().Find(p.target);
    auto c = model.contexts().Find(p.context);
    if (t && c) {
      indexed.emplace_back(static_cast<uint32_t>(*t), static_cast<uint32_t>(*c));
    }
  }

  const Vocabulary &cv = model.contexts();
  double total_contexts = 0;
  for (size_t i = 0; i < cv.size(); ++i) {
    total_contexts += static_cast<double>(cv.count(i));
  }
  std::vector<double> keep_prob(cv.size(), 1.0);
  if (config.subsample > 0) {
    for (size_t i = 0; i < cv.size(); ++i) {
      double f = static_cast<double>(cv.count(i)) / total_contexts;
      keep_prob[i] = std::min(1.0, std::sqrt(config.subsample / f));
    }
  }
  std::vector<uint32_t> table = BuildUnigramTable(cv, config.table_size);

  Trainer trainer{config,
                  model,
                  indexed,
                  keep_prob,
                  table,
                  static_cast<uint64_t>(config.epochs) * indexed.size()};
  // Seeded apart from InitModel's stream.
  Rng rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<size_t> order(indexed.size());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.Below(i)]);
    }
    if (config.workers == 1) {
      trainer.Run<false>(order, 0, order.size(), rng, epoch, &progress);
    } else {
      const size_t n = static_cast<size_t>(config.workers);
      std::vector<std::thread> threads;
      std::vector<std::exception_ptr> errors(n);
      for (size_t w = 0; w < n; ++w) {
        threads.emplace_back([&, w] {
          try {
            Rng worker_rng(config.seed + 0x632BE59BD9B4E019ULL * (w + 1) +
                           static_cast<uint64_t>(epoch));
            size_t begin = order.size() * w / n;
            size_t end = order.size() * (w + 1) / n;
            trainer.Run<true>(order, begin, end, worker_rng, epoch,
                              &progress);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto &t : threads) t.join();
      for (auto &e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    CheckFinite(model.target_matrix(), "target matrix", epoch);
    CheckFinite(model.context_matrix(), "context matrix", epoch);
  }
  model.RefreshNorms();
  if (progress) {
    uint64_t done = trainer.visits.load();
    if (done != trainer.last_report) progress({done, trainer.Alpha(done), 0.0});
  }
  return model;
}

// ---------------------------------------------------------------------------
// Persistence

std::string EscapeUnit(std::string_view unit) {
  std::string out;
  for (char c : unit) {
    if (c == '%' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      char buffer[4];
      std::snprintf(buffer, sizeof(buffer), "%%%02X",
                    static_cast<unsigned char>(c));
      out += buffer;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string UnescapeUnit(std::string_view escaped) {
  std::string out;
  for (size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] == '%' && i + 2 < escaped.size()) {
      int value = 0;
      auto [ptr, ec] = std::from_chars(escaped.data() + i + 1,
                                       escaped.data() + i + 3, value, 16);
      if (ec == std::errc() && ptr == escaped.data() + i + 3) {
        out.push_back(static_cast<char>(value));
        i += 2;
        continue;
      }
    }
    out.push_back(escaped[i]);
  }
  return out;
}

namespace {

void WriteMatrix(const Vocabulary &vocab, const Matrix &m,
                 const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << vocab.size() << ' ' << m.cols() << '\n';
  char buffer[32];
  for (size_t r = 0; r < vocab.size(); ++r) {
    out << EscapeUnit(vocab.unit(r));
    for (double x : m.row(r)) {
      // %.17g round-trips every double exactly.
      std::snprintf(buffer, sizeof(buffer), " %.17g", x);
      out << buffer;
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

std::pair<Vocabulary, Matrix> ReadMatrix(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFormat, "missing model file " + path);
  const auto fail = [&](size_t line, const std::string &what) {
    throw Error(ErrorCode::kFormat,
                path + ":" + std::to_string(line) + ": " + what);
  };
  std::string line;
  if (!std::getline(in, line)) fail(1, "missing header");
  std::vector<std::string> header = SplitWhitespace(line);
  size_t rows = 0, dim = 0;
  if (header.size() != 2 ||
      std::from_chars(header[0].data(), header[0].data() + header[0].size(),
                      rows).ec != std::errc() ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(),
                      dim).ec != std::errc() ||
      dim == 0) {
    fail(1, "header must be 'V dim'");
  }
  std::vector<std::string> units;
  Matrix m(rows, dim);
  for (size_t r = 0; r < rows; ++r) {
    size_t line_no = r + 2;
    if (!std::getline(in, line)) {
      fail(line_no, "truncated: expected " + std::to_string(rows) +
                        " rows, found " + std::to_string(r));
    }
    std::vector<std::string> fields = Split(line, ' ');
    if (fields.size() != dim + 1) {
      fail(line_no, "row '" + (fields.empty() ? "" : fields[0]) + "' has " +
                        std::to_string(fields.size() - 1) +
                        " values, header says dim " + std::to_string(dim));
    }
    units.push_back(UnescapeUnit(fields[0]));
    auto row = m.row(r);
    for (size_t i = 0; i < dim; ++i) {
      const std::string &f = fields[i + 1];
      char *end = nullptr;
      double value = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(value)) {
        fail(line_no, "bad value '" + f + "' in row '" + fields[0] + "'");
      }
      row[i] = value;
    }
  }
  while (std::getline(in, line)) {
    if (!Trim(line).empty()) fail(rows + 2, "more rows than the header's V");
  }
  return {Vocabulary(std::move(units), {}), std::move(m)};
}

}  // namespace

void SaveModel(const EmbeddingModel &model, const std::string &path) {
  WriteMatrix(model.targets(), model.target_matrix(), path);
  WriteMatrix(model.contexts(), model.context_matrix(), path + ".ctx");
}

EmbeddingModel LoadModel(const std::string &path, ContextType ctype) {
  auto [targets, target_matrix] = ReadMatrix(path);
  auto [contexts, context_matrix] = ReadMatrix(path + ".ctx");
  if (target_matrix.cols() != context_matrix.cols()) {
    throw Error(ErrorCode::kFormat,
                path + ": target and context dimensions differ");
  }
  return EmbeddingModel(ctype, std::move(targets), std::move(contexts),
                        std::move(target_matrix), std::move(context_matrix));
}

}  // namespace termset
