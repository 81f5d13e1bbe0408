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

#include "termset/expansion.h"

#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "termset/error.h"

namespace termset {

using nlohmann::json;

std::optional<size_t> GroupRow(const EmbeddingModel &model, GroupId id) {
  return model.TargetIndex(std::to_string(id));
}

namespace {

std::set<std::string> SeedUnits(const SeedSet &seed) {
  std::set<std::string> units;
  for (GroupId id : seed.ids) units.insert(std::to_string(id));
  return units;
}

// Centroid of the seeds present in `model`; empty if none are.
std::vector<double> SeedCentroid(const EmbeddingModel &model,
                                 const SeedSet &seed) {
  std::vector<std::span<const double>> rows;
  for (GroupId id : seed.ids) {
    if (auto row = GroupRow(model, id)) rows.push_back(model.TargetRow(*row));
  }
  if (rows.empty()) return {};
  return Centroid(rows);
}

GroupId ParseGroupUnit(const std::string &unit) {
  return static_cast<GroupId>(std::stoll(unit));
}

bool ByCertainty(const Candidate &a, const Candidate &b) {
  if (a.certainty != b.certainty) return a.certainty > b.certainty;
  return a.group < b.group;
}

}  // namespace

std::vector<std::pair<GroupId, double>> ExpandSimple(const EmbeddingModel &model,
                                                     const SeedSet &seed,
                                                     size_t k) {
  if (seed.ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "seed set is empty", "seed_ids");
  }
  std::vector<std::string> missing;
  for (GroupId id : seed.ids) {
    if (!GroupRow(model, id)) missing.push_back(std::to_string(id));
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "seed ids not in the " + std::string(ContextTypeName(model.ctype())) +
                    " model vocabulary: " + Join(missing, ", "),
                "seed_ids");
  }
  if (k == 0) return {};
  std::vector<double> centroid = SeedCentroid(model, seed);
  std::vector<std::pair<GroupId, double>> out;
  for (const Neighbor &n : model.Nearest(centroid, k, SeedUnits(seed))) {
    out.emplace_back(ParseGroupUnit(n.unit), n.similarity);
  }
  return out;
}

std::vector<Candidate> ScoreCandidates(const ModelSet &models,
                                       const SeedSet &seed, size_t pool_size) {
  if (seed.ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "seed set is empty", "seed_ids");
  }
  if (models.empty()) {
    throw Error(ErrorCode::kConflict, "no trained context models");
  }
  std::array<std::vector<double>, kNumContextTypes> centroids;
  bool any = false;
  for (const auto &[ctype, model] : models) {
    centroids[Index(ctype)] = SeedCentroid(*model, seed);
    any |= !centroids[Index(ctype)].empty();
  }
  if (!any) {
    std::vector<std::string> ids;
    for (GroupId id : seed.ids) ids.push_back(std::to_string(id));
    throw Error(ErrorCode::kInvalidArgument,
                "no context model contains any seed (" + Join(ids, ", ") + ")",
                "seed_ids");
  }
  if (pool_size == 0) return {};

  std::set<GroupId> pool;
  std::set<std::string> exclude = SeedUnits(seed);
  for (const auto &[ctype, model] : models) {
    const auto &centroid = centroids[Index(ctype)];
    if (centroid.empty() || IsZero(centroid)) continue;
    for (const Neighbor &n : model->Nearest(centroid, pool_size, exclude)) {
      pool.insert(ParseGroupUnit(n.unit));
    }
  }

  std::vector<Candidate> out;
  for (GroupId id : pool) {
    Candidate c;
    c.group = id;
    for (const auto &[ctype, model] : models) {
      const auto &centroid = centroids[Index(ctype)];
      if (centroid.empty() || IsZero(centroid)) continue;
      auto row = GroupRow(*model, id);
      if (!row || IsZero(model->TargetRow(*row))) continue;
      c.features[Index(ctype)] = model->Similarity(centroid, *row);
      c.available[Index(ctype)] = true;
    }
    out.push_back(c);
  }
  return out;
}

namespace {

double Certainty(const Candidate &c, const MlpModel *mlp) {
  if (mlp != nullptr) return Forward(*mlp, c.features);
  double sum = 0;
  int n = 0;
  for (size_t i = 0; i < kNumContextTypes; ++i) {
    if (c.available[i]) {
      sum += c.features[i];
      ++n;
    }
  }
  if (n == 0) return 0.5;
  return std::clamp((1.0 + sum / n) / 2.0, 0.0, 1.0);
}

Candidate SeedItem(const ModelSet &models, const SeedSet &seed, GroupId id) {
  Candidate c;
  c.group = id;
  c.seed = true;
  c.certainty = 1.0;
  for (const auto &[ctype, model] : models) {
    auto row = GroupRow(*model, id);
    if (!row || IsZero(model->TargetRow(*row))) continue;
    std::vector<double> centroid = SeedCentroid(*model, seed);
    if (centroid.empty() || IsZero(centroid)) continue;
    c.features[Index(ctype)] = model->Similarity(centroid, *row);
    c.available[Index(ctype)] = true;
  }
  return c;
}

}  // namespace

ExpansionResult Expand(const ModelSet &models, const MlpModel *mlp,
                       const SeedSet &seed, size_t k, size_t pool_size) {
  std::vector<Candidate> candidates = ScoreCandidates(models, seed, pool_size);
  for (Candidate &c : candidates) c.certainty = Certainty(c, mlp);
  std::sort(candidates.begin(), candidates.end(), ByCertainty);
  if (candidates.size() > k) candidates.resize(k);

  ExpansionResult result;
  result.seed = seed;
  result.scorer = mlp != nullptr ? Scorer::kMlp : Scorer::kMean;
  result.k = k;
  result.pool_size = pool_size;
  for (GroupId id : seed.ids) result.items.push_back(SeedItem(models, seed, id));
  result.items.insert(result.items.end(), candidates.begin(), candidates.end());
  return result;
}

ExpansionResult Reexpand(const ExpansionResult &result,
                         const std::set<GroupId> &accepted,
                         const ModelSet &models, const MlpModel *mlp) {
  std::set<GroupId> known;
  for (const Candidate &c : result.items) known.insert(c.group);
  SeedSet seed = result.seed;
  for (GroupId id : accepted) {
    if (!known.count(id)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "accepted id " + std::to_string(id) +
                      " is not part of the expansion being re-expanded",
                  "accepted_ids");
    }
    seed.ids.insert(id);
  }
  return Expand(models, mlp, seed, result.k, result.pool_size);
}

std::string_view ScorerName(Scorer scorer) {
  return scorer == Scorer::kMlp ? "mlp" : "mean";
}

std::string ExpansionToJson(const ExpansionResult &result,
                            const GroupIndex &groups,
                            std::string_view session_id) {
  json items = json::array();
  for (const Candidate &c : result.items) {
    json features = json::array();
    for (double f : c.features) features.push_back(f);
    json available = json::array();
    for (bool a : c.available) available.push_back(a);
    items.push_back({{"group_id", c.group},
                     {"canonical", groups.Canonical(c.group)},
                     {"certainty", c.certainty},
                     {"seed", c.seed},
                     {"completed", result.validated.count(c.group) > 0},
                     {"features", std::move(features)},
                     {"available", std::move(available)}});
  }
  json doc = json::object();
  if (!session_id.empty()) doc["session_id"] = std::string(session_id);
  doc["category"] = result.seed.category;
  doc["scorer"] = std::string(ScorerName(result.scorer));
  doc["k"] = result.k;
  doc["pool_size"] = result.pool_size;
  doc["items"] = std::move(items);
  // nlohmann's default object sorts keys, which keeps the output stable
  // across writers.
  return doc.dump();
}

ExpansionResult ExpansionFromJson(std::string_view text) {
  try {
    json doc = json::parse(text);
    ExpansionResult r;
    r.seed.category = doc.at("category").get<std::string>();
    r.scorer = doc.at("scorer").get<std::string>() == "mlp" ? Scorer::kMlp
                                                            : Scorer::kMean;
    r.k = doc.at("k").get<size_t>();
    r.pool_size = doc.at("pool_size").get<size_t>();
    for (const json &item : doc.at("items")) {
      Candidate c;
      c.group = item.at("group_id").get<GroupId>();
      c.certainty = item.at("certainty").get<double>();
      c.seed = item.at("seed").get<bool>();
      auto features = item.at("features").get<std::vector<double>>();
      if (features.size() != kNumContextTypes) {
        throw Error(ErrorCode::kFormat, "features must have 5 entries");
      }
      std::copy(features.begin(), features.end(), c.features.begin());
      if (item.contains("available")) {
        auto available = item["available"].get<std::vector<bool>>();
        for (size_t i = 0; i < kNumContextTypes && i < available.size(); ++i) {
          c.available[i] = available[i];
        }
      }
      if (c.seed) r.seed.ids.insert(c.group);
      if (item.at("completed").get<bool>()) r.validated.insert(c.group);
      r.items.push_back(c);
    }
    return r;
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kFormat, std::string("expansion result: ") + e.what());
  }
}

namespace {

std::string CsvField(const std::string &s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string ExportValidatedCsv(const ExpansionResult &result,
                               const GroupIndex &groups) {
  std::string out = "canonical,group_id,certainty\n";
  char buffer[32];
  for (const Candidate &c : result.items) {
    if (!result.validated.count(c.group)) continue;
    std::snprintf(buffer, sizeof(buffer), "%.17g", c.certainty);
    out += CsvField(groups.Canonical(c.group)) + "," + std::to_string(c.group) +
           "," + buffer + "\n";
  }
  return out;
}

}  // namespace termset
