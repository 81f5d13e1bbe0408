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

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "termset/expansion.h"
#include "test_util.h"

namespace termset {
namespace {

using testing::ThrownCode;

using Rows = std::map<GroupId, std::vector<double>>;

std::shared_ptr<const EmbeddingModel> MakeModel(ContextType ctype, const Rows &rows) {
  std::vector<std::string> units;
  size_t dim = rows.begin()->second.size();
  Matrix m(rows.size(), dim);
  size_t r = 0;
  for (const auto &[id, v] : rows) {
    units.push_back(std::to_string(id));
    std::copy(v.begin(), v.end(), m.row(r++).begin());
  }
  return std::make_shared<const EmbeddingModel>(ctype, Vocabulary(units, {}),
                                                Vocabulary({"c"}, {1}), m,
                                                Matrix(1, dim));
}

Rows RandomRows(std::mt19937 &rng, size_t n, size_t dim, GroupId first = 0) {
  std::normal_distribution<double> g;
  Rows rows;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (double &x : v) x = g(rng);
    rows[first + static_cast<GroupId>(i)] = v;
  }
  return rows;
}

GroupIndex IndexFor(GroupId n) {
  GroupIndex index;
  for (GroupId id = 0; id < n; ++id) {
    std::string name = "term" + std::to_string(id);
    index.Add(id, name, {name});
  }
  return index;
}

std::vector<GroupId> CandidateOrder(const ExpansionResult &r) {
  std::vector<GroupId> out;
  for (const Candidate &c : r.items) {
    if (!c.seed) out.push_back(c.group);
  }
  return out;
}

// A strictly increasing classifier of the feature at `index`.
MlpModel MonotoneMlp(ContextType ctype) {
  MlpModel m = MlpModel::Zero(2);
  m.w1[0 * kNumContextTypes + Index(ctype)] = 2.0;
  m.w1[1 * kNumContextTypes + Index(ctype)] = 0.5;
  m.b1 = {1.5, 1.0};  // keeps both units active for features in [-1, 1]
  m.w2 = {1.0, 3.0};
  m.b2 = -2.0;
  return m;
}

// Hand-built clusters: ids 0-3 point roughly along x, 4-7 along y.
Rows ClusterRows() {
  return {{0, {1.0, 0.1}},  {1, {0.9, 0.2}},  {2, {1.0, 0.3}}, {3, {0.8, 0.1}},
          {4, {0.1, 1.0}},  {5, {0.2, 0.9}},  {6, {0.0, 1.0}}, {7, {0.3, 1.0}}};
}

TEST_CASE("singleton seed ranks by similarity to its own vector") {
  std::mt19937 rng(1);
  auto model = MakeModel(ContextType::kLinear, RandomRows(rng, 15, 4));
  auto row = model->TargetRow(*GroupRow(*model, 3));
  auto expected = model->Nearest(std::vector<double>(row.begin(), row.end()), 14, {"3"});
  auto got = ExpandSimple(*model, {"c", {3}}, 14);
  REQUIRE(got.size() == expected.size());
  for (size_t i = 0; i < got.size(); ++i) {
    CHECK(std::to_string(got[i].first) == expected[i].unit);
  }
}

TEST_CASE("cluster seeds rank their cluster first") {
  auto model = MakeModel(ContextType::kLinear, ClusterRows());
  auto got = ExpandSimple(*model, {"x", {0, 1}}, 6);
  REQUIRE(got.size() == 6);
  std::set<GroupId> top2 = {got[0].first, got[1].first};
  CHECK(top2 == std::set<GroupId>{2, 3});
  CHECK(ExpandSimple(*model, {"x", {0, 1}}, 0).empty());
}

TEST_CASE("simple expansion names missing seeds") {
  auto model = MakeModel(ContextType::kLinear, ClusterRows());
  try {
    ExpandSimple(*model, {"x", {0, 42}}, 3);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
    CHECK(e.field() == "seed_ids");
    CHECK(std::string(e.what()).find("42") != std::string::npos);
  }
}

TEST_CASE("features are zero where a model cannot score") {
  ModelSet models;
  models[ContextType::kLinear] = MakeModel(ContextType::kLinear, ClusterRows());
  Rows list_rows = ClusterRows();
  list_rows.erase(2);
  models[ContextType::kList] = MakeModel(ContextType::kList, list_rows);
  auto candidates = ScoreCandidates(models, {"x", {0, 1}}, 10);
  auto it = std::find_if(candidates.begin(), candidates.end(),
                         [](const Candidate &c) { return c.group == 2; });
  REQUIRE(it != candidates.end());
  CHECK(it->available[Index(ContextType::kLinear)]);
  CHECK_FALSE(it->available[Index(ContextType::kList)]);
  CHECK(it->features[Index(ContextType::kList)] == 0.0);
  for (ContextType t : {ContextType::kDependency, ContextType::kSymmetric,
                        ContextType::kUnary}) {
    CHECK(it->features[Index(t)] == 0.0);
  }
  CHECK(it->features[Index(ContextType::kLinear)] > 0.9);
  // Ascending id order.
  for (size_t i = 1; i < candidates.size(); ++i) {
    CHECK(candidates[i - 1].group < candidates[i].group);
  }
}

TEST_CASE("candidate pool is the union of per-model top lists") {
  ModelSet models;
  // Seeds 0 and 1 exist in both models; the models favour disjoint groups.
  models[ContextType::kLinear] = MakeModel(
      ContextType::kLinear,
      {{0, {1, 0}}, {1, {1, 0.1}}, {2, {1, 0.05}}, {3, {-1, 0.2}}});
  models[ContextType::kUnary] = MakeModel(
      ContextType::kUnary,
      {{0, {1, 0}}, {1, {1, 0.1}}, {2, {-1, 0.3}}, {3, {1, 0.02}}});
  auto candidates = ScoreCandidates(models, {"x", {0, 1}}, 1);
  REQUIRE(candidates.size() == 2);
  CHECK(candidates[0].group == 2);
  CHECK(candidates[1].group == 3);
  CHECK(ScoreCandidates(models, {"x", {0, 1}}, 0).empty());
}

TEST_CASE("scoring errors") {
  ModelSet none;
  CHECK(ThrownCode([&] { ScoreCandidates(none, {"x", {0}}, 5); }) ==
        ErrorCode::kConflict);
  ModelSet models;
  models[ContextType::kLinear] = MakeModel(ContextType::kLinear, ClusterRows());
  CHECK(ThrownCode([&] { ScoreCandidates(models, {"x", {99}}, 5); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(ThrownCode([&] { ScoreCandidates(models, {"x", {}}, 5); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("seeds get certainty exactly one and lead the result") {
  std::mt19937 rng(2);
  ModelSet models;
  models[ContextType::kLinear] = MakeModel(ContextType::kLinear, RandomRows(rng, 30, 5));
  models[ContextType::kList] = MakeModel(ContextType::kList, RandomRows(rng, 25, 5));
  MlpModel mlp = MonotoneMlp(ContextType::kLinear);
  for (const MlpModel *m : std::initializer_list<const MlpModel *>{nullptr, &mlp}) {
    ExpansionResult r = Expand(models, m, {"c", {4, 9, 27}}, 10, 20);
    REQUIRE(r.items.size() == 13);
    for (size_t i = 0; i < 3; ++i) {
      CHECK(r.items[i].seed);
      CHECK(r.items[i].certainty == 1.0);
    }
    CHECK(r.items[0].group == 4);
    CHECK(r.items[2].group == 27);
    for (size_t i = 3; i < r.items.size(); ++i) {
      CHECK_FALSE(r.items[i].seed);
      CHECK(r.items[i].certainty >= 0.0);
      CHECK(r.items[i].certainty <= 1.0);
      if (i > 3) CHECK(r.items[i - 1].certainty >= r.items[i].certainty);
    }
    CHECK(r.scorer == (m ? Scorer::kMlp : Scorer::kMean));
  }
}

TEST_CASE("mean scorer maps the mean feature into [0, 1]") {
  ModelSet models;
  models[ContextType::kLinear] = MakeModel(ContextType::kLinear, ClusterRows());
  models[ContextType::kUnary] = MakeModel(ContextType::kUnary, ClusterRows());
  ExpansionResult r = Expand(models, nullptr, {"x", {0}}, 3);
  for (const Candidate &c : r.items) {
    if (c.seed) continue;
    double mean = (c.features[Index(ContextType::kLinear)] +
                   c.features[Index(ContextType::kUnary)]) / 2;
    CHECK(c.certainty == doctest::Approx((1 + mean) / 2).epsilon(1e-15));
  }
}

TEST_CASE("zero classifier gives one half and id order") {
  std::mt19937 rng(3);
  ModelSet models;
  models[ContextType::kLinear] = MakeModel(ContextType::kLinear, RandomRows(rng, 20, 4));
  MlpModel zero = MlpModel::Zero(8);
  ExpansionResult r = Expand(models, &zero, {"c", {0}}, 100);
  std::vector<GroupId> order = CandidateOrder(r);
  CHECK(order.size() == 19);
  CHECK(std::is_sorted(order.begin(), order.end()));
  for (const Candidate &c : r.items) {
    if (!c.seed) CHECK(c.certainty == 0.5);
  }
}

TEST_CASE("k larger than the pool returns the whole pool") {
  std::mt19937 rng(4);
  ModelSet models;
  models[ContextType::kLinear] = MakeModel(ContextType::kLinear, RandomRows(rng, 20, 4));
  CHECK(CandidateOrder(Expand(models, nullptr, {"c", {0}}, 1000, 7)).size() == 7);
  CHECK(CandidateOrder(Expand(models, nullptr, {"c", {0}}, 0, 7)).empty());
}

TEST_CASE("single model with a monotone classifier matches simple expansion") {
  std::mt19937 rng(5);
  for (ContextType ctype : kAllContextTypes) {
    ModelSet models;
    auto model = MakeModel(ctype, RandomRows(rng, 40, 6));
    models[ctype] = model;
    MlpModel mlp = MonotoneMlp(ctype);
    SeedSet seed{"c", {1, 7}};
    std::vector<GroupId> simple;
    for (const auto &[id, sim] : ExpandSimple(*model, seed, 38)) simple.push_back(id);
    CHECK(CandidateOrder(Expand(models, &mlp, seed, 38, 38)) == simple);
    CHECK(CandidateOrder(Expand(models, nullptr, seed, 38, 38)) == simple);
  }
}

TEST_CASE("ranking is invariant to rescaling a model") {
  std::mt19937 rng(6);
  Rows a = RandomRows(rng, 30, 5), b = RandomRows(rng, 30, 5);
  const auto scaled = [](Rows rows, double factor) {
    for (auto &[id, v] : rows) {
      for (double &x : v) x *= factor;
    }
    return rows;
  };
  ModelSet base, rescaled;
  base[ContextType::kLinear] = MakeModel(ContextType::kLinear, a);
  base[ContextType::kUnary] = MakeModel(ContextType::kUnary, b);
  rescaled[ContextType::kLinear] = MakeModel(ContextType::kLinear, scaled(a, 8.0));
  rescaled[ContextType::kUnary] = MakeModel(ContextType::kUnary, scaled(b, 0.125));
  MlpModel mlp = MonotoneMlp(ContextType::kUnary);
  SeedSet seed{"c", {2, 3}};
  for (const MlpModel *m : std::initializer_list<const MlpModel *>{nullptr, &mlp}) {
    CHECK(CandidateOrder(Expand(base, m, seed, 20)) ==
          CandidateOrder(Expand(rescaled, m, seed, 20)));
  }
}

TEST_CASE("expansion is deterministic") {
  std::mt19937 rng(7);
  ModelSet models;
  models[ContextType::kLinear] = MakeModel(ContextType::kLinear, RandomRows(rng, 30, 5));
  GroupIndex index = IndexFor(30);
  CHECK(ExpansionToJson(Expand(models, nullptr, {"c", {1, 2}}, 10), index) ==
        ExpansionToJson(Expand(models, nullptr, {"c", {1, 2}}, 10), index));
}

TEST_CASE("re-expansion") {
  std::mt19937 rng(8);
  ModelSet models;
  models[ContextType::kLinear] = MakeModel(ContextType::kLinear, RandomRows(rng, 30, 5));
  GroupIndex index = IndexFor(30);
  SeedSet seed{"c", {1, 2}};
  ExpansionResult first = Expand(models, nullptr, seed, 10, 50);

  SUBCASE("nothing accepted repeats the expansion") {
    CHECK(ExpansionToJson(Reexpand(first, {}, models, nullptr), index) ==
          ExpansionToJson(first, index));
  }
  SUBCASE("accepted items become seeds and old seeds stay") {
    GroupId accepted = CandidateOrder(first).at(3);
    ExpansionResult second = Reexpand(first, {accepted}, models, nullptr);
    CHECK(second.seed.ids == std::set<GroupId>{1, 2, accepted});
    CHECK(second.k == first.k);
    CHECK(second.pool_size == first.pool_size);
    CHECK(second.seed.category == "c");
    for (const Candidate &c : second.items) {
      if (c.group == accepted || c.group == 1 || c.group == 2) {
        CHECK(c.seed);
        CHECK(c.certainty == 1.0);
      }
    }
  }
  SUBCASE("unknown accepted ids are rejected") {
    try {
      Reexpand(first, {999}, models, nullptr);
      FAIL("expected an error");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kInvalidArgument);
      CHECK(e.field() == "accepted_ids");
    }
  }
}

TEST_CASE("result JSON round-trips and export lists validated items") {
  std::mt19937 rng(9);
  ModelSet models;
  models[ContextType::kLinear] = MakeModel(ContextType::kLinear, RandomRows(rng, 12, 3));
  GroupIndex index;
  for (GroupId id = 0; id < 12; ++id) {
    std::string name = id == 5 ? "comma, \"quoted\"" : "t" + std::to_string(id);
    index.Add(id, name, {name});
  }
  ExpansionResult r = Expand(models, nullptr, {"cat", {0}}, 11);
  r.validated = {5, 0};
  std::string json = ExpansionToJson(r, index, "s1");
  CHECK(json.find("\"session_id\":\"s1\"") != std::string::npos);
  ExpansionResult back = ExpansionFromJson(json);
  CHECK(ExpansionToJson(back, index, "s1") == json);
  CHECK(back.validated == r.validated);
  CHECK(back.seed.ids == r.seed.ids);

  std::string csv = ExportValidatedCsv(r, index);
  std::vector<std::string> lines = Split(csv, '\n');
  REQUIRE(lines.size() == 4);  // header, two rows, trailing empty
  CHECK(lines[0] == "canonical,group_id,certainty");
  CHECK(lines[1] == "t0,0,1");
  CHECK(lines[2].rfind("\"comma, \"\"quoted\"\"\",5,", 0) == 0);
  CHECK(ThrownCode([] { ExpansionFromJson("{}"); }) == ErrorCode::kFormat);
}

}  // namespace
}  // namespace termset
