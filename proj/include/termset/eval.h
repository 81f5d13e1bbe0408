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

// Ranking quality against gold term lists: average precision at a cutoff and
// its mean over categories.

#ifndef TERMSET_EVAL_H_
#define TERMSET_EVAL_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "termset/termgroup.h"

namespace termset {

// AP@n = (sum over 1-based positions i <= n with ranked[i] in gold of
// precision@i) / min(|gold|, n). 0 for an empty gold set. Throws
// kInvalidArgument for n == 0.
double AveragePrecisionAt(const std::vector<std::string> &ranked,
                          const std::set<std::string> &gold, size_t n);

struct GoldCategory {
  std::string name;
  std::set<std::string> gold;
  std::vector<std::string> seeds;  // query terms, a subset of gold
};

// One {name, gold:[...], seeds:[...]} object per non-blank line. Throws
// kFormat with the line number when a line is malformed or violates
// seeds ⊆ gold, |seeds| >= 1, gold \ seeds nonempty.
std::vector<GoldCategory> ParseGoldDataset(std::string_view text);

struct RankedCategory {
  std::vector<std::string> ranking;
  GoldCategory category;
};

// Unweighted mean of AP@n with seeds removed from both ranking and gold.
// Throws kInvalidArgument on an empty input.
double MapAt(const std::vector<RankedCategory> &categories, size_t n);

struct BenchmarkReport {
  std::vector<size_t> ns;
  // Category name -> n -> AP@n, in dataset order of first appearance.
  std::vector<std::pair<std::string, std::map<size_t, double>>> per_category;
  std::map<size_t, double> map;
  // Gold terms (including seeds) that matched no group, per category.
  std::map<std::string, std::vector<std::string>> unresolved;
  // Categories without any resolvable seed; excluded from the mean.
  std::vector<std::string> skipped;
};

// Resolves a term string to a group id; nullopt when no group matches.
using TermResolver = std::function<std::optional<GroupId>(const std::string &)>;
// Returns the non-seed candidates for `seeds` in rank order, at least
// `depth` long when the pool allows.
using Ranker = std::function<std::vector<GroupId>(const std::set<GroupId> &seeds,
                                                  size_t depth)>;

// Resolves every category, ranks with the largest n as depth and scores each
// n. Unresolvable gold terms stay in the gold set as never-retrievable items.
// Throws kInvalidArgument when no category has a resolvable seed or `ns` is
// empty.
BenchmarkReport RunBenchmark(const std::vector<GoldCategory> &categories,
                             const TermResolver &resolve, const Ranker &rank,
                             const std::vector<size_t> &ns);

// {per_category:{name:{ap:{n:v}}}, map:{n:v}, unresolved:{...}, skipped:[...]}
std::string ReportToJson(const BenchmarkReport &report);
std::string ReportToTable(const BenchmarkReport &report);

}  // namespace termset

#endif  // TERMSET_EVAL_H_
