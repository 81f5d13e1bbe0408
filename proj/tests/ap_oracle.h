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

// Independent average-precision oracle: materializes every prefix of the
// ranking and recomputes its precision from scratch.

#ifndef TERMSET_TESTS_AP_ORACLE_H_
#define TERMSET_TESTS_AP_ORACLE_H_

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace termset::testing {

inline double OracleAveragePrecision(const std::vector<std::string> &ranked,
                                     const std::set<std::string> &gold, size_t n) {
  if (gold.empty()) return 0.0;
  double sum = 0;
  size_t depth = std::min(n, ranked.size());
  for (size_t i = 1; i <= depth; ++i) {
    std::vector<std::string> prefix(ranked.begin(), ranked.begin() + i);
    const std::string &last = prefix.back();
    bool first_time = std::count(prefix.begin(), prefix.end(), last) == 1;
    if (!first_time || gold.count(last) == 0) continue;
    std::set<std::string> distinct(prefix.begin(), prefix.end());
    size_t relevant = 0;
    for (const std::string &item : distinct) relevant += gold.count(item);
    sum += static_cast<double>(relevant) / static_cast<double>(i);
  }
  return sum / static_cast<double>(std::min(gold.size(), n));
}

struct ApInstance {
  std::vector<std::string> ranked;
  std::set<std::string> gold;
  size_t n = 1;
};

// Random instance over a small universe so hits, misses and repeats occur.
inline ApInstance RandomApInstance(std::mt19937 &rng) {
  ApInstance inst;
  size_t universe = 2 + rng() % 30;
  size_t length = rng() % 40;
  for (size_t i = 0; i < length; ++i) {
    inst.ranked.push_back("u" + std::to_string(rng() % universe));
  }
  size_t gold_size = rng() % (universe + 1);
  for (size_t i = 0; i < gold_size; ++i) {
    inst.gold.insert("u" + std::to_string(rng() % universe));
  }
  inst.n = 1 + rng() % 50;
  return inst;
}

}  // namespace termset::testing

#endif  // TERMSET_TESTS_AP_ORACLE_H_
