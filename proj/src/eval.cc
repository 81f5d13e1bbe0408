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

#include "termset/eval.h"

#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "termset/error.h"
#include "termset/text.h"

namespace termset {

using nlohmann::json;

double AveragePrecisionAt(const std::vector<std::string> &ranked,
                          const std::set<std::string> &gold, size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1", "n");
  if (gold.empty()) return 0.0;
  double sum = 0;
  size_t hits = 0;
  size_t limit = std::min(n, ranked.size());
  std::set<std::string> seen;
  for (size_t i = 0; i < limit; ++i) {
    // A repeated item cannot be relevant twice.
    if (!seen.insert(ranked[i]).second) continue;
    if (gold.count(ranked[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(std::min(gold.size(), n));
}

std::vector<GoldCategory> ParseGoldDataset(std::string_view text) {
  std::vector<GoldCategory> out;
  size_t line_no = 0;
  for (const std::string &raw : Split(text, '\n')) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty()) continue;
    auto fail = [&](const std::string &what) {
      return Error(ErrorCode::kFormat,
                   "dataset line " + std::to_string(line_no) + ": " + what);
    };
    GoldCategory category;
    try {
      json doc = json::parse(line);
      category.name = doc.at("name").get<std::string>();
      for (const auto &g : doc.at("gold")) category.gold.insert(g.get<std::string>());
      category.seeds = doc.at("seeds").get<std::vector<std::string>>();
    } catch (const json::exception &e) {
      throw fail(e.what());
    }
    if (category.seeds.empty()) throw fail("seeds must be nonempty");
    for (const std::string &s : category.seeds) {
      if (!category.gold.count(s)) throw fail("seed '" + s + "' is not in gold");
    }
    std::set<std::string> seeds(category.seeds.begin(), category.seeds.end());
    if (seeds.size() >= category.gold.size()) {
      throw fail("gold must contain terms besides the seeds");
    }
    out.push_back(std::move(category));
  }
  return out;
}

namespace {

double CategoryAp(const RankedCategory &rc, size_t n) {
  std::set<std::string> seeds(rc.category.seeds.begin(), rc.category.seeds.end());
  std::vector<std::string> ranking;
  for (const std::string &r : rc.ranking) {
    if (!seeds.count(r)) ranking.push_back(r);
  }
  std::set<std::string> gold;
  for (const std::string &g : rc.category.gold) {
    if (!seeds.count(g)) gold.insert(g);
  }
  return AveragePrecisionAt(ranking, gold, n);
}

}  // namespace

double MapAt(const std::vector<RankedCategory> &categories, size_t n) {
  if (categories.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no categories to average");
  }
  double sum = 0;
  for (const RankedCategory &rc : categories) sum += CategoryAp(rc, n);
  return sum / static_cast<double>(categories.size());
}

BenchmarkReport RunBenchmark(const std::vector<GoldCategory> &categories,
                             const TermResolver &resolve, const Ranker &rank,
                             const std::vector<size_t> &ns) {
  if (ns.empty()) throw Error(ErrorCode::kInvalidArgument, "empty n list", "n");
  for (size_t n : ns) {
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1", "n");
  }
  BenchmarkReport report;
  report.ns = ns;
  std::sort(report.ns.begin(), report.ns.end());
  report.ns.erase(std::unique(report.ns.begin(), report.ns.end()), report.ns.end());
  size_t depth = report.ns.back();

  // Resolved terms become "g:<id>" so two variants of one group count once;
  // unresolved ones keep a "t:<term>" key that no ranking can contain.
  auto key = [&](const std::string &term, std::vector<std::string> &missing) {
    if (auto id = resolve(term)) return "g:" + std::to_string(*id);
    missing.push_back(term);
    return "t:" + term;
  };

  std::vector<RankedCategory> scored;
  std::vector<std::string> names;
  for (const GoldCategory &category : categories) {
    std::vector<std::string> missing;
    RankedCategory rc;
    rc.category.name = category.name;
    std::set<GroupId> seed_ids;
    std::map<std::string, std::string> seed_keys;
    for (const std::string &s : category.seeds) {
      if (seed_keys.count(s)) continue;
      std::string k = key(s, missing);
      seed_keys[s] = k;
      rc.category.seeds.push_back(k);
      if (k.starts_with("g:")) seed_ids.insert(std::stoll(k.substr(2)));
    }
    for (const std::string &g : category.gold) {
      auto it = seed_keys.find(g);
      rc.category.gold.insert(it != seed_keys.end() ? it->second : key(g, missing));
    }
    if (!missing.empty()) report.unresolved[category.name] = missing;
    if (seed_ids.empty()) {
      report.skipped.push_back(category.name);
      continue;
    }
    for (GroupId id : rank(seed_ids, depth)) {
      rc.ranking.push_back("g:" + std::to_string(id));
    }
    scored.push_back(std::move(rc));
    names.push_back(category.name);
  }
  if (scored.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no dataset category has a seed that resolves to a term group",
                "dataset");
  }
  for (size_t i = 0; i < scored.size(); ++i) {
    std::map<size_t, double> ap;
    for (size_t n : report.ns) ap[n] = CategoryAp(scored[i], n);
    report.per_category.emplace_back(names[i], std::move(ap));
  }
  for (size_t n : report.ns) report.map[n] = MapAt(scored, n);
  return report;
}

std::string ReportToJson(const BenchmarkReport &report) {
  json per_category = json::object();
  for (const auto &[name, ap] : report.per_category) {
    json values = json::object();
    for (const auto &[n, v] : ap) values[std::to_string(n)] = v;
    per_category[name] = {{"ap", values}};
  }
  json map = json::object();
  for (const auto &[n, v] : report.map) map[std::to_string(n)] = v;
  json unresolved = json::object();
  for (const auto &[name, terms] : report.unresolved) unresolved[name] = terms;
  json doc = {{"per_category", per_category},
              {"map", map},
              {"unresolved", unresolved},
              {"skipped", report.skipped}};
  return doc.dump();
}

std::string ReportToTable(const BenchmarkReport &report) {
  size_t width = 8;
  for (const auto &[name, ap] : report.per_category) {
    width = std::max(width, name.size());
  }
  std::string out;
  char cell[64];
  auto row = [&](const std::string &label, const std::map<size_t, double> &values) {
    out += label + std::string(width - label.size(), ' ');
    for (size_t n : report.ns) {
      std::snprintf(cell, sizeof(cell), "  %8.4f", values.at(n));
      out += cell;
    }
    out += "\n";
  };
  out += "category" + std::string(width - 8, ' ');
  for (size_t n : report.ns) {
    std::snprintf(cell, sizeof(cell), "  %8s", ("AP@" + std::to_string(n)).c_str());
    out += cell;
  }
  out += "\n";
  for (const auto &[name, ap] : report.per_category) row(name, ap);
  row("MAP", report.map);
  for (const auto &[name, terms] : report.unresolved) {
    out += "unresolved in " + name + ": " + Join(terms, ", ") + "\n";
  }
  for (const std::string &name : report.skipped) {
    out += "skipped (no resolvable seed): " + name + "\n";
  }
  return out;
}

}  // namespace termset
