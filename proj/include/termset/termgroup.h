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

// Term variant grouping. Aliases, acronyms and spelling variants of the same
// entity are merged into a TermGroup, the unit that gets embedded and
// expanded.

#ifndef TERMSET_TERMGROUP_H_
#define TERMSET_TERMGROUP_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace termset {

class EmbeddingModel;

using GroupId = int64_t;

struct Term {
  std::string surface;
  uint64_t frequency = 1;
};

struct TermGroup {
  GroupId id = 0;
  std::string canonical;
  std::vector<Term> members;  // sorted by surface
  uint64_t frequency = 0;
};

class AbbreviationLexicon {
 public:
  AbbreviationLexicon() = default;

  // JSON object mapping abbreviation -> [expansion, ...].
  static AbbreviationLexicon Parse(std::string_view json_text);
  static AbbreviationLexicon LoadFile(const std::string &path);
  // data/abbreviations.json as compiled into the library.
  static const AbbreviationLexicon &BuiltIn();

  void Add(std::string_view abbreviation, std::string_view expansion);
  // Both arguments are normalized before comparison.
  bool Expands(std::string_view abbreviation, std::string_view expansion) const;
  // Expansions of an already-normalized abbreviation, or null.
  const std::set<std::string> *Lookup(std::string_view normalized) const;
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, std::set<std::string>> entries_;
};

// Lowercases, maps '-' and '_' to spaces, drops other punctuation and
// collapses whitespace.
std::string Normalize(std::string_view surface);

// Levenshtein distance over Unicode scalar values.
size_t EditDistance(std::string_view a, std::string_view b);

// Lexicon match in either direction, or one side equals the initials of the
// other's normalized words (at least two initials).
bool AbbreviationMatch(std::string_view a, std::string_view b,
                       const AbbreviationLexicon &lexicon);

struct GroupConfig {
  double max_edit_ratio = 0.2;
  double sim_threshold = 0.7;
};

// Partitions `terms` by the union-find closure of the pairwise merge
// predicate. `aux_embedding`, when given, must have term surfaces as target
// units. Group ids are dense, assigned by descending frequency then
// canonical. Throws kInvalidArgument on duplicate surfaces.
std::vector<TermGroup> GroupTerms(const std::vector<Term> &terms,
                                  const EmbeddingModel *aux_embedding,
                                  const AbbreviationLexicon &lexicon,
                                  const GroupConfig &config = {});

// Pairwise merge predicate, exposed for tests.
bool ShouldMerge(const Term &a, const Term &b,
                 const EmbeddingModel *aux_embedding,
                 const AbbreviationLexicon &lexicon, const GroupConfig &config);

// groups.jsonl: {id, canonical, members:[{surface, frequency}]} per line.
std::string WriteGroups(const std::vector<TermGroup> &groups);
std::vector<TermGroup> ReadGroups(std::string_view text);

}  // namespace termset

#endif  // TERMSET_TERMGROUP_H_
