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

// Context extraction. A corpus annotated with term-group mentions is turned
// into (target group, context unit) pairs, one extractor per context type:
//
//   linear      units within a window around the mention
//   list        other items of a comma/conjunction list
//   dependency  syntactic neighbours with collapsed prepositions
//   symmetric   the partner in "X and Y" / "X or Y"
//   unary       the n-gram pattern on either side, "U.S. state of __"

#ifndef TERMSET_CONTEXTS_H_
#define TERMSET_CONTEXTS_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "termset/context_type.h"
#include "termset/corpus.h"
#include "termset/embedding.h"
#include "termset/termgroup.h"
#include "termset/text.h"

namespace termset {

struct ContextPair {
  GroupId target = 0;
  std::string context;
  ContextType ctype = ContextType::kLinear;

  bool operator==(const ContextPair &) const = default;
  auto operator<=>(const ContextPair &) const = default;
};

struct Mention {
  size_t start = 0;
  size_t end = 0;  // exclusive token index
  GroupId group = 0;

  bool operator==(const Mention &) const = default;
};

struct AnnotatedSentence {
  const Sentence *sentence = nullptr;
  std::vector<Mention> mentions;  // sorted, non-overlapping
};

// Lowercased member token sequences -> group, plus each group's canonical.
class GroupIndex {
 public:
  GroupIndex() = default;
  explicit GroupIndex(const std::vector<TermGroup> &groups);

  void Add(GroupId id, std::string_view canonical,
           const std::vector<std::string> &surfaces);

  const std::string &Canonical(GroupId id) const;
  bool Contains(GroupId id) const { return canonical_.count(id) > 0; }
  size_t max_length() const { return max_length_; }
  // Group whose member exactly matches tokens[start, start + n), if any.
  const GroupId *Match(const std::vector<std::string> &lower_tokens,
                       size_t start, size_t n) const;

 private:
  std::map<std::vector<std::string>, GroupId> members_;
  std::map<GroupId, std::string> canonical_;
  size_t max_length_ = 0;
};

// Greedy left-to-right longest match of member surfaces, case-insensitive.
AnnotatedSentence Annotate(const Sentence &sentence, const GroupIndex &groups);
AnnotatedSentence Annotate(Sentence &&, const GroupIndex &) = delete;  // would dangle

struct ContextConfig {
  size_t window = 5;
  size_t min_list_items = 3;
  size_t unary_gram = 3;
  std::vector<std::string> symmetric_patterns = {"and", "or"};
  const StopwordSet *stopwords = nullptr;  // null = built-in list
};

std::vector<ContextPair> ExtractLinear(const AnnotatedSentence &s,
                                       const GroupIndex &groups,
                                       const ContextConfig &config);
std::vector<ContextPair> ExtractLists(const AnnotatedSentence &s,
                                      const GroupIndex &groups,
                                      const ContextConfig &config);
// Throws kMode if the sentence has no parse.
std::vector<ContextPair> ExtractDependency(const AnnotatedSentence &s,
                                           const GroupIndex &groups,
                                           const ContextConfig &config);
std::vector<ContextPair> ExtractSymmetric(const AnnotatedSentence &s,
                                          const GroupIndex &groups,
                                          const ContextConfig &config);
std::vector<ContextPair> ExtractUnary(const AnnotatedSentence &s,
                                      const GroupIndex &groups,
                                      const ContextConfig &config);

std::vector<ContextPair> Extract(ContextType ctype, const AnnotatedSentence &s,
                                 const GroupIndex &groups,
                                 const ContextConfig &config);

struct PairSet {
  std::vector<ContextPair> pairs;
  std::map<std::string, uint64_t> context_counts;
  std::map<GroupId, uint64_t> target_counts;
};

// Runs one extractor over the whole corpus in corpus order. Throws kMode for
// the dependency type when any sentence lacks a parse.
PairSet BuildPairs(const Corpus &corpus, const GroupIndex &groups,
                   ContextType ctype, const ContextConfig &config);

// Target units are decimal group ids.
std::vector<UnitPair> ToUnitPairs(const std::vector<ContextPair> &pairs);

// "<target_group_id>\t<context>" per line; tabs/newlines in contexts become
// spaces. The count sidecar is "<unit>\t<count>".
std::string WritePairFile(const std::vector<ContextPair> &pairs);
std::string WriteCountFile(const std::map<std::string, uint64_t> &counts);

}  // namespace termset

#endif  // TERMSET_CONTEXTS_H_
