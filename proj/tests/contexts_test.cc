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
#include <deque>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "doctest.h"
#include "termset/contexts.h"
#include "test_util.h"

namespace termset {
namespace {

using testing::MakeSentence;
using testing::ThrownCode;

// Index whose groups are single surfaces, ids in list order.
GroupIndex IndexOf(const std::vector<std::string> &surfaces) {
  GroupIndex index;
  for (size_t i = 0; i < surfaces.size(); ++i) {
    index.Add(static_cast<GroupId>(i), surfaces[i], {surfaces[i]});
  }
  return index;
}

// Annotates a sentence built from `text`. AnnotatedSentence points into its
// sentence, so the sentences are kept alive for the whole test run.
AnnotatedSentence AnnotateText(std::string_view text, const GroupIndex &index,
                               bool tagged = false) {
  static std::deque<Sentence> keep;
  keep.push_back(MakeSentence(text, tagged));
  return Annotate(keep.back(), index);
}

std::set<std::string> ContextsOf(const std::vector<ContextPair> &pairs,
                                 GroupId target) {
  std::set<std::string> out;
  for (const ContextPair &p : pairs) {
    if (p.target == target) out.insert(p.context);
  }
  return out;
}

std::multiset<std::pair<GroupId, std::string>> Bag(
    const std::vector<ContextPair> &pairs) {
  std::multiset<std::pair<GroupId, std::string>> out;
  for (const ContextPair &p : pairs) out.insert({p.target, p.context});
  return out;
}

TEST_CASE("annotation takes the longest match") {
  GroupIndex index;
  index.Add(0, "New York", {"New York", "NY", "New York City"});
  Sentence s = MakeSentence("I love New York City");
  AnnotatedSentence a = Annotate(s, index);
  REQUIRE(a.mentions.size() == 1);
  CHECK(a.mentions[0] == Mention{2, 5, 0});
  CHECK(AnnotateText("nothing here", index).mentions.empty());
}

TEST_CASE("overlapping candidates resolve leftmost-longest") {
  GroupIndex index = IndexOf({"machine learning", "learning theory"});
  AnnotatedSentence a = AnnotateText("machine learning theory", index);
  REQUIRE(a.mentions.size() == 1);
  CHECK(a.mentions[0] == Mention{0, 2, 0});
}

TEST_CASE("annotation is case-insensitive") {
  GroupIndex index = IndexOf({"Java"});
  CHECK(AnnotateText("we like JAVA", index).mentions.size() == 1);
}

TEST_CASE("linear contexts: Siri example") {
  GroupIndex index = IndexOf({"Siri", "voice queries", "natural language user interface"});
  Sentence s = MakeSentence(
      "Siri uses voice queries and a natural language user interface .");
  AnnotatedSentence a = Annotate(s, index);
  REQUIRE(a.mentions.size() == 3);
  ContextConfig config;
  config.window = 10;
  auto pairs = ExtractLinear(a, index, config);
  CHECK(ContextsOf(pairs, 0) == std::set<std::string>{
                                    "uses", "voice queries",
                                    "natural language user interface"});
}

TEST_CASE("linear window bound") {
  GroupIndex index = IndexOf({"A", "C"});
  StopwordSet none;
  ContextConfig config;
  config.window = 1;
  config.stopwords = &none;
  AnnotatedSentence a = AnnotateText("A b C", index);
  auto pairs = ExtractLinear(a, index, config);
  CHECK(Bag(pairs) == std::multiset<std::pair<GroupId, std::string>>{{0, "b"},
                                                                      {1, "b"}});
}

TEST_CASE("linear contexts skip stopword-only sentences") {
  GroupIndex index = IndexOf({"x"});
  CHECK(ExtractLinear(AnnotateText("the of a", index), index, {}).empty());
}

TEST_CASE("linear window saturates at the sentence length") {
  GroupIndex index = IndexOf({"alpha", "gamma"});
  Sentence s = MakeSentence("alpha beta gamma delta epsilon zeta");
  AnnotatedSentence a = Annotate(s, index);
  ContextConfig at_length, beyond;
  at_length.window = s.tokens.size();
  beyond.window = 1000;
  CHECK(Bag(ExtractLinear(a, index, at_length)) == Bag(ExtractLinear(a, index, beyond)));
}

TEST_CASE("list contexts: Image processing example") {
  GroupIndex index = IndexOf({"Image processing", "Signal processing", "Computer Vision"});
  AnnotatedSentence a = AnnotateText("Experience in Image processing , Signal processing , Computer Vision", index);
  auto pairs = ExtractLists(a, index, {});
  CHECK(ContextsOf(pairs, 0) ==
        std::set<std::string>{"Signal processing", "Computer Vision"});
  CHECK(ContextsOf(pairs, 1) ==
        std::set<std::string>{"Image processing", "Computer Vision"});
  CHECK(pairs.size() == 6);
}

TEST_CASE("list contexts need three items") {
  GroupIndex index = IndexOf({"A", "B", "C"});
  CHECK(ExtractLists(AnnotateText("A , B", index), index, {}).empty());
  auto pairs = ExtractLists(AnnotateText("A , B and C", index), index, {});
  CHECK(ContextsOf(pairs, 0) == std::set<std::string>{"B", "C"});
  CHECK(ContextsOf(pairs, 1) == std::set<std::string>{"A", "C"});
  CHECK(ContextsOf(pairs, 2) == std::set<std::string>{"A", "B"});
  // Oxford comma.
  CHECK(ExtractLists(AnnotateText("A , B , and C", index), index, {})
            .size() == 6);
  // A plain word breaks the run.
  CHECK(ExtractLists(AnnotateText("A , B with C", index), index, {})
            .empty());
}

// "Turing studied as an undergraduate at King's College , Cambridge ." with a
// basic dependency parse (prepositions head their objects).
Sentence TuringSentence() {
  struct Row {
    const char *surface;
    int head;
    const char *deprel;
  };
  const Row rows[] = {
      {"Turing", 1, "nsubj"},   {"studied", kRootHead, "root"},
      {"as", 1, "prep"},        {"an", 4, "det"},
      {"undergraduate", 2, "pobj"}, {"at", 1, "prep"},
      {"King's", 7, "poss"},    {"College", 5, "pobj"},
      {",", 7, "punct"},        {"Cambridge", 7, "appos"},
      {".", 1, "punct"},
  };
  Sentence s;
  s.doc_id = "doc0";
  for (const Row &r : rows) {
    Token t;
    t.surface = r.surface;
    t.head = r.head;
    t.deprel = r.deprel;
    s.tokens.push_back(t);
  }
  return s;
}

TEST_CASE("dependency contexts: Turing example") {
  GroupIndex index = IndexOf({"studied", "King's College"});
  Sentence s = TuringSentence();
  AnnotatedSentence a = Annotate(s, index);
  REQUIRE(a.mentions.size() == 2);
  auto pairs = ExtractDependency(a, index, {});
  CHECK(ContextsOf(pairs, 0) ==
        std::set<std::string>{"Turing/nsubj", "undergraduate/prep_as",
                              "King's College/prep_at"});
  CHECK(ContextsOf(pairs, 1) ==
        std::set<std::string>{"studied/prep_at-1", "Cambridge/appos"});
}

TEST_CASE("dependency contexts collapse UD case markers") {
  // "studied at Cambridge" with UD-style obl + case.
  Sentence s;
  const std::vector<std::tuple<std::string, int, std::string>> rows = {
      {"Turing", 1, "nsubj"}, {"studied", kRootHead, "root"},
      {"at", 3, "case"}, {"Cambridge", 1, "obl"}};
  for (const auto &[surface, head, rel] : rows) {
    Token t;
    t.surface = surface;
    t.head = head;
    t.deprel = rel;
    s.tokens.push_back(t);
  }
  GroupIndex index = IndexOf({"studied", "Cambridge"});
  auto pairs = ExtractDependency(Annotate(s, index), index, {});
  CHECK(ContextsOf(pairs, 0) ==
        std::set<std::string>{"Turing/nsubj", "Cambridge/prep_at"});
  CHECK(ContextsOf(pairs, 1) == std::set<std::string>{"studied/prep_at-1"});
}

TEST_CASE("dependency contexts: vacuous cases and missing parse") {
  GroupIndex index = IndexOf({"alone"});
  Sentence single;
  Token t;
  t.surface = "alone";
  t.head = kRootHead;
  t.deprel = "root";
  single.tokens.push_back(t);
  CHECK(ExtractDependency(Annotate(single, index), index, {}).empty());
  Sentence unparsed = MakeSentence("alone here");
  CHECK(ThrownCode([&] {
          ExtractDependency(Annotate(unparsed, index), index, {});
        }) == ErrorCode::kMode);
  CHECK(ThrownCode([&] {
          BuildPairs({unparsed}, index, ContextType::kDependency, {});
        }) == ErrorCode::kMode);
}

TEST_CASE("symmetric contexts: Apple and Orange example") {
  GroupIndex index = IndexOf({"Apple", "Orange"});
  auto pairs = ExtractSymmetric(
      AnnotateText("Apple and Orange juice drink", index), index, {});
  CHECK(Bag(pairs) == std::multiset<std::pair<GroupId, std::string>>{
                          {0, "Orange"}, {1, "Apple"}});
}

TEST_CASE("symmetric contexts need an adjacent pattern word") {
  GroupIndex index = IndexOf({"Apple", "Orange"});
  CHECK(ExtractSymmetric(AnnotateText("Apple nor Orange", index), index, {})
            .empty());
  CHECK(ExtractSymmetric(AnnotateText("Apple and fresh Orange", index),
                         index, {})
            .empty());
  CHECK(ExtractSymmetric(AnnotateText("Apple or Orange", index), index, {})
            .size() == 2);
}

TEST_CASE("symmetric extraction is symmetric") {
  GroupIndex index = IndexOf({"a", "b", "c", "d"});
  const std::vector<std::string> words = {"a", "b", "c", "d", "and", "or", "x", ","};
  std::mt19937 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    for (int i = 0; i < 8; ++i) text += words[rng() % words.size()] + " ";
    auto pairs = ExtractSymmetric(AnnotateText(text, index), index, {});
    auto bag = Bag(pairs);
    for (const ContextPair &p : pairs) {
      GroupId other = -1;
      for (GroupId g = 0; g < 4; ++g) {
        if (index.Canonical(g) == p.context) other = g;
      }
      CHECK(bag.count({other, index.Canonical(p.target)}) == bag.count({p.target, p.context}));
    }
  }
}

TEST_CASE("unary contexts: Alaska example") {
  GroupIndex index = IndexOf({"Alaska"});
  auto pairs = ExtractUnary(
      AnnotateText("In the U.S. state of Alaska ...", index), index, {});
  CHECK(ContextsOf(pairs, 0) == std::set<std::string>{"U.S. state of __"});
}

TEST_CASE("unary contexts need a full window of content") {
  GroupIndex index = IndexOf({"X"});
  // Mention at the start with only two following tokens.
  CHECK(ExtractUnary(AnnotateText("X runs fast", index), index, {}).empty());
  // All-stopword window.
  CHECK(ExtractUnary(AnnotateText("the of a X", index), index, {}).empty());
  auto pairs = ExtractUnary(AnnotateText("X runs very fast", index), index, {});
  CHECK(ContextsOf(pairs, 0) == std::set<std::string>{"__ runs very fast"});
}

TEST_CASE("build_pairs on an empty corpus") {
  PairSet set = BuildPairs({}, IndexOf({"a"}), ContextType::kLinear, {});
  CHECK(set.pairs.empty());
  CHECK(set.context_counts.empty());
}

TEST_CASE("build_pairs is invariant to sentence order as a multiset") {
  GroupIndex index = IndexOf({"Java", "Python", "Ruby", "Perl"});
  Corpus corpus = IngestPlaintext(
      "We use Java , Python and Ruby daily. Perl or Ruby is fine. "
      "The team writes Java code at work. Python and Perl are scripting languages.");
  for (ContextType ctype : {ContextType::kLinear, ContextType::kList,
                            ContextType::kSymmetric, ContextType::kUnary}) {
    PairSet forward = BuildPairs(corpus, index, ctype, {});
    Corpus reversed(corpus.rbegin(), corpus.rend());
    PairSet backward = BuildPairs(reversed, index, ctype, {});
    CHECK(Bag(forward.pairs) == Bag(backward.pairs));
    CHECK(forward.context_counts == backward.context_counts);
    CHECK(forward.target_counts == backward.target_counts);
    CHECK_FALSE(forward.pairs.empty());
  }
}

TEST_CASE("extraction depends only on the sentence itself") {
  GroupIndex index = IndexOf({"Java", "Python", "Ruby"});
  Corpus corpus = IngestPlaintext("Java , Python and Ruby . Ruby runs code fast .");
  for (ContextType ctype : {ContextType::kLinear, ContextType::kList,
                            ContextType::kSymmetric, ContextType::kUnary}) {
    std::vector<ContextPair> separately;
    for (const Sentence &s : corpus) {
      auto one = BuildPairs({s}, index, ctype, {}).pairs;
      separately.insert(separately.end(), one.begin(), one.end());
    }
    CHECK(BuildPairs(corpus, index, ctype, {}).pairs == separately);
  }
}

TEST_CASE("pair and count files flatten tabs and newlines") {
  std::vector<ContextPair> pairs = {{3, "a\tb\nc", ContextType::kUnary}};
  CHECK(WritePairFile(pairs) == "3\ta b c\n");
  CHECK(WriteCountFile({{"x\ty", 2}}) == "x y\t2\n");
}

}  // namespace
}  // namespace termset
