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

// Synthetic POS-tagged corpus with planted term classes. Members of a class
// co-occur in explicit lists and share class-specific unary frames;
// distractor terms (and class members) also appear in generic frames shared
// by everyone.

#ifndef TERMSET_TESTS_PLANTED_CORPUS_H_
#define TERMSET_TESTS_PLANTED_CORPUS_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "termset/termgroup.h"

namespace termset::testing {

struct PlantedCorpus {
  std::string conllu;
  std::vector<std::vector<std::string>> classes;
  std::vector<std::string> distractors;
};

struct PlantedConfig {
  size_t num_classes = 3;
  size_t class_size = 10;
  size_t num_distractors = 100;
  size_t list_sentences = 60;   // per class
  size_t frame_sentences = 60;  // per class
  size_t generic_per_term = 4;  // generic sentences per term
  uint64_t seed = 2026;
};

// Capitalized pseudo-words, pairwise far apart in edit distance so that no
// grouping rule merges two of them.
inline std::vector<std::string> PseudoWords(size_t n, std::mt19937_64 &rng) {
  static const char *const kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n",
                                        "p", "r", "s", "t", "v", "z", "br", "gr",
                                        "tr", "pl", "st", "kr"};
  static const char *const kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string w;
    for (int s = 0; s < 3; ++s) {
      w += kOnsets[rng() % std::size(kOnsets)];
      w += kVowels[rng() % std::size(kVowels)];
    }
    w[0] = static_cast<char>(w[0] - 'a' + 'A');
    bool ok = std::all_of(out.begin(), out.end(), [&](const std::string &o) {
      return EditDistance(Normalize(o), Normalize(w)) >= 4;
    });
    if (ok) out.push_back(w);
  }
  return out;
}

inline PlantedCorpus MakePlantedCorpus(const PlantedConfig &config = {}) {
  std::mt19937_64 rng(config.seed);
  PlantedCorpus out;
  std::vector<std::string> names =
      PseudoWords(config.num_classes * config.class_size + config.num_distractors, rng);
  size_t next = 0;
  for (size_t c = 0; c < config.num_classes; ++c) {
    out.classes.emplace_back(names.begin() + static_cast<long>(next),
                             names.begin() + static_cast<long>(next + config.class_size));
    next += config.class_size;
  }
  out.distractors.assign(names.begin() + static_cast<long>(next), names.end());

  // Each sentence is a list of (surface, tag).
  using Sentence = std::vector<std::pair<std::string, std::string>>;
  std::vector<Sentence> sentences;
  const auto pick = [&](const std::vector<std::string> &from, size_t count) {
    std::vector<std::string> pool = from;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(count);
    return pool;
  };

  // Class-specific frame words: "<verb> the <noun> of X <adverb> ..."
  const std::vector<std::vector<std::string>> frames = {
      {"measured", "weight"}, {"reported", "flavor"}, {"checked", "license"},
      {"praised", "design"},  {"doubted", "origin"},  {"noted", "color"}};
  for (size_t c = 0; c < config.num_classes; ++c) {
    const auto &members = out.classes[c];
    for (size_t i = 0; i < config.list_sentences; ++i) {
      auto three = pick(members, 3);
      sentences.push_back({{"We", "PRP"}, {"compared", "VBD"}, {three[0], "NNP"},
                           {",", ","}, {three[1], "NNP"}, {"and", "CC"},
                           {three[2], "NNP"}, {"carefully", "RB"}, {".", "."}});
    }
    const auto &frame = frames[c % frames.size()];
    for (size_t i = 0; i < config.frame_sentences; ++i) {
      const std::string &x = members[rng() % members.size()];
      sentences.push_back({{"They", "PRP"}, {frame[0], "VBD"}, {"the", "DT"},
                           {frame[1], "NN"}, {"of", "IN"}, {x, "NNP"},
                           {"again", "RB"}, {"this", "DT"}, {"week", "NN"},
                           {".", "."}});
    }
  }
  const std::vector<Sentence> generic = {
      {{"People", "NNS"}, {"talked", "VBD"}, {"about", "IN"}, {"X", "NNP"},
       {"yesterday", "RB"}, {".", "."}},
      {{"The", "DT"}, {"article", "NN"}, {"mentions", "VBZ"}, {"X", "NNP"},
       {"twice", "RB"}, {".", "."}},
      {{"Nobody", "NN"}, {"expected", "VBD"}, {"X", "NNP"}, {"to", "TO"},
       {"appear", "VB"}, {".", "."}},
      {{"X", "NNP"}, {"was", "VBD"}, {"listed", "VBN"}, {"again", "RB"}, {".", "."}},
  };
  std::vector<std::string> everyone = out.distractors;
  for (const auto &members : out.classes) {
    everyone.insert(everyone.end(), members.begin(), members.end());
  }
  for (const std::string &term : everyone) {
    for (size_t i = 0; i < config.generic_per_term; ++i) {
      Sentence s = generic[rng() % generic.size()];
      for (auto &[surface, tag] : s) {
        if (surface == "X") surface = term;
      }
      sentences.push_back(s);
    }
  }
  // Distractors also form lists among themselves.
  for (size_t i = 0; i < config.num_distractors / 2; ++i) {
    auto three = pick(out.distractors, 3);
    sentences.push_back({{"We", "PRP"}, {"compared", "VBD"}, {three[0], "NNP"},
                         {",", ","}, {three[1], "NNP"}, {"and", "CC"},
                         {three[2], "NNP"}, {"carefully", "RB"}, {".", "."}});
  }
  std::shuffle(sentences.begin(), sentences.end(), rng);

  for (size_t i = 0; i < sentences.size(); ++i) {
    if (i % 20 == 0) out.conllu += "# newdoc id = planted" + std::to_string(i / 20) + "\n";
    for (size_t t = 0; t < sentences[i].size(); ++t) {
      out.conllu += std::to_string(t + 1) + "\t" + sentences[i][t].first + "\t_\t_\t" +
                    sentences[i][t].second + "\t_\t_\t_\t_\t_\n";
    }
    out.conllu += "\n";
  }
  return out;
}

}  // namespace termset::testing

#endif  // TERMSET_TESTS_PLANTED_CORPUS_H_
