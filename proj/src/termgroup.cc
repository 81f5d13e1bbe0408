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

#include "termset/termgroup.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "termset/embedding.h"
#include "termset/error.h"
#include "termset/text.h"

namespace termset {

namespace resources {
extern const std::string_view kAbbreviations;
}  // namespace resources

using nlohmann::json;

std::string Normalize(std::string_view surface) {
  std::string out;
  bool pending_space = false;
  for (char c : surface) {
    if (c == '-' || c == '_' || IsAsciiSpace(c)) {
      pending_space = true;
      continue;
    }
    if (IsAsciiPunct(c)) continue;
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(AsciiLower(c));
  }
  return out;
}

size_t EditDistance(std::string_view a, std::string_view b) {
  std::u32string s = DecodeUtf8(a);
  std::u32string t = DecodeUtf8(b);
  if (s.size() < t.size()) std::swap(s, t);
  std::vector<size_t> prev(t.size() + 1), curr(t.size() + 1);
  std::iota(prev.begin(), prev.end(), size_t{0});
  for (size_t i = 0; i < s.size(); ++i) {
    curr[0] = i + 1;
    for (size_t j = 0; j < t.size(); ++j) {
      size_t substitution = prev[j] + (s[i] == t[j] ? 0 : 1);
      curr[j + 1] = std::min({prev[j + 1] + 1, curr[j] + 1, substitution});
    }
    prev.swap(curr);
  }
  return prev[t.size()];
}

AbbreviationLexicon AbbreviationLexicon::Parse(std::string_view json_text) {
  AbbreviationLexicon lexicon;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kFormat,
                std::string("abbreviation lexicon: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kFormat, "abbreviation lexicon must be an object");
  }
  for (const auto &[abbr, expansions] : doc.items()) {
    if (!expansions.is_array()) {
      throw Error(ErrorCode::kFormat,
                  "abbreviation lexicon entry '" + abbr + "' is not a list");
    }
    for (const auto &e : expansions) lexicon.Add(abbr, e.get<std::string>());
  }
  return lexicon;
}

AbbreviationLexicon AbbreviationLexicon::LoadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open lexicon " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

const AbbreviationLexicon &AbbreviationLexicon::BuiltIn() {
  static const AbbreviationLexicon *builtin =
      new AbbreviationLexicon(Parse(resources::kAbbreviations));
  return *builtin;
}

void AbbreviationLexicon::Add(std::string_view abbreviation,
                              std::string_view expansion) {
  entries_[Normalize(abbreviation)].insert(Normalize(expansion));
}

const std::set<std::string> *AbbreviationLexicon::Lookup(
    std::string_view normalized) const {
  auto it = entries_.find(std::string(normalized));
  return it == entries_.end() ? nullptr : &it->second;
}

bool AbbreviationLexicon::Expands(std::string_view abbreviation,
                                  std::string_view expansion) const {
  auto it = entries_.find(Normalize(abbreviation));
  return it != entries_.end() && it->second.count(Normalize(expansion)) > 0;
}

namespace {

std::string Initials(const std::string &normalized) {
  std::string out;
  for (const auto &word : SplitWhitespace(normalized)) out.push_back(word[0]);
  return out;
}

bool IsSingleWord(const std::string &normalized) {
  return normalized.find(' ') == std::string::npos;
}

std::string HeadWord(const std::string &normalized) {
  size_t space = normalized.rfind(' ');
  return space == std::string::npos ? normalized : normalized.substr(space + 1);
}

bool InitialsMatch(const std::string &na, const std::string &nb) {
  const auto one_way = [](const std::string &shorter,
                          const std::string &longer) {
    if (!IsSingleWord(shorter) || IsSingleWord(longer)) return false;
    std::string initials = Initials(longer);
    return initials.size() >= 2 && initials == shorter;
  };
  return one_way(na, nb) || one_way(nb, na);
}

size_t EditBudget(const std::string &na, const std::string &nb,
                  double ratio) {
  size_t len = std::min(DecodeUtf8(na).size(), DecodeUtf8(nb).size());
  return static_cast<size_t>(std::floor(ratio * static_cast<double>(len)));
}

// Edit merging needs an equal head word; two single words are compared on
// spelling alone (their head word is the whole term).
bool EditGuard(const std::string &na, const std::string &nb) {
  if (IsSingleWord(na) && IsSingleWord(nb)) return true;
  return HeadWord(na) == HeadWord(nb);
}

bool EmbeddingSimilar(const Term &a, const Term &b,
                      const EmbeddingModel *model, double threshold) {
  if (model == nullptr) return false;
  auto ia = model->TargetIndex(a.surface);
  auto ib = model->TargetIndex(b.surface);
  if (!ia || !ib) return false;
  auto va = model->TargetRow(*ia);
  auto vb = model->TargetRow(*ib);
  if (IsZero(va) || IsZero(vb)) return false;
  return Cosine(va, vb) >= threshold;
}

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), size_t{0});
  }
  size_t Find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(size_t a, size_t b) {
    a = Find(a), b = Find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<size_t> parent_;
};

}  // namespace

bool AbbreviationMatch(std::string_view a, std::string_view b,
                       const AbbreviationLexicon &lexicon) {
  std::string na = Normalize(a);
  std::string nb = Normalize(b);
  if (na.empty() || nb.empty()) return false;
  if (lexicon.Expands(na, nb) || lexicon.Expands(nb, na)) return true;
  return InitialsMatch(na, nb);
}

bool ShouldMerge(const Term &a, const Term &b,
                 const EmbeddingModel *aux_embedding,
                 const AbbreviationLexicon &lexicon,
                 const GroupConfig &config) {
  std::string na = Normalize(a.surface);
  std::string nb = Normalize(b.surface);
  if (na.empty() || nb.empty()) return false;
  if (na == nb) return true;
  if (AbbreviationMatch(na, nb, lexicon)) return true;
  if (EditGuard(na, nb) &&
      EditDistance(na, nb) <= EditBudget(na, nb, config.max_edit_ratio)) {
    return true;
  }
  return HeadWord(na) == HeadWord(nb) &&
         EmbeddingSimilar(a, b, aux_embedding, config.sim_threshold);
}

std::vector<TermGroup> GroupTerms(const std::vector<Term> &terms,
                                  const EmbeddingModel *aux_embedding,
                                  const AbbreviationLexicon &lexicon,
                                  const GroupConfig &config) {
  const size_t n = terms.size();
  {
    std::unordered_map<std::string_view, size_t> seen;
    for (size_t i = 0; i < n; ++i) {
      if (!seen.emplace(terms[i].surface, i).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "duplicate term surface '" + terms[i].surface + "'",
                    "terms[" + std::to_string(i) + "]");
      }
    }
  }

  std::vector<std::string> norm(n);
  for (size_t i = 0; i < n; ++i) norm[i] = Normalize(terms[i].surface);
  UnionFind uf(n);

  // The predicate is evaluated through indexes rather than over all pairs;
  // each index covers exactly the pairs its clause can fire on.
  std::unordered_map<std::string, std::vector<size_t>> by_norm;
  std::unordered_map<std::string, std::vector<size_t>> by_head;
  std::unordered_map<std::string, std::vector<size_t>> by_initials;
  std::vector<size_t> single_words;
  for (size_t i = 0; i < n; ++i) {
    if (norm[i].empty()) continue;
    by_norm[norm[i]].push_back(i);
    by_head[HeadWord(norm[i])].push_back(i);
    if (IsSingleWord(norm[i])) {
      single_words.push_back(i);
    } else {
      std::string initials = Initials(norm[i]);
      if (initials.size() >= 2) by_initials[initials].push_back(i);
    }
  }

  for (const auto &[key, members] : by_norm) {
    for (size_t m : members) uf.Union(members[0], m);
  }

  // Abbreviations: lexicon in both directions is covered by treating every
  // term as a potential abbreviation; initials pair single words with
  // multiword terms.
  for (size_t i = 0; i < n; ++i) {
    if (norm[i].empty()) continue;
    if (const auto *expansions = lexicon.Lookup(norm[i])) {
      for (const std::string &e : *expansions) {
        auto it = by_norm.find(e);
        if (it == by_norm.end()) continue;
        for (size_t m : it->second) uf.Union(i, m);
      }
    }
    if (IsSingleWord(norm[i])) {
      auto it = by_initials.find(norm[i]);
      if (it != by_initials.end()) {
        for (size_t m : it->second) uf.Union(i, m);
      }
    }
  }

  // Edit distance and embedding similarity inside a head-word bucket.
  for (const auto &[head, members] : by_head) {
    for (size_t x = 0; x < members.size(); ++x) {
      for (size_t y = x + 1; y < members.size(); ++y) {
        size_t i = members[x], j = members[y];
        if (uf.Find(i) == uf.Find(j)) continue;
        if (EditGuard(norm[i], norm[j]) &&
            EditDistance(norm[i], norm[j]) <=
                EditBudget(norm[i], norm[j], config.max_edit_ratio)) {
          uf.Union(i, j);
        } else if (EmbeddingSimilar(terms[i], terms[j], aux_embedding,
                                    config.sim_threshold)) {
          uf.Union(i, j);
        }
      }
    }
  }

  // Edit distance between single words with different spellings. Sorting by
  // length bounds the scan: the budget never exceeds the length gap allowed.
  std::vector<std::pair<size_t, size_t>> by_length;  // (scalar length, index)
  for (size_t i : single_words) {
    by_length.emplace_back(DecodeUtf8(norm[i]).size(), i);
  }
  std::sort(by_length.begin(), by_length.end());
  for (size_t x = 0; x < by_length.size(); ++x) {
    auto [len_x, i] = by_length[x];
    size_t budget = static_cast<size_t>(
        std::floor(config.max_edit_ratio * static_cast<double>(len_x)));
    for (size_t y = x + 1; y < by_length.size(); ++y) {
      auto [len_y, j] = by_length[y];
      if (len_y - len_x > budget) break;
      if (uf.Find(i) == uf.Find(j)) continue;
      if (EditDistance(norm[i], norm[j]) <= budget) uf.Union(i, j);
    }
  }

  std::map<size_t, std::vector<size_t>> components;
  for (size_t i = 0; i < n; ++i) components[uf.Find(i)].push_back(i);

  std::vector<TermGroup> groups;
  for (const auto &[root, members] : components) {
    TermGroup g;
    const Term *best = nullptr;
    for (size_t i : members) {
      g.members.push_back(terms[i]);
      g.frequency += terms[i].frequency;
      if (best == nullptr || terms[i].frequency > best->frequency ||
          (terms[i].frequency == best->frequency &&
           terms[i].surface < best->surface)) {
        best = &terms[i];
      }
    }
    g.canonical = best->surface;
    std::sort(g.members.begin(), g.members.end(),
              [](const Term &a, const Term &b) { return a.surface < b.surface; });
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(),
            [](const TermGroup &a, const TermGroup &b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.canonical < b.canonical;
            });
  for (size_t i = 0; i < groups.size(); ++i) {
    groups[i].id = static_cast<GroupId>(i);
  }
  return groups;
}

std::string WriteGroups(const std::vector<TermGroup> &groups) {
  std::string out;
  for (const TermGroup &g : groups) {
    json members = json::array();
    for (const Term &t : g.members) {
      members.push_back({{"surface", t.surface}, {"frequency", t.frequency}});
    }
    json record = {{"id", g.id}, {"canonical", g.canonical},
                   {"members", std::move(members)}};
    out += record.dump() + "\n";
  }
  return out;
}

std::vector<TermGroup> ReadGroups(std::string_view text) {
  std::vector<TermGroup> groups;
  size_t line_no = 0;
  for (std::string_view line : Split(text, '\n')) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      json record = json::parse(line);
      TermGroup g;
      g.id = record.at("id").get<GroupId>();
      g.canonical = record.at("canonical").get<std::string>();
      for (const json &m : record.at("members")) {
        Term t{m.at("surface").get<std::string>(),
               m.at("frequency").get<uint64_t>()};
        g.frequency += t.frequency;
        g.members.push_back(std::move(t));
      }
      if (g.members.empty()) throw Error(ErrorCode::kFormat, "no members");
      groups.push_back(std::move(g));
    } catch (const std::exception &e) {
      throw Error(ErrorCode::kFormat, "groups.jsonl line " +
                                          std::to_string(line_no) + ": " +
                                          e.what());
    }
  }
  return groups;
}

}  // namespace termset
