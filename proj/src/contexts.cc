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

#include "termset/contexts.h"

#include <algorithm>
#include <optional>

#include "termset/error.h"

namespace termset {

GroupIndex::GroupIndex(const std::vector<TermGroup> &groups) {
  for (const TermGroup &g : groups) {
    std::vector<std::string> surfaces;
    for (const Term &t : g.members) surfaces.push_back(t.surface);
    Add(g.id, g.canonical, surfaces);
  }
}

void GroupIndex::Add(GroupId id, std::string_view canonical,
                     const std::vector<std::string> &surfaces) {
  canonical_[id] = std::string(canonical);
  for (const std::string &surface : surfaces) {
    std::vector<std::string> tokens = SplitWhitespace(AsciiLower(surface));
    if (tokens.empty()) continue;
    max_length_ = std::max(max_length_, tokens.size());
    members_.emplace(std::move(tokens), id);
  }
}

const std::string &GroupIndex::Canonical(GroupId id) const {
  auto it = canonical_.find(id);
  if (it == canonical_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown group id " + std::to_string(id));
  }
  return it->second;
}

const GroupId *GroupIndex::Match(const std::vector<std::string> &lower_tokens,
                                 size_t start, size_t n) const {
  std::vector<std::string> key(lower_tokens.begin() + static_cast<long>(start),
                               lower_tokens.begin() +
                                   static_cast<long>(start + n));
  auto it = members_.find(key);
  return it == members_.end() ? nullptr : &it->second;
}

AnnotatedSentence Annotate(const Sentence &sentence, const GroupIndex &groups) {
  AnnotatedSentence out{&sentence, {}};
  std::vector<std::string> lower;
  lower.reserve(sentence.tokens.size());
  for (const Token &t : sentence.tokens) lower.push_back(AsciiLower(t.surface));
  size_t i = 0;
  while (i < lower.size()) {
    size_t longest = std::min(groups.max_length(), lower.size() - i);
    bool matched = false;
    for (size_t n = longest; n >= 1; --n) {
      if (const GroupId *g = groups.Match(lower, i, n)) {
        out.mentions.push_back({i, i + n, *g});
        i += n;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return out;
}

namespace {

const StopwordSet &Stopwords(const ContextConfig &config) {
  return config.stopwords ? *config.stopwords : StopwordSet::BuiltIn();
}

struct Unit {
  std::string text;
  std::optional<GroupId> group;  // set for mention units
};

// Mentions collapse to one unit; stopwords and punctuation are dropped.
std::vector<Unit> LinearUnits(const AnnotatedSentence &s,
                              const GroupIndex &groups,
                              const StopwordSet &stopwords) {
  std::vector<Unit> units;
  const auto &tokens = s.sentence->tokens;
  size_t m = 0;
  size_t i = 0;
  while (i < tokens.size()) {
    if (m < s.mentions.size() && s.mentions[m].start == i) {
      units.push_back({groups.Canonical(s.mentions[m].group), s.mentions[m].group});
      i = s.mentions[m].end;
      ++m;
      continue;
    }
    const std::string &surface = tokens[i].surface;
    if (!IsPunctToken(surface) && !stopwords.Contains(surface)) {
      units.push_back({surface, std::nullopt});
    }
    ++i;
  }
  return units;
}

bool IsConjunction(std::string_view token) {
  std::string lower = AsciiLower(token);
  return lower == "and" || lower == "or";
}

// Mention index owning each token, or -1.
std::vector<long> MentionOwners(const AnnotatedSentence &s) {
  std::vector<long> owner(s.sentence->tokens.size(), -1);
  for (size_t m = 0; m < s.mentions.size(); ++m) {
    for (size_t i = s.mentions[m].start; i < s.mentions[m].end; ++i) {
      owner[i] = static_cast<long>(m);
    }
  }
  return owner;
}

}  // namespace

std::vector<ContextPair> ExtractLinear(const AnnotatedSentence &s,
                                       const GroupIndex &groups,
                                       const ContextConfig &config) {
  std::vector<ContextPair> out;
  std::vector<Unit> units = LinearUnits(s, groups, Stopwords(config));
  const size_t w = config.window;
  for (size_t p = 0; p < units.size(); ++p) {
    if (!units[p].group) continue;
    size_t lo = p >= w ? p - w : 0;
    size_t hi = std::min(units.size() - 1, p + w);
    for (size_t q = lo; q <= hi; ++q) {
      if (q == p) continue;
      out.push_back({*units[p].group, units[q].text, ContextType::kLinear});
    }
  }
  return out;
}

std::vector<ContextPair> ExtractLists(const AnnotatedSentence &s,
                                      const GroupIndex &groups,
                                      const ContextConfig &config) {
  std::vector<ContextPair> out;
  const auto &tokens = s.sentence->tokens;
  const auto &mentions = s.mentions;
  size_t j = 0;
  while (j < mentions.size()) {
    size_t last = j;
    while (last + 1 < mentions.size()) {
      size_t gap_begin = mentions[last].end;
      size_t gap_end = mentions[last + 1].start;
      size_t gap = gap_end - gap_begin;
      bool comma = gap >= 1 && tokens[gap_begin].surface == ",";
      bool conj = gap >= 1 && IsConjunction(tokens[gap_end - 1].surface);
      bool separator = (gap == 1 && (comma || conj)) ||
                       (gap == 2 && comma && conj);
      if (!separator) break;
      ++last;
      if (conj) break;  // a conjunction closes the list
    }
    size_t items = last - j + 1;
    if (items >= config.min_list_items) {
      for (size_t a = j; a <= last; ++a) {
        for (size_t b = j; b <= last; ++b) {
          if (a == b) continue;
          out.push_back({mentions[a].group, groups.Canonical(mentions[b].group),
                         ContextType::kList});
        }
      }
      j = last + 1;
    } else {
      ++j;
    }
  }
  return out;
}

std::vector<ContextPair> ExtractDependency(const AnnotatedSentence &s,
                                           const GroupIndex &groups,
                                           const ContextConfig &config) {
  (void)config;
  const Sentence &sentence = *s.sentence;
  if (!sentence.Parsed()) {
    throw Error(ErrorCode::kMode,
                "dependency contexts need a parsed sentence (" +
                    sentence.doc_id + "#" + std::to_string(sentence.sent_index) +
                    ")");
  }
  const auto &tokens = sentence.tokens;
  const size_t n = tokens.size();
  std::vector<long> owner = MentionOwners(s);
  std::vector<std::vector<size_t>> children(n);
  for (size_t i = 0; i < n; ++i) {
    int h = *tokens[i].head;
    if (h >= 0 && static_cast<size_t>(h) < n) children[h].push_back(i);
  }
  const auto unit = [&](size_t i) -> std::string {
    if (owner[i] >= 0) return groups.Canonical(s.mentions[owner[i]].group);
    return tokens[i].surface;
  };
  const auto is_punct = [&](size_t i) {
    return *tokens[i].deprel == "punct" || IsPunctToken(tokens[i].surface);
  };
  // Preposition attached through a "case" child (UD style), if any.
  const auto case_marker = [&](size_t i) -> std::optional<std::string> {
    for (size_t c : children[i]) {
      if (*tokens[c].deprel == "case") return AsciiLower(tokens[c].surface);
    }
    return std::nullopt;
  };

  std::vector<ContextPair> out;
  for (size_t m = 0; m < s.mentions.size(); ++m) {
    const Mention &mention = s.mentions[m];
    const auto inside = [&](long i) {
      return i >= static_cast<long>(mention.start) &&
             i < static_cast<long>(mention.end);
    };
    // Syntactic head: the rightmost token governed from outside the span.
    std::optional<size_t> head;
    for (size_t i = mention.start; i < mention.end; ++i) {
      if (!inside(*tokens[i].head)) head = i;
    }
    if (!head) continue;
    const auto emit = [&](std::string context) {
      out.push_back({mention.group, std::move(context), ContextType::kDependency});
    };

    for (size_t i = mention.start; i < mention.end; ++i) {
      for (size_t d : children[i]) {
        if (inside(static_cast<long>(d)) || is_punct(d)) continue;
        const std::string &rel = *tokens[d].deprel;
        if (rel == "prep") {
          // Stanford basic: verb -prep-> preposition -pobj-> noun.
          std::string prep = AsciiLower(tokens[d].surface);
          bool collapsed = false;
          for (size_t p : children[d]) {
            if (*tokens[p].deprel == "pobj" && !inside(static_cast<long>(p))) {
              emit(unit(p) + "/prep_" + prep);
              collapsed = true;
            }
          }
          if (!collapsed) emit(unit(d) + "/prep");
        } else if (rel == "case" || rel == "pobj") {
          continue;
        } else if (auto marker = case_marker(d)) {
          emit(unit(d) + "/prep_" + *marker);
        } else {
          emit(unit(d) + "/" + rel);
        }
      }
    }

    int g = *tokens[*head].head;
    if (g == kRootHead || is_punct(*head)) continue;
    const std::string &rel = *tokens[*head].deprel;
    size_t gov = static_cast<size_t>(g);
    if (rel == "pobj" && *tokens[gov].deprel == "prep" &&
        *tokens[gov].head != kRootHead) {
      size_t top = static_cast<size_t>(*tokens[gov].head);
      if (!inside(static_cast<long>(top))) {
        emit(unit(top) + "/prep_" + AsciiLower(tokens[gov].surface) + "-1");
      }
    } else if (rel == "case") {
      continue;
    } else if (auto marker = case_marker(*head)) {
      emit(unit(gov) + "/prep_" + *marker + "-1");
    } else {
      emit(unit(gov) + "/" + rel + "-1");
    }
  }
  return out;
}

std::vector<ContextPair> ExtractSymmetric(const AnnotatedSentence &s,
                                          const GroupIndex &groups,
                                          const ContextConfig &config) {
  std::vector<ContextPair> out;
  const auto &tokens = s.sentence->tokens;
  for (size_t m = 0; m + 1 < s.mentions.size(); ++m) {
    const Mention &x = s.mentions[m];
    const Mention &y = s.mentions[m + 1];
    if (y.start != x.end + 1) continue;
    std::string between = AsciiLower(tokens[x.end].surface);
    if (std::find(config.symmetric_patterns.begin(),
                  config.symmetric_patterns.end(),
                  between) == config.symmetric_patterns.end()) {
      continue;
    }
    out.push_back({x.group, groups.Canonical(y.group), ContextType::kSymmetric});
    out.push_back({y.group, groups.Canonical(x.group), ContextType::kSymmetric});
  }
  return out;
}

std::vector<ContextPair> ExtractUnary(const AnnotatedSentence &s,
                                      const GroupIndex &groups,
                                      const ContextConfig &config) {
  (void)groups;
  std::vector<ContextPair> out;
  const auto &tokens = s.sentence->tokens;
  const StopwordSet &stopwords = Stopwords(config);
  const size_t gram = config.unary_gram;
  // Window of plain words, or nothing if it holds punctuation or only
  // stopwords.
  const auto window = [&](size_t begin) -> std::optional<std::string> {
    std::vector<std::string> words;
    bool content = false;
    for (size_t i = begin; i < begin + gram; ++i) {
      if (IsPunctToken(tokens[i].surface)) return std::nullopt;
      content |= !stopwords.Contains(tokens[i].surface);
      words.push_back(tokens[i].surface);
    }
    if (!content) return std::nullopt;
    return Join(words, " ");
  };
  if (gram == 0) return out;
  for (const Mention &m : s.mentions) {
    if (m.start >= gram) {
      if (auto left = window(m.start - gram)) {
        out.push_back({m.group, *left + " __", ContextType::kUnary});
      }
    }
    if (m.end + gram <= tokens.size()) {
      if (auto right = window(m.end)) {
        out.push_back({m.group, "__ " + *right, ContextType::kUnary});
      }
    }
  }
  return out;
}

std::vector<ContextPair> Extract(ContextType ctype, const AnnotatedSentence &s,
                                 const GroupIndex &groups,
                                 const ContextConfig &config) {
  switch (ctype) {
    case ContextType::kLinear: return ExtractLinear(s, groups, config);
    case ContextType::kList: return ExtractLists(s, groups, config);
    case ContextType::kDependency: return ExtractDependency(s, groups, config);
    case ContextType::kSymmetric: return ExtractSymmetric(s, groups, config);
    case ContextType::kUnary: return ExtractUnary(s, groups, config);
  }
  return {};
}

PairSet BuildPairs(const Corpus &corpus, const GroupIndex &groups,
                   ContextType ctype, const ContextConfig &config) {
  if (ctype == ContextType::kDependency) {
    for (const Sentence &s : corpus) {
      if (!s.Parsed()) {
        throw Error(ErrorCode::kMode,
                    "dependency contexts need a parsed corpus; sentence " +
                        s.doc_id + "#" + std::to_string(s.sent_index) +
                        " has no parse (ingest CoNLL-U)");
      }
    }
  }
  PairSet out;
  for (const Sentence &sentence : corpus) {
    AnnotatedSentence annotated = Annotate(sentence, groups);
    if (annotated.mentions.empty()) continue;
    for (ContextPair &p : Extract(ctype, annotated, groups, config)) {
      ++out.context_counts[p.context];
      ++out.target_counts[p.target];
      out.pairs.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<UnitPair> ToUnitPairs(const std::vector<ContextPair> &pairs) {
  std::vector<UnitPair> out;
  out.reserve(pairs.size());
  for (const ContextPair &p : pairs) {
    out.push_back({std::to_string(p.target), p.context});
  }
  return out;
}

namespace {

std::string Flatten(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

std::string WritePairFile(const std::vector<ContextPair> &pairs) {
  std::string out;
  for (const ContextPair &p : pairs) {
    out += std::to_string(p.target) + "\t" + Flatten(p.context) + "\n";
  }
  return out;
}

std::string WriteCountFile(const std::map<std::string, uint64_t> &counts) {
  std::string out;
  for (const auto &[unit, count] : counts) {
    out += Flatten(unit) + "\t" + std::to_string(count) + "\n";
  }
  return out;
}

}  // namespace termset
