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

#include "termset/corpus.h"

#include <algorithm>
#include <charconv>
#include <map>

#include "json.hpp"
#include "termset/error.h"

namespace termset {

using nlohmann::json;

bool Sentence::Tagged() const {
  return std::all_of(tokens.begin(), tokens.end(),
                     [](const Token &t) { return t.pos.has_value(); });
}

bool Sentence::Parsed() const {
  return std::all_of(tokens.begin(), tokens.end(), [](const Token &t) {
    return t.head.has_value() && t.deprel.has_value();
  });
}

std::string Sentence::Text() const {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i].surface;
  }
  return out;
}

namespace {

struct RawToken {
  std::string text;
  bool chunk_final = false;  // last token of its whitespace-delimited chunk
};

bool IsAsciiAlpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Abbreviations keep their final period: single letters ("A.") and words
// with an internal period ("U.S.").
bool KeepsFinalPeriod(std::string_view core) {
  if (core.size() == 1 && IsAsciiAlpha(core[0])) return true;
  return core.find('.') != std::string_view::npos;
}

void TokenizeChunk(std::string_view chunk, std::vector<RawToken> *out) {
  size_t first = out->size();
  if (IsPunctToken(chunk)) {
    out->push_back({std::string(chunk)});
  } else {
    size_t begin = 0;
    while (IsAsciiPunct(chunk[begin])) {
      out->push_back({std::string(1, chunk[begin])});
      ++begin;
    }
    size_t end = chunk.size();
    while (end > begin && IsAsciiPunct(chunk[end - 1])) --end;
    std::string_view core = chunk.substr(begin, end - begin);
    std::string_view trailing = chunk.substr(end);
    if (!trailing.empty() && trailing[0] == '.' && KeepsFinalPeriod(core)) {
      core = chunk.substr(begin, end + 1 - begin);
      trailing.remove_prefix(1);
    }
    out->push_back({std::string(core)});
    size_t i = 0;
    while (i < trailing.size()) {
      size_t j = i + 1;
      if (trailing[i] == '.') {
        while (j < trailing.size() && trailing[j] == '.') ++j;
      }
      out->push_back({std::string(trailing.substr(i, j - i))});
      i = j;
    }
  }
  if (out->size() > first) out->back().chunk_final = true;
}

bool IsTerminal(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(),
                     [](char c) { return c == '.' || c == '!' || c == '?'; });
}

std::vector<std::string_view> SplitBlocks(std::string_view text) {
  std::vector<std::string_view> blocks;
  size_t pos = 0;
  size_t block_start = 0;
  bool in_block = false;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    bool blank = Trim(line).empty();
    if (blank && in_block) {
      blocks.push_back(text.substr(block_start, pos - block_start));
      in_block = false;
    } else if (!blank && !in_block) {
      block_start = pos;
      in_block = true;
    }
    pos = eol + 1;
  }
  if (in_block) blocks.push_back(text.substr(block_start));
  return blocks;
}

std::vector<RawToken> TokenizeRaw(std::string_view block) {
  std::vector<RawToken> tokens;
  for (const std::string &chunk : SplitWhitespace(block)) {
    TokenizeChunk(chunk, &tokens);
  }
  return tokens;
}

}  // namespace

std::vector<std::string> TokenizeBlock(std::string_view block) {
  std::vector<std::string> out;
  for (auto &t : TokenizeRaw(block)) out.push_back(std::move(t.text));
  return out;
}

Corpus IngestPlaintext(std::string_view text, const TokenizerConfig &config) {
  if (auto bad = FindInvalidUtf8(text)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  Corpus corpus;
  size_t doc = 0;
  for (std::string_view block : SplitBlocks(text)) {
    std::string doc_id = config.doc_prefix + std::to_string(doc++);
    std::vector<RawToken> raw = TokenizeRaw(block);
    Sentence current;
    current.doc_id = doc_id;
    size_t sent_index = 0;
    for (size_t i = 0; i < raw.size(); ++i) {
      current.tokens.emplace_back().surface = raw[i].text;
      bool boundary = false;
      if (IsTerminal(raw[i].text) && raw[i].chunk_final) {
        boundary = i + 1 == raw.size() || IsAsciiUpper(raw[i + 1].text[0]);
      }
      if (boundary || i + 1 == raw.size()) {
        current.sent_index = sent_index++;
        corpus.push_back(std::move(current));
        current = Sentence();
        current.doc_id = doc_id;
      }
    }
  }
  return corpus;
}

namespace {

[[noreturn]] void ConlluError(size_t line, const std::string &what) {
  throw Error(ErrorCode::kFormat,
              "CoNLL-U line " + std::to_string(line) + ": " + what);
}

std::optional<std::string> Field(const std::string &value) {
  if (value == "_") return std::nullopt;
  return value;
}

bool ParseInt(std::string_view s, long *out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Corpus IngestConllu(std::string_view text, std::string_view default_doc) {
  if (auto bad = FindInvalidUtf8(text)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  Corpus corpus;
  std::string doc_id(default_doc);
  std::map<std::string, size_t> next_index;
  Sentence current;
  std::vector<long> heads;  // raw 1-based HEAD values, -1 for "_"
  size_t first_line = 0;

  const auto finish = [&](size_t line_no) {
    if (current.tokens.empty()) return;
    long n = static_cast<long>(current.tokens.size());
    for (size_t i = 0; i < heads.size(); ++i) {
      if (heads[i] < 0) continue;
      if (heads[i] > n || heads[i] == static_cast<long>(i) + 1) {
        ConlluError(first_line + i, "HEAD " + std::to_string(heads[i]) +
                                        " out of range for sentence of " +
                                        std::to_string(n) + " tokens");
      }
      current.tokens[i].head =
          heads[i] == 0 ? kRootHead : static_cast<int>(heads[i] - 1);
    }
    current.doc_id = doc_id;
    current.sent_index = next_index[doc_id]++;
    corpus.push_back(std::move(current));
    current = Sentence();
    heads.clear();
    (void)line_no;
  };

  size_t line_no = 0;
  for (std::string_view line_view : Split(text, '\n')) {
    ++line_no;
    std::string line(line_view);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) {
      finish(line_no);
      continue;
    }
    if (line[0] == '#') {
      constexpr std::string_view kNewdoc = "# newdoc id =";
      if (line.compare(0, kNewdoc.size(), kNewdoc) == 0) {
        finish(line_no);
        doc_id = std::string(Trim(std::string_view(line).substr(kNewdoc.size())));
      }
      continue;
    }
    std::vector<std::string> cols = Split(line, '\t');
    if (cols.size() != 10) {
      ConlluError(line_no, "expected 10 tab-separated columns, found " +
                               std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string::npos) continue;
    long id;
    if (!ParseInt(cols[0], &id) || id < 1) {
      ConlluError(line_no, "invalid ID '" + cols[0] + "'");
    }
    if (current.tokens.empty()) first_line = line_no;
    if (id != static_cast<long>(current.tokens.size()) + 1) {
      ConlluError(line_no, "non-sequential ID " + cols[0]);
    }
    Token token;
    token.surface = cols[1];
    if (token.surface.empty() || token.surface == "_") {
      ConlluError(line_no, "empty FORM");
    }
    token.lemma = Field(cols[2]);
    token.pos = Field(cols[4]);
    if (!token.pos) token.pos = Field(cols[3]);
    long head = -1;
    if (cols[6] != "_") {
      if (!ParseInt(cols[6], &head) || head < 0) {
        ConlluError(line_no, "non-integer HEAD '" + cols[6] + "'");
      }
    }
    token.deprel = Field(cols[7]);
    if (token.deprel && !token.pos) {
      ConlluError(line_no, "DEPREL present without a POS tag");
    }
    heads.push_back(head);
    current.tokens.push_back(std::move(token));
  }
  finish(line_no);
  return corpus;
}

std::string WriteConllu(const Corpus &corpus) {
  std::string out;
  std::string doc;
  bool first = true;
  for (const Sentence &s : corpus) {
    if (first || s.doc_id != doc) {
      out += "# newdoc id = " + s.doc_id + "\n";
      doc = s.doc_id;
      first = false;
    }
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      const Token &t = s.tokens[i];
      std::string head = "_";
      if (t.head) head = std::to_string(*t.head == kRootHead ? 0 : *t.head + 1);
      out += std::to_string(i + 1) + "\t" + t.surface + "\t" +
             t.lemma.value_or("_") + "\t_\t" + t.pos.value_or("_") + "\t_\t" +
             head + "\t" + t.deprel.value_or("_") + "\t_\t_\n";
    }
    out += "\n";
  }
  return out;
}

std::string WriteCorpusCache(const Corpus &corpus) {
  std::string out;
  for (const Sentence &s : corpus) {
    json tokens = json::array();
    for (const Token &t : s.tokens) {
      json tok = {{"surface", t.surface}};
      if (t.lemma) tok["lemma"] = *t.lemma;
      if (t.pos) tok["pos"] = *t.pos;
      if (t.head) tok["head"] = *t.head;
      if (t.deprel) tok["deprel"] = *t.deprel;
      tokens.push_back(std::move(tok));
    }
    json record = {{"doc_id", s.doc_id},
                   {"sent_index", s.sent_index},
                   {"tokens", std::move(tokens)}};
    out += record.dump() + "\n";
  }
  return out;
}

Corpus ReadCorpusCache(std::string_view text) {
  Corpus corpus;
  size_t line_no = 0;
  for (std::string_view line : Split(text, '\n')) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      json record = json::parse(line);
      Sentence s;
      s.doc_id = record.at("doc_id").get<std::string>();
      s.sent_index = record.at("sent_index").get<size_t>();
      for (const json &tok : record.at("tokens")) {
        Token t;
        t.surface = tok.at("surface").get<std::string>();
        if (tok.contains("lemma")) t.lemma = tok["lemma"].get<std::string>();
        if (tok.contains("pos")) t.pos = tok["pos"].get<std::string>();
        if (tok.contains("head")) t.head = tok["head"].get<int>();
        if (tok.contains("deprel")) t.deprel = tok["deprel"].get<std::string>();
        s.tokens.push_back(std::move(t));
      }
      if (s.tokens.empty()) throw Error(ErrorCode::kFormat, "empty sentence");
      corpus.push_back(std::move(s));
    } catch (const std::exception &e) {
      throw Error(ErrorCode::kFormat, "corpus cache line " +
                                          std::to_string(line_no) + ": " +
                                          e.what());
    }
  }
  return corpus;
}

namespace {

bool IsNounTag(const std::string &tag) {
  return tag == "NN" || tag == "NNS" || tag == "NNP" || tag == "NNPS";
}

bool IsAdjectiveTag(const std::string &tag) {
  return tag == "JJ" || tag == "JJR" || tag == "JJS";
}

bool IsCoordinator(std::string_view token) {
  std::string lower = AsciiLower(token);
  return lower == "and" || lower == "or" || lower == "nor";
}

CandidateSpan MakeSpan(const Sentence &s, size_t index, size_t start,
                       size_t end) {
  CandidateSpan span{index, start, end, {}};
  for (size_t i = start; i < end; ++i) {
    if (i > start) span.surface.push_back(' ');
    span.surface += s.tokens[i].surface;
  }
  return span;
}

}  // namespace

std::vector<CandidateSpan> ExtractCandidates(const Sentence &sentence,
                                             size_t sentence_index,
                                             const CandidateConfig &config) {
  std::vector<CandidateSpan> spans;
  const auto &tokens = sentence.tokens;
  if (config.mode == ChunkMode::kPosChunk) {
    if (!sentence.Tagged()) {
      throw Error(ErrorCode::kMode,
                  "pos_chunk candidate extraction needs POS tags on every "
                  "token (sentence " +
                      sentence.doc_id + "#" +
                      std::to_string(sentence.sent_index) + ")");
    }
    size_t i = 0;
    while (i < tokens.size()) {
      size_t j = i;
      if (*tokens[j].pos == "DT") ++j;
      size_t start = j;
      while (j < tokens.size() && IsAdjectiveTag(*tokens[j].pos)) ++j;
      size_t nouns = j;
      while (j < tokens.size() && IsNounTag(*tokens[j].pos)) ++j;
      if (j > nouns) {
        spans.push_back(MakeSpan(sentence, sentence_index, start, j));
        i = j;
      } else {
        ++i;
      }
    }
    return spans;
  }

  const StopwordSet &stopwords =
      config.stopwords ? *config.stopwords : StopwordSet::BuiltIn();
  for (size_t start = 0; start < tokens.size(); ++start) {
    for (size_t n = 1; n <= config.max_ngram && start + n <= tokens.size();
         ++n) {
      const Token &last = tokens[start + n - 1];
      // A punctuation token or coordinator ends every longer gram too.
      if (IsPunctToken(last.surface) || IsCoordinator(last.surface)) break;
      if (stopwords.Contains(tokens[start].surface)) break;
      if (stopwords.Contains(last.surface)) continue;
      spans.push_back(MakeSpan(sentence, sentence_index, start, start + n));
    }
  }
  return spans;
}

std::vector<Snippet> FindSnippets(const Corpus &corpus,
                                  const std::vector<std::string> &members,
                                  size_t max_n) {
  std::vector<std::vector<std::string>> patterns;
  for (const auto &m : members) {
    std::vector<std::string> words = SplitWhitespace(AsciiLower(m));
    if (!words.empty()) patterns.push_back(std::move(words));
  }
  std::vector<const Sentence *> order;
  for (const Sentence &s : corpus) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const Sentence *a, const Sentence *b) {
                     if (a->doc_id != b->doc_id) return a->doc_id < b->doc_id;
                     return a->sent_index < b->sent_index;
                   });

  std::vector<Snippet> out;
  for (const Sentence *s : order) {
    if (out.size() >= max_n) break;
    std::vector<std::string> lower;
    std::vector<size_t> offsets;
    size_t offset = 0;
    for (const Token &t : s->tokens) {
      lower.push_back(AsciiLower(t.surface));
      offsets.push_back(offset);
      offset += t.surface.size() + 1;
    }
    Snippet snippet{s->doc_id, s->sent_index, s->Text(), {}};
    size_t i = 0;
    while (i < lower.size()) {
      size_t best = 0;
      for (const auto &p : patterns) {
        if (p.size() <= best || i + p.size() > lower.size()) continue;
        if (std::equal(p.begin(), p.end(), lower.begin() + i)) best = p.size();
      }
      if (best == 0) {
        ++i;
        continue;
      }
      size_t end_token = i + best - 1;
      snippet.highlights.emplace_back(
          offsets[i], offsets[end_token] + s->tokens[end_token].surface.size());
      i += best;
    }
    if (!snippet.highlights.empty()) out.push_back(std::move(snippet));
  }
  return out;
}

}  // namespace termset
