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

// Corpus ingestion (plain text and CoNLL-U), noun-phrase candidate extraction
// and snippet lookup.

#ifndef TERMSET_CORPUS_H_
#define TERMSET_CORPUS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "termset/text.h"

namespace termset {

// Head value of the syntactic root of a sentence.
inline constexpr int kRootHead = -1;

struct Token {
  std::string surface;
  std::optional<std::string> lemma;
  std::optional<std::string> pos;  // Penn-style tag
  // 0-based index of the governing token, or kRootHead. Absent when the
  // sentence carries no parse.
  std::optional<int> head;
  std::optional<std::string> deprel;

  bool operator==(const Token &) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::string doc_id;
  size_t sent_index = 0;

  bool Tagged() const;
  bool Parsed() const;
  // Token surfaces joined by single spaces.
  std::string Text() const;

  bool operator==(const Sentence &) const = default;
};

using Corpus = std::vector<Sentence>;

struct TokenizerConfig {
  // Document ids are "<doc_prefix><n>" with n counting blocks from 0.
  std::string doc_prefix = "doc";
};

// Splits blank-line-separated blocks into documents, then sentences and
// tokens. Throws kInvalidArgument naming the byte offset of invalid UTF-8.
Corpus IngestPlaintext(std::string_view text, const TokenizerConfig &config = {});

// Tokenizes a single block (no sentence splitting); exposed for tests.
std::vector<std::string> TokenizeBlock(std::string_view block);

// Reads 10-column CoNLL-U. Multiword-token ranges and empty nodes are
// skipped. "# newdoc id = X" comments start a new document; otherwise all
// sentences belong to `default_doc`.
Corpus IngestConllu(std::string_view text, std::string_view default_doc = "doc0");

// Serializes to CoNLL-U; IngestConllu(WriteConllu(c)) == c on populated fields.
std::string WriteConllu(const Corpus &corpus);

// Line-delimited JSON sentence cache used by project persistence.
std::string WriteCorpusCache(const Corpus &corpus);
Corpus ReadCorpusCache(std::string_view text);

struct CandidateSpan {
  size_t sentence = 0;  // index of the sentence in its corpus
  size_t start = 0;
  size_t end = 0;  // exclusive
  std::string surface;
};

enum class ChunkMode { kPosChunk, kNgram };

struct CandidateConfig {
  ChunkMode mode = ChunkMode::kPosChunk;
  size_t max_ngram = 4;
  const StopwordSet *stopwords = nullptr;  // null = built-in list
};

// pos_chunk: maximal (DT)? (JJ|JJR|JJS)* (NN|NNS|NNP|NNPS)+ spans with the
// determiner stripped. ngram: 1..max_ngram grams without punctuation whose
// boundary tokens are not stopwords. Throws kMode for pos_chunk on an
// untagged sentence.
std::vector<CandidateSpan> ExtractCandidates(const Sentence &sentence,
                                             size_t sentence_index,
                                             const CandidateConfig &config);

struct Snippet {
  std::string doc_id;
  size_t sent_index = 0;
  std::string text;
  // Half-open byte ranges into `text`.
  std::vector<std::pair<size_t, size_t>> highlights;
};

// Up to max_n sentences (in doc_id, sent_index order) containing a
// case-insensitive token-aligned occurrence of one of `members`.
std::vector<Snippet> FindSnippets(const Corpus &corpus,
                                  const std::vector<std::string> &members,
                                  size_t max_n);

}  // namespace termset

#endif  // TERMSET_CORPUS_H_
