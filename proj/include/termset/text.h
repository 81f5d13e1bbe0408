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

// Small byte-level string helpers shared by the corpus, grouping and context
// modules. Case folding and punctuation classes are ASCII-only; bytes >= 0x80
// are treated as word characters.

#ifndef TERMSET_TEXT_H_
#define TERMSET_TEXT_H_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace termset {

// Returns the byte offset of the first invalid UTF-8 sequence, if any.
std::optional<size_t> FindInvalidUtf8(std::string_view text);

// Decodes valid UTF-8 into Unicode scalar values. Invalid bytes decode to
// U+FFFD so the function is total.
std::u32string DecodeUtf8(std::string_view text);

bool IsAsciiPunct(char c);
bool IsAsciiSpace(char c);
bool IsAsciiUpper(char c);
char AsciiLower(char c);
std::string AsciiLower(std::string_view s);

// True when every byte of a nonempty token is ASCII punctuation.
bool IsPunctToken(std::string_view token);

std::vector<std::string> SplitWhitespace(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);
std::string Join(const std::vector<std::string> &parts, std::string_view sep);
std::string_view Trim(std::string_view s);

// Case-insensitive membership over a lowercase word set.
class StopwordSet {
 public:
  StopwordSet() = default;
  explicit StopwordSet(std::set<std::string> words);

  // Parses one word per line; '#' starts a comment line.
  static StopwordSet Parse(std::string_view text);
  static StopwordSet LoadFile(const std::string &path);
  // The list shipped in data/stopwords.txt.
  static const StopwordSet &BuiltIn();

  bool Contains(std::string_view word) const;
  size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

}  // namespace termset

#endif  // TERMSET_TEXT_H_
