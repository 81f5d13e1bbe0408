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

// Helpers shared by the test binaries.

#ifndef TERMSET_TESTS_TEST_UTIL_H_
#define TERMSET_TESTS_TEST_UTIL_H_

#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unistd.h>
#include <vector>

#include "termset/corpus.h"
#include "termset/error.h"
#include "termset/text.h"

namespace termset::testing {

// A fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("termset-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Sentence from whitespace-separated tokens, each optionally "surface/TAG".
inline Sentence MakeSentence(std::string_view text, bool tagged = false) {
  Sentence s;
  for (const std::string &tok : SplitWhitespace(text)) {
    Token t;
    size_t slash = tagged ? tok.rfind('/') : std::string::npos;
    if (slash != std::string::npos && slash > 0) {
      t.surface = tok.substr(0, slash);
      t.pos = tok.substr(slash + 1);
    } else {
      t.surface = tok;
    }
    s.tokens.push_back(std::move(t));
  }
  s.doc_id = "doc0";
  return s;
}

// The error code `fn` throws, or nullopt when it returns normally.
inline std::optional<ErrorCode> ThrownCode(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::string SourcePath(std::string_view relative) {
  return std::string(TERMSET_SOURCE_DIR) + "/" + std::string(relative);
}

}  // namespace termset::testing

#endif  // TERMSET_TESTS_TEST_UTIL_H_
