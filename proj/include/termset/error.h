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

#ifndef TERMSET_ERROR_H_
#define TERMSET_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace termset {

// Broad failure classes. The service maps these onto HTTP statuses and the
// CLI onto exit codes, so every thrown Error must carry one.
enum class ErrorCode {
  kInvalidArgument,  // malformed request or input data
  kNotFound,         // unknown project/group/session id
  kConflict,         // operation not valid in the current state
  kFormat,           // corrupt or malformed file contents
  kMode,             // operation requires data the input lacks (POS, parse)
  kTraining,         // numerical failure or empty vocabulary during training
  kIo,               // filesystem failure
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message, std::string field = {})
      : std::runtime_error(message), code_(code), field_(std::move(field)) {}

  ErrorCode code() const { return code_; }

  // Optional path of the offending request field, e.g. "seed_ids[2]".
  const std::string &field() const { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace termset

#endif  // TERMSET_ERROR_H_
