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

#ifndef TERMSET_CONTEXT_TYPE_H_
#define TERMSET_CONTEXT_TYPE_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace termset {

// The order of the enumerators is the feature order of the classifier input.
enum class ContextType {
  kLinear = 0,
  kList = 1,
  kDependency = 2,
  kSymmetric = 3,
  kUnary = 4,
};

inline constexpr size_t kNumContextTypes = 5;

inline constexpr std::array<ContextType, kNumContextTypes> kAllContextTypes = {
    ContextType::kLinear, ContextType::kList, ContextType::kDependency,
    ContextType::kSymmetric, ContextType::kUnary};

constexpr size_t Index(ContextType t) { return static_cast<size_t>(t); }

std::string_view ContextTypeName(ContextType t);
std::optional<ContextType> ParseContextType(std::string_view name);

}  // namespace termset

#endif  // TERMSET_CONTEXT_TYPE_H_
