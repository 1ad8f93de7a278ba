// Copyright 2026 The narc Authors.
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

#ifndef NARC_DECLARATIVE_H_
#define NARC_DECLARATIVE_H_

#include <optional>
#include <string>
#include <string_view>

#include "narc/parse_tree.h"
#include "narc/tokenizer.h"

namespace narc {

enum class DeclarativeMethod { kBlankSubstitution, kParseRule, kHeuristicFallback };

std::string_view DeclarativeMethodName(DeclarativeMethod method);

struct DeclarativeResult {
  std::string sentence;
  DeclarativeMethod method = DeclarativeMethod::kHeuristicFallback;
  // Set when no rule recognised the query and the answer was simply tacked
  // onto it.
  bool warning = false;
  // Bytes of `sentence` holding the inserted answer, when known.
  std::optional<CharRange> answer_range;
};

// Rewrites a (query, answer) pair as one declarative sentence ending in '.'.
//
//   1. A query containing '_' has its first blank run ("_", "___", "_ _")
//      replaced by the answer; later runs are deleted.
//   2. Otherwise, with a parse, the wh-phrase is replaced by the answer and
//      subject-auxiliary inversion is undone (see docs/conventions.md for the
//      rule table).
//   3. Otherwise a leading wh-word and the auxiliary after it are stripped
//      and the answer is appended, with " is " when no verb remains.
//
// Throws ValidationError when query or answer is empty.
DeclarativeResult ToDeclarative(std::string_view query, std::string_view answer,
                                const ParseTree* parse = nullptr);

}  // namespace narc

#endif  // NARC_DECLARATIVE_H_
