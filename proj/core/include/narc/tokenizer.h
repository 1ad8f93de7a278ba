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

#ifndef NARC_TOKENIZER_H_
#define NARC_TOKENIZER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narc/example.h"

namespace narc {

// Half-open byte range [begin, end) into a UTF-8 string.
struct CharRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const CharRange&) const = default;
};

struct TokenizedText {
  std::vector<std::string> tokens;
  std::vector<CharRange> offsets;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Deterministic word tokenizer shared by every span-based metric and by
// attention exporters (through `narc tokenize`):
//
//   * a maximal run of letters and digits is one token; bytes of non-ASCII
//     UTF-8 characters count as letters;
//   * every other non-space character is a token of its own; the typographic
//     quotes, dashes and ellipsis of U+2010..U+2027 are treated the same way;
//   * an apostrophe (' or U+2019) opens a new token that extends through the
//     letters that follow it, so "Frigo's" -> "Frigo", "'s";
//   * ASCII whitespace separates tokens and is never emitted.
//
// Surface case is preserved. Callers compare tokens with EqualsIgnoreCase.
TokenizedText Tokenize(std::string_view text);

bool IsAsciiSpace(char c);
std::string ToLowerAscii(std::string_view text);
bool EqualsIgnoreCase(std::string_view a, std::string_view b);
bool TokensEqualIgnoreCase(std::span<const std::string> a,
                           std::span<const std::string> b);

// True when the token carries at least one letter or digit.
bool IsWordToken(std::string_view token);

// Tokens lying entirely inside `range`, provided the range starts and ends on
// token boundaries (modulo surrounding whitespace). nullopt otherwise, or when
// no token falls inside.
std::optional<Span> TokenSpanForChars(const TokenizedText& text,
                                      CharRange range);

// Start indices of every case-insensitive occurrence of `needle` in
// `haystack`, in increasing order.
std::vector<std::size_t> FindTokenSequence(std::span<const std::string> haystack,
                                           std::span<const std::string> needle);

}  // namespace narc

#endif  // NARC_TOKENIZER_H_
