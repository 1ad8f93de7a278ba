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

#include "narc/sentences.h"

namespace narc {

namespace {

bool IsTerminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool StartsWithOpeningQuote(std::string_view text, std::size_t pos) {
  const char c = text[pos];
  if (c == '"' || c == '\'' || c == '`') return true;
  // U+201C and U+2018.
  return text.substr(pos, 3) == "\xE2\x80\x9C" ||
         text.substr(pos, 3) == "\xE2\x80\x98";
}

bool EndsSentence(std::string_view text, std::size_t terminator) {
  std::size_t next = terminator + 1;
  if (next == text.size()) return true;
  if (!IsAsciiSpace(text[next])) return false;
  while (next < text.size() && IsAsciiSpace(text[next])) ++next;
  if (next == text.size()) return true;
  const char c = text[next];
  return (c >= 'A' && c <= 'Z') || StartsWithOpeningQuote(text, next);
}

}  // namespace

std::vector<CharRange> SplitSentences(std::string_view text) {
  std::vector<CharRange> sentences;
  bool open = false;
  std::size_t start = 0;
  std::size_t last_non_space = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (IsAsciiSpace(c)) continue;
    if (!open) {
      open = true;
      start = i;
    }
    last_non_space = i;
    if (IsTerminator(c) && EndsSentence(text, i)) {
      sentences.push_back({start, i + 1});
      open = false;
    }
  }
  if (open) sentences.push_back({start, last_non_space + 1});
  return sentences;
}

std::vector<std::string> SentenceTexts(std::string_view text) {
  std::vector<std::string> out;
  for (const CharRange& r : SplitSentences(text)) {
    out.emplace_back(text.substr(r.begin, r.size()));
  }
  return out;
}

std::vector<Span> SentenceTokenSpans(std::string_view text,
                                     const TokenizedText& tokens) {
  std::vector<Span> spans;
  std::size_t t = 0;
  for (const CharRange& r : SplitSentences(text)) {
    Span span{t, t};
    while (t < tokens.size() && tokens.offsets[t].begin < r.end) ++t;
    span.end = t;
    if (span.size() > 0) spans.push_back(span);
  }
  return spans;
}

}  // namespace narc
