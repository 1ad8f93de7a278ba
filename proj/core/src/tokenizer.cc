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

#include "narc/tokenizer.h"

#include <algorithm>

namespace narc {

namespace {

enum class CharClass { kSpace, kWord, kApostrophe, kPunct };

// Byte length of the UTF-8 sequence starting with `lead`; malformed lead
// bytes are treated as single bytes.
std::size_t SequenceLength(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 1;
}

struct Classified {
  CharClass cls;
  std::size_t length;
};

Classified Classify(std::string_view text, std::size_t pos) {
  const auto c = static_cast<unsigned char>(text[pos]);
  if (c < 0x80) {
    if (IsAsciiSpace(static_cast<char>(c))) return {CharClass::kSpace, 1};
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
        (c >= '0' && c <= '9')) {
      return {CharClass::kWord, 1};
    }
    if (c == '\'') return {CharClass::kApostrophe, 1};
    return {CharClass::kPunct, 1};
  }
  std::size_t len = std::min(SequenceLength(c), text.size() - pos);
  // U+2010..U+2027 (E2 80 90..A7): dashes, typographic quotes, ellipsis.
  if (len == 3 && c == 0xE2 && static_cast<unsigned char>(text[pos + 1]) == 0x80) {
    const auto third = static_cast<unsigned char>(text[pos + 2]);
    if (third == 0x99) return {CharClass::kApostrophe, 3};  // U+2019
    if (third >= 0x90 && third <= 0xA7) return {CharClass::kPunct, 3};
  }
  return {CharClass::kWord, len};
}

bool IsLetterAt(std::string_view text, std::size_t pos) {
  const auto c = static_cast<unsigned char>(text[pos]);
  if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  return Classify(text, pos).cls == CharClass::kWord;
}

}  // namespace

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

TokenizedText Tokenize(std::string_view text) {
  TokenizedText out;
  std::size_t pos = 0;
  const std::size_t n = text.size();
  while (pos < n) {
    const Classified head = Classify(text, pos);
    std::size_t end = pos + head.length;
    switch (head.cls) {
      case CharClass::kSpace:
        pos = end;
        continue;
      case CharClass::kWord:
        while (end < n) {
          const Classified next = Classify(text, end);
          if (next.cls != CharClass::kWord) break;
          end += next.length;
        }
        break;
      case CharClass::kApostrophe:
        while (end < n && IsLetterAt(text, end)) {
          end += Classify(text, end).length;
        }
        break;
      case CharClass::kPunct:
        break;
    }
    out.tokens.emplace_back(text.substr(pos, end - pos));
    out.offsets.push_back({pos, end});
    pos = end;
  }
  return out;
}

std::string ToLowerAscii(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

bool TokensEqualIgnoreCase(std::span<const std::string> a,
                           std::span<const std::string> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const std::string& x, const std::string& y) {
                      return EqualsIgnoreCase(x, y);
                    });
}

bool IsWordToken(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char ch) {
    const auto c = static_cast<unsigned char>(ch);
    return c >= 0x80 || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9');
  });
}

std::optional<Span> TokenSpanForChars(const TokenizedText& text,
                                      CharRange range) {
  const auto& offsets = text.offsets;
  auto first = std::lower_bound(
      offsets.begin(), offsets.end(), range.begin,
      [](const CharRange& r, std::size_t pos) { return r.begin < pos; });
  if (first == offsets.end()) return std::nullopt;
  // A token starting before the range must not straddle into it.
  if (first != offsets.begin() && std::prev(first)->end > range.begin) {
    return std::nullopt;
  }
  auto last = first;
  while (last != offsets.end() && last->end <= range.end) ++last;
  if (last == first) return std::nullopt;
  if (last != offsets.end() && last->begin < range.end) return std::nullopt;
  return Span{static_cast<std::size_t>(first - offsets.begin()),
              static_cast<std::size_t>(last - offsets.begin())};
}

std::vector<std::size_t> FindTokenSequence(std::span<const std::string> haystack,
                                           std::span<const std::string> needle) {
  std::vector<std::size_t> starts;
  if (needle.empty() || needle.size() > haystack.size()) return starts;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    if (TokensEqualIgnoreCase(haystack.subspan(i, needle.size()), needle)) {
      starts.push_back(i);
    }
  }
  return starts;
}

}  // namespace narc
