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

#ifndef NARC_SENTENCES_H_
#define NARC_SENTENCES_H_

#include <string>
#include <string_view>
#include <vector>

#include "narc/example.h"
#include "narc/tokenizer.h"

namespace narc {

// Splits text into sentences. A sentence ends at '.', '!' or '?' when that
// character is followed by end of text, or by whitespace and then an
// uppercase ASCII letter or an opening quote (" ' ` U+201C U+2018). There is
// no abbreviation list: "Mr. Smith came." is two sentences.
//
// The returned byte ranges are ordered, disjoint, trimmed of surrounding
// whitespace, and together cover every non-whitespace byte. Text without a
// terminator is a single sentence; empty or all-space text has none.
std::vector<CharRange> SplitSentences(std::string_view text);

// Convenience: the sentence substrings themselves.
std::vector<std::string> SentenceTexts(std::string_view text);

// Token span of each sentence, given the text's tokenization.
std::vector<Span> SentenceTokenSpans(std::string_view text,
                                     const TokenizedText& tokens);

}  // namespace narc

#endif  // NARC_SENTENCES_H_
