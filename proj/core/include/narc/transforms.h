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

#ifndef NARC_TRANSFORMS_H_
#define NARC_TRANSFORMS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "narc/example.h"
#include "narc/parse_tree.h"
#include "narc/rng.h"

namespace narc {

// Segments joined by the transforms are separated by exactly one space.
// Empty segments are skipped rather than producing a doubled space.

enum class AppendMode {
  kAnswer,       // P1
  kQueryAnswer,  // P2
  kDeclarative,  // P3
};

// P1-P3: appends the answer, the query and answer, or their declarative
// sentence to the passage. Records answer_span, plus query_span for P2 (the
// query tokens) and P3 (the whole declarative sentence).
Example AppendToPassage(const Example& example, AppendMode mode,
                        const ParseTree* parse = nullptr);

enum class ReplaceMode {
  kQueryAnswer,  // P6
  kDeclarative,  // P7
  kAnswerOnly,   // P8
};

// P6-P8: the passage becomes the query and answer, their declarative
// sentence, or the answer alone. The first 80 bytes of the old passage are
// kept in the provenance notes.
Example ReplacePassage(const Example& example, ReplaceMode mode,
                       const ParseTree* parse = nullptr);

// P9: "The answer to Q is at the end of the passage." + passage +
// "The answer to Q is A." with the query inserted verbatim.
Example HintSandwich(const Example& example);

enum class QueryHintMode {
  kAnswer,     // Q1
  kNotAnswer,  // Q2
};

Example QueryHint(const Example& example, QueryHintMode mode);

// O1: every option becomes the declarative sentence of (query, option).
Example OptionsDeclarative(const Example& example,
                           const ParseTree* parse = nullptr);

// O2: incorrect options are replaced by options drawn uniformly from every
// other example's options. Draws equal (ignoring case) to the kept correct
// option or to an earlier replacement are rejected. Throws ValidationError
// for a one-example dataset or when an example's pool runs dry.
Dataset OptionsForeign(const Dataset& dataset, const SeededRng& rng);

// Removes the options at `drop` (incorrect ones only) and remaps
// answer_index. Throws ValidationError on a bad index.
Example RemoveOptions(const Example& example, std::span<const std::size_t> drop);

// O3 / O3(H): drops randomly chosen incorrect options until `keep` remain,
// removing `forced_drop` first when given. `stream` is the example's own
// stream (SeededRng::ForExample).
Example DropOptions(const Example& example, std::size_t keep, SeededRng& stream,
                    std::optional<std::size_t> forced_drop = std::nullopt);

using PassageMap = std::map<std::string, std::string, std::less<>>;

// Sidecar JSONL with fields id and passage.
PassageMap ReadPassageSidecar(const std::filesystem::path& path);

struct SidecarOutcome {
  Dataset dataset;
  std::vector<std::string> passed_through;  // ids left unchanged
  std::vector<std::string> warnings;
};

// P4 / P5: passages are replaced by externally produced text. For P5 each
// sidecar passage is checked to be a subsequence of the original sentences;
// a violation is a warning. Missing ids are an error unless allow_missing.
SidecarOutcome SidecarPassage(const Dataset& dataset, const PassageMap& sidecar,
                              TransformId transform, bool allow_missing);

// True when every sentence of `candidate` appears, in order, among the
// sentences of `original` (whitespace-normalized comparison).
bool IsSentenceSubsequence(std::string_view candidate, std::string_view original);

struct TransformOptions {
  TransformId op = TransformId::kP1;
  std::uint64_t seed = 0;
  std::optional<std::size_t> keep;   // O3
  const ParseMap* parses = nullptr;  // P3, P7, O1
  const PassageMap* sidecar = nullptr;  // P4, P5
  bool allow_missing = false;
};

struct TransformOutcome {
  Dataset dataset;
  std::vector<std::string> passed_through;
  std::vector<std::string> warnings;
};

// Applies one transform to every example, in parallel where the transform is
// per-example. The output has the same size and order as the input and its
// source_tag is the transform id.
TransformOutcome ApplyTransform(const Dataset& dataset,
                                const TransformOptions& options);

}  // namespace narc

#endif  // NARC_TRANSFORMS_H_
