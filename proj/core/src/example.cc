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

#include "narc/example.h"

#include <array>
#include <set>
#include <string>

#include "narc/errors.h"
#include "narc/tokenizer.h"

namespace narc {

namespace {

constexpr std::array<std::string_view, 14> kTransformNames = {
    "P1", "P2", "P3", "P4", "P5", "P6", "P7",
    "P8", "P9", "Q1", "Q2", "O1", "O2", "O3"};

void CheckSpan(const Example& example, const Span& span, std::string_view name,
               std::size_t token_count) {
  if (span.start >= span.end || span.end > token_count) {
    throw ValidationError("example " + example.id + ": " + std::string(name) +
                          " [" + std::to_string(span.start) + ", " +
                          std::to_string(span.end) +
                          ") does not fit a passage of " +
                          std::to_string(token_count) + " tokens");
  }
}

}  // namespace

std::string_view TransformIdName(TransformId id) {
  return kTransformNames[static_cast<std::size_t>(id)];
}

std::optional<TransformId> ParseTransformId(std::string_view name) {
  for (std::size_t i = 0; i < kTransformNames.size(); ++i) {
    if (kTransformNames[i] == name) return static_cast<TransformId>(i);
  }
  return std::nullopt;
}

const std::vector<TransformId>& AllTransformIds() {
  static const std::vector<TransformId> ids = [] {
    std::vector<TransformId> v;
    for (std::size_t i = 0; i < kTransformNames.size(); ++i) {
      v.push_back(static_cast<TransformId>(i));
    }
    return v;
  }();
  return ids;
}

void ValidateExample(const Example& example) {
  if (example.id.empty()) throw ValidationError("example id is empty");
  if (example.options.size() < 2) {
    throw ValidationError("example " + example.id +
                          ": needs at least 2 options, has " +
                          std::to_string(example.options.size()));
  }
  for (std::size_t i = 0; i < example.options.size(); ++i) {
    if (example.options[i].empty()) {
      throw ValidationError("example " + example.id + ": option " +
                            std::to_string(i) + " is empty");
    }
  }
  if (example.answer_index >= example.options.size()) {
    throw ValidationError("example " + example.id + ": answer_index " +
                          std::to_string(example.answer_index) +
                          " out of range for " +
                          std::to_string(example.options.size()) + " options");
  }
  if (example.provenance &&
      (example.provenance->answer_span || example.provenance->query_span)) {
    const std::size_t count = Tokenize(example.passage).size();
    if (example.provenance->answer_span) {
      CheckSpan(example, *example.provenance->answer_span, "answer_span", count);
    }
    if (example.provenance->query_span) {
      CheckSpan(example, *example.provenance->query_span, "query_span", count);
    }
  }
}

void ValidateDataset(const Dataset& dataset) {
  std::set<std::string_view> seen;
  for (const Example& example : dataset.examples) {
    ValidateExample(example);
    if (!seen.insert(example.id).second) {
      throw ValidationError("duplicate example id " + example.id);
    }
  }
}

}  // namespace narc
