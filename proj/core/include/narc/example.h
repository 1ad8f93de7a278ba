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

#ifndef NARC_EXAMPLE_H_
#define NARC_EXAMPLE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace narc {

// Half-open token range [start, end) into a tokenized text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool Contains(const Span& other) const {
    return start <= other.start && other.end <= end;
  }
  bool operator==(const Span&) const = default;
};

// The fourteen non-adversarial constructions. O3(H) is recorded as kO3 with a
// note, since it is the random option drop with a human-chosen first victim.
enum class TransformId {
  kP1, kP2, kP3, kP4, kP5, kP6, kP7, kP8, kP9,
  kQ1, kQ2,
  kO1, kO2, kO3,
};

std::string_view TransformIdName(TransformId id);
std::optional<TransformId> ParseTransformId(std::string_view name);
const std::vector<TransformId>& AllTransformIds();

// Where a transformed example came from and which passage tokens hold the
// inserted answer and query. Spans are recorded when the text is inserted so
// that probes never have to search for them.
struct Provenance {
  TransformId transform = TransformId::kP1;
  std::optional<Span> answer_span;
  std::optional<Span> query_span;
  std::optional<std::uint64_t> seed;
  std::string notes;

  bool operator==(const Provenance&) const = default;
};

// One multiple-choice reading comprehension item.
struct Example {
  std::string id;
  std::string passage;
  std::string query;
  std::vector<std::string> options;
  std::size_t answer_index = 0;
  std::optional<Provenance> provenance;

  const std::string& answer() const { return options.at(answer_index); }
  bool operator==(const Example&) const = default;
};

struct Dataset {
  std::vector<Example> examples;
  std::string source_tag;

  bool operator==(const Dataset&) const = default;
};

// Throws ValidationError when an invariant of Example does not hold: empty id,
// fewer than two options, an empty option, answer_index out of range, or a
// provenance span that does not fit the passage's token count.
void ValidateExample(const Example& example);

// ValidateExample on every item plus id uniqueness.
void ValidateDataset(const Dataset& dataset);

}  // namespace narc

#endif  // NARC_EXAMPLE_H_
