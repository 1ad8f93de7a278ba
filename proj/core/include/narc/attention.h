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

#ifndef NARC_ATTENTION_H_
#define NARC_ATTENTION_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace narc {

enum class AttentionLayer {
  kOutput,      // one weight per passage token
  kQueryAware,  // passage_len x query_len affinity matrix
  kSelf,        // passage_len x passage_len self-affinity matrix
};

std::string_view AttentionLayerName(AttentionLayer layer);
std::optional<AttentionLayer> ParseAttentionLayer(std::string_view name);

// Attention exported by an external model for one example. Matrices are
// stored row-major with one row per passage token.
struct AttentionRecord {
  std::string id;
  AttentionLayer layer = AttentionLayer::kOutput;
  std::size_t passage_len = 0;
  std::size_t query_len = 0;  // kQueryAware only
  std::vector<double> weights;

  std::size_t rows() const { return passage_len; }
  std::size_t cols() const;
  double at(std::size_t row, std::size_t col) const {
    return weights[row * cols() + col];
  }
};

// Throws ValidationError when the payload does not match the declared
// dimensions or holds a non-finite value.
void ValidateAttentionRecord(const AttentionRecord& record);

// Output-layer vectors must be non-negative and sum to 1 within `tolerance`.
bool IsNormalized(const AttentionRecord& record, double tolerance);

// JSONL, one record per line:
//   {"id": "e1", "layer": "output", "passage_len": 3, "weights": [...]}
//   {"id": "e1", "layer": "query_aware", "passage_len": 2, "query_len": 2,
//    "weights": [row-major]}
// Errors carry the line number: "line 1: expected 3 weights, got 2".
std::vector<AttentionRecord> ReadAttention(std::istream& in);
std::vector<AttentionRecord> LoadAttention(const std::filesystem::path& path);
void WriteAttention(const std::vector<AttentionRecord>& records, std::ostream& out);

}  // namespace narc

#endif  // NARC_ATTENTION_H_
