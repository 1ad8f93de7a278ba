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

#include "narc/attention.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "nlohmann/json.hpp"
#include "narc/errors.h"

namespace narc {

std::string_view AttentionLayerName(AttentionLayer layer) {
  switch (layer) {
    case AttentionLayer::kOutput: return "output";
    case AttentionLayer::kQueryAware: return "query_aware";
    case AttentionLayer::kSelf: return "self";
  }
  return "?";
}

std::optional<AttentionLayer> ParseAttentionLayer(std::string_view name) {
  for (AttentionLayer l :
       {AttentionLayer::kOutput, AttentionLayer::kQueryAware, AttentionLayer::kSelf}) {
    if (AttentionLayerName(l) == name) return l;
  }
  return std::nullopt;
}

std::size_t AttentionRecord::cols() const {
  switch (layer) {
    case AttentionLayer::kOutput: return 1;
    case AttentionLayer::kQueryAware: return query_len;
    case AttentionLayer::kSelf: return passage_len;
  }
  return 1;
}

void ValidateAttentionRecord(const AttentionRecord& record) {
  if (record.passage_len == 0) throw ValidationError("passage_len must be positive");
  if (record.layer == AttentionLayer::kQueryAware && record.query_len == 0) {
    throw ValidationError("query_len must be positive");
  }
  const std::size_t expected = record.rows() * record.cols();
  if (record.weights.size() != expected) {
    throw ValidationError("expected " + std::to_string(expected) + " weights, got " +
                          std::to_string(record.weights.size()));
  }
  for (double w : record.weights) {
    if (!std::isfinite(w)) throw ValidationError("non-finite weight");
  }
}

bool IsNormalized(const AttentionRecord& record, double tolerance) {
  if (record.layer != AttentionLayer::kOutput) return false;
  double sum = 0.0;
  for (double w : record.weights) {
    if (w < 0.0) return false;
    sum += w;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

namespace {

AttentionRecord RecordFromJson(const nlohmann::json& j) {
  auto require = [&](const char* field) -> const nlohmann::json& {
    if (!j.contains(field)) throw ValidationError(std::string("missing field ") + field);
    return j[field];
  };
  AttentionRecord r;
  const nlohmann::json& id = require("id");
  if (!id.is_string()) throw ValidationError("id must be a string");
  r.id = id.get<std::string>();

  const nlohmann::json& layer = require("layer");
  if (!layer.is_string()) throw ValidationError("layer must be a string");
  auto parsed = ParseAttentionLayer(layer.get<std::string>());
  if (!parsed) throw ValidationError("unknown layer " + layer.get<std::string>());
  r.layer = *parsed;

  const nlohmann::json& plen = require("passage_len");
  if (!plen.is_number_unsigned()) throw ValidationError("passage_len must be a non-negative integer");
  r.passage_len = plen.get<std::size_t>();
  if (r.layer == AttentionLayer::kQueryAware) {
    const nlohmann::json& qlen = require("query_len");
    if (!qlen.is_number_unsigned()) throw ValidationError("query_len must be a non-negative integer");
    r.query_len = qlen.get<std::size_t>();
  }

  const nlohmann::json& weights = require("weights");
  if (!weights.is_array()) throw ValidationError("weights must be an array");
  r.weights.reserve(weights.size());
  for (const nlohmann::json& w : weights) {
    if (!w.is_number()) throw ValidationError("weights must be numbers");
    r.weights.push_back(w.get<double>());
  }
  ValidateAttentionRecord(r);
  return r;
}

}  // namespace

std::vector<AttentionRecord> ReadAttention(std::istream& in) {
  std::vector<AttentionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw ValidationError(where + "invalid JSON");
    }
    try {
      out.push_back(RecordFromJson(j));
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return out;
}

std::vector<AttentionRecord> LoadAttention(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return ReadAttention(in);
}

void WriteAttention(const std::vector<AttentionRecord>& records, std::ostream& out) {
  for (const AttentionRecord& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["layer"] = AttentionLayerName(r.layer);
    j["passage_len"] = r.passage_len;
    if (r.layer == AttentionLayer::kQueryAware) j["query_len"] = r.query_len;
    j["weights"] = r.weights;
    out << j.dump() << '\n';
  }
}

}  // namespace narc
