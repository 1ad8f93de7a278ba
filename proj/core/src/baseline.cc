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

#include "narc/baseline.h"

#include <algorithm>
#include <fstream>

#include "nlohmann/json.hpp"
#include "narc/errors.h"
#include "narc/parallel.h"
#include "narc/tokenizer.h"

namespace narc {

const std::array<std::string_view, 30>& StopWords() {
  static constexpr std::array<std::string_view, 30> kWords = {
      "the", "of",   "and",  "a",    "an",  "to",   "in",  "is",   "was",  "it",
      "that", "for", "on",   "with", "as",  "at",   "by",  "from", "this", "be",
      "are",  "were", "or",  "but",  "not", "he",   "she", "they", "i",    "you",
  };
  return kWords;
}

std::set<std::string> ContentTokenSet(std::string_view text) {
  const auto& stop = StopWords();
  std::set<std::string> out;
  for (const std::string& token : Tokenize(text).tokens) {
    if (!IsWordToken(token)) continue;
    std::string lower = ToLowerAscii(token);
    if (std::find(stop.begin(), stop.end(), lower) != stop.end()) continue;
    out.insert(std::move(lower));
  }
  return out;
}

BowPrediction BowPredict(const Example& example) {
  const std::set<std::string> context =
      ContentTokenSet(example.passage + " " + example.query);
  BowPrediction out;
  out.scores.reserve(example.options.size());
  for (const std::string& option : example.options) {
    const std::set<std::string> tokens = ContentTokenSet(option);
    if (tokens.empty()) {
      out.scores.push_back(0.0);
      continue;
    }
    std::size_t overlap = 0;
    for (const std::string& t : tokens) overlap += context.count(t);
    out.scores.push_back(static_cast<double>(overlap) / static_cast<double>(tokens.size()));
  }
  // max_element keeps the first of equal maxima.
  out.index = static_cast<std::size_t>(
      std::max_element(out.scores.begin(), out.scores.end()) - out.scores.begin());
  return out;
}

BaselineResult RunBowBaseline(const Dataset& dataset) {
  if (dataset.examples.empty()) throw ValidationError("empty dataset");
  std::vector<BowPrediction> raw(dataset.examples.size());
  ParallelFor(raw.size(), [&](std::size_t i) { raw[i] = BowPredict(dataset.examples[i]); });

  BaselineResult result;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Example& ex = dataset.examples[i];
    result.predictions[ex.id] = raw[i].index;
    result.per_example_scores[ex.id] = std::move(raw[i].scores);
    if (raw[i].index == ex.answer_index) ++correct;
  }
  result.accuracy = static_cast<double>(correct) / static_cast<double>(raw.size());
  return result;
}

double Evaluate(const Dataset& dataset, const Predictions& predictions) {
  if (dataset.examples.empty()) throw ValidationError("empty dataset");
  std::size_t correct = 0;
  for (const Example& ex : dataset.examples) {
    auto it = predictions.find(ex.id);
    if (it == predictions.end()) throw ValidationError("no prediction for " + ex.id);
    if (it->second == ex.answer_index) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.examples.size());
}

double RelativeImprovement(double accuracy, std::size_t n_options) {
  if (n_options < 2) throw ValidationError("need at least 2 options");
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
    throw ValidationError("accuracy must lie in [0, 1]");
  }
  const double chance = 1.0 / static_cast<double>(n_options);
  return (accuracy - chance) / chance;
}

Predictions ReadPredictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Predictions out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw ValidationError(where + ": invalid JSON");
    }
    if (j.contains("_meta")) continue;
    if (!j.contains("id") || !j["id"].is_string()) throw ValidationError(where + ": missing field id");
    if (!j.contains("prediction") || !j["prediction"].is_number_unsigned()) {
      throw ValidationError(where + ": missing field prediction");
    }
    if (!out.emplace(j["id"].get<std::string>(), j["prediction"].get<std::size_t>()).second) {
      throw ValidationError(where + ": duplicate id " + j["id"].get<std::string>());
    }
  }
  return out;
}

void WritePredictions(const Predictions& predictions, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& [id, index] : predictions) {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["prediction"] = index;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace narc
