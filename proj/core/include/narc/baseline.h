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

#ifndef NARC_BASELINE_H_
#define NARC_BASELINE_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "narc/example.h"

namespace narc {

using Predictions = std::map<std::string, std::size_t, std::less<>>;

// The 30 function words excluded from bag-of-words token sets.
const std::array<std::string_view, 30>& StopWords();

// Lower-cased word tokens of `text` minus the stop words. Pure punctuation
// tokens are not words and are dropped too.
std::set<std::string> ContentTokenSet(std::string_view text);

struct BowPrediction {
  std::size_t index = 0;
  std::vector<double> scores;
};

// Scores each option by the fraction of its content tokens found in the
// passage or the query, and picks the best; ties go to the lowest index.
BowPrediction BowPredict(const Example& example);

struct BaselineResult {
  Predictions predictions;
  double accuracy = 0.0;
  std::map<std::string, std::vector<double>, std::less<>> per_example_scores;
};

BaselineResult RunBowBaseline(const Dataset& dataset);

// Fraction of examples whose prediction equals answer_index. Throws
// ValidationError for an empty dataset or a missing prediction.
double Evaluate(const Dataset& dataset, const Predictions& predictions);

// (accuracy - 1/n) / (1/n): improvement over random guessing among n options.
double RelativeImprovement(double accuracy, std::size_t n_options);

// Predictions JSONL: {"id": ..., "prediction": ...} per line.
Predictions ReadPredictions(const std::filesystem::path& path);
void WritePredictions(const Predictions& predictions,
                      const std::filesystem::path& path);

}  // namespace narc

#endif  // NARC_BASELINE_H_
