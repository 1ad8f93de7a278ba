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

#ifndef NARC_PROBE_H_
#define NARC_PROBE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"
#include "narc/attention.h"
#include "narc/example.h"

namespace narc {

// Scores closer than this (relative) are ties, both for ranking and for the
// uniform-mass comparison. It absorbs summation-order rounding so that, for
// example, an exactly uniform vector is never flagged.
inline constexpr double kTieRelativeTolerance = 1e-12;

// a > b beyond kTieRelativeTolerance.
bool StrictlyGreater(double a, double b);

struct UniformMassResult {
  double mass = 0.0;
  bool below_uniform = false;
};

// Attention mass on `span` compared with the uniform share
// span.size() / passage_len. Equality is not flagged.
UniformMassResult UniformMassTest(const AttentionRecord& record, Span span);

// Reciprocal rank of the n-gram at `target` among all passage n-grams of the
// same length, scored by summed attention weight. Competition ranking: rank
// is 1 + the number of n-grams scoring strictly higher. `occurrences` lists
// the starts of every position holding the same tokens (including
// target.start); the best-ranked one counts. Empty means just target.
double OutputNgramReciprocalRank(const AttentionRecord& record, Span target,
                                 std::span<const std::size_t> occurrences = {});

// Same ranking over windows of target.size() passage rows of the query-aware
// affinity matrix, scored by the Frobenius norm of rows [i, i + w) across all
// query columns.
double AffinityNgramReciprocalRank(const AttentionRecord& record, Span target,
                                   std::span<const std::size_t> occurrences = {});

// Self-matching: windows of K = last_sentence.size() columns starting at
// i in [first_sentence_len, passage_len - K] are scored by the Frobenius norm
// of rows [0, N) x columns [i, i + K); returns the reciprocal rank of the
// last sentence's window. Throws ValidationError "no candidate window" when
// K > passage_len - N.
double SelfMatchReciprocalRank(const AttentionRecord& record,
                               std::size_t first_sentence_len,
                               Span last_sentence);

enum class Metric {
  kBelowUniformAnswer,   // < UAA
  kBelowUniformQuery,    // < UAQ
  kOutputAnswerMrr,      // MRR of the answer n-gram, output layer
  kAffinityQueryMrr,     // MRR(Q), query-aware layer
  kAffinityAnswerMrr,    // MRR(A), query-aware layer
  kSelfLastSentenceMrr,  // MRR of the last sentence, self-matching layer
};

std::string_view MetricName(Metric metric);
std::optional<Metric> ParseMetric(std::string_view name);
// The metrics a layer supports, in report order.
std::vector<Metric> MetricsForLayer(AttentionLayer layer);

struct ProbeOptions {
  AttentionLayer layer = AttentionLayer::kOutput;
  std::vector<Metric> metrics;  // empty: MetricsForLayer(layer)
  double normalization_tolerance = 1e-4;
};

struct MetricEntry {
  std::string id;
  Metric metric = Metric::kBelowUniformAnswer;
  std::optional<double> value;   // 1/0 for below-uniform flags
  std::string undefined_reason;  // set when value is empty
};

struct MetricSummary {
  Metric metric = Metric::kBelowUniformAnswer;
  std::size_t included = 0;
  std::map<std::string, std::size_t> excluded;  // reason -> count
  // Percentage of flagged examples for the uniform tests, mean reciprocal
  // rank otherwise; empty when nothing was included.
  std::optional<double> aggregate;

  std::size_t excluded_total() const;
};

struct ProbeReport {
  AttentionLayer layer = AttentionLayer::kOutput;
  std::size_t total = 0;
  std::vector<MetricEntry> entries;  // ordered by id, then metric
  std::vector<MetricSummary> summaries;

  const MetricSummary* Find(Metric metric) const;
};

// Computes the requested metrics for every example of `dataset`, reading
// spans from the examples' provenance. Examples without the spans or a usable
// attention record are excluded and counted by reason. Throws
// ValidationError when the records name an unknown id or when no example is
// usable for any metric.
ProbeReport RunProbe(const Dataset& dataset,
                     std::span<const AttentionRecord> records,
                     const ProbeOptions& options);

// JSON report; its "table" block uses the column names "< UAA", "< UAQ",
// "MRR", "MRR(Q)" and "MRR(A)".
nlohmann::ordered_json ReportToJson(const ProbeReport& report);
// One row per entry: id,metric,value.
std::string ReportToCsv(const ProbeReport& report);

}  // namespace narc

#endif  // NARC_PROBE_H_
