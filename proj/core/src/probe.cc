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

#include "narc/probe.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "narc/errors.h"
#include "narc/parallel.h"
#include "narc/sentences.h"
#include "narc/tokenizer.h"

namespace narc {

bool StrictlyGreater(double a, double b) {
  return a - b > kTieRelativeTolerance * std::max(std::abs(a), std::abs(b));
}

namespace {

void CheckSpan(const AttentionRecord& record, Span span) {
  if (span.size() == 0 || span.start > span.end || span.end > record.passage_len) {
    throw ValidationError("span [" + std::to_string(span.start) + ", " +
                          std::to_string(span.end) + ") outside passage of " +
                          std::to_string(record.passage_len) + " tokens");
  }
}

void CheckLayer(const AttentionRecord& record, AttentionLayer want) {
  if (record.layer != want) {
    throw ValidationError("record " + record.id + " is a " +
                          std::string(AttentionLayerName(record.layer)) + " record, expected " +
                          std::string(AttentionLayerName(want)));
  }
  ValidateAttentionRecord(record);
}

// Competition rank of the best-placed target start: one plus the number of
// candidates scoring strictly higher.
double BestReciprocalRank(const std::vector<double>& scores, std::size_t first_candidate,
                          const std::vector<std::size_t>& targets) {
  std::size_t best = scores.size() + 1;
  for (std::size_t t : targets) {
    std::size_t rank = 1;
    for (std::size_t j = first_candidate; j < scores.size(); ++j) {
      if (StrictlyGreater(scores[j], scores[t])) ++rank;
    }
    best = std::min(best, rank);
  }
  return 1.0 / static_cast<double>(best);
}

std::vector<std::size_t> Targets(Span target, std::span<const std::size_t> occurrences,
                                 std::size_t passage_len) {
  std::vector<std::size_t> out = {target.start};
  for (std::size_t s : occurrences) {
    if (s + target.size() > passage_len) {
      throw ValidationError("occurrence at " + std::to_string(s) + " runs past the passage");
    }
    out.push_back(s);
  }
  return out;
}

// Frobenius norm of rows [r0, r1) and columns [c0, c1).
double Frobenius(const AttentionRecord& m, std::size_t r0, std::size_t r1, std::size_t c0,
                 std::size_t c1) {
  double sum = 0.0;
  for (std::size_t r = r0; r < r1; ++r) {
    for (std::size_t c = c0; c < c1; ++c) sum += m.at(r, c) * m.at(r, c);
  }
  return std::sqrt(sum);
}

}  // namespace

UniformMassResult UniformMassTest(const AttentionRecord& record, Span span) {
  CheckLayer(record, AttentionLayer::kOutput);
  CheckSpan(record, span);
  UniformMassResult out;
  for (std::size_t i = span.start; i < span.end; ++i) out.mass += record.weights[i];
  const double uniform =
      static_cast<double>(span.size()) / static_cast<double>(record.passage_len);
  out.below_uniform = StrictlyGreater(uniform, out.mass);
  return out;
}

double OutputNgramReciprocalRank(const AttentionRecord& record, Span target,
                                 std::span<const std::size_t> occurrences) {
  CheckLayer(record, AttentionLayer::kOutput);
  CheckSpan(record, target);
  const std::size_t n = target.size();
  std::vector<double> scores(record.passage_len - n + 1);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double sum = 0.0;
    for (std::size_t k = i; k < i + n; ++k) sum += record.weights[k];
    scores[i] = sum;
  }
  return BestReciprocalRank(scores, 0, Targets(target, occurrences, record.passage_len));
}

double AffinityNgramReciprocalRank(const AttentionRecord& record, Span target,
                                   std::span<const std::size_t> occurrences) {
  CheckLayer(record, AttentionLayer::kQueryAware);
  CheckSpan(record, target);
  const std::size_t w = target.size();
  std::vector<double> scores(record.passage_len - w + 1);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = Frobenius(record, i, i + w, 0, record.cols());
  }
  return BestReciprocalRank(scores, 0, Targets(target, occurrences, record.passage_len));
}

double SelfMatchReciprocalRank(const AttentionRecord& record, std::size_t first_sentence_len,
                               Span last_sentence) {
  CheckLayer(record, AttentionLayer::kSelf);
  CheckSpan(record, last_sentence);
  const std::size_t p = record.passage_len;
  const std::size_t n = first_sentence_len;
  const std::size_t k = last_sentence.size();
  if (n == 0) throw ValidationError("first sentence is empty");
  if (n > p || k > p - n) throw ValidationError("no candidate window");
  if (last_sentence.start < n) {
    throw ValidationError("last sentence starts inside the first sentence");
  }
  std::vector<double> scores(p - k + 1);
  for (std::size_t i = n; i < scores.size(); ++i) scores[i] = Frobenius(record, 0, n, i, i + k);
  return BestReciprocalRank(scores, n, {last_sentence.start});
}

std::string_view MetricName(Metric metric) {
  switch (metric) {
    case Metric::kBelowUniformAnswer: return "below_uniform_answer_fraction";
    case Metric::kBelowUniformQuery: return "below_uniform_query_fraction";
    case Metric::kOutputAnswerMrr: return "mrr_output_answer";
    case Metric::kAffinityQueryMrr: return "mrr_affinity_query";
    case Metric::kAffinityAnswerMrr: return "mrr_affinity_answer";
    case Metric::kSelfLastSentenceMrr: return "mrr_self_last_sentence";
  }
  return "?";
}

namespace {

constexpr Metric kAllMetrics[] = {
    Metric::kBelowUniformAnswer, Metric::kBelowUniformQuery,   Metric::kOutputAnswerMrr,
    Metric::kAffinityQueryMrr,   Metric::kAffinityAnswerMrr, Metric::kSelfLastSentenceMrr,
};

// Column heading used in the table block.
std::string_view TableColumn(Metric metric) {
  switch (metric) {
    case Metric::kBelowUniformAnswer: return "< UAA";
    case Metric::kBelowUniformQuery: return "< UAQ";
    case Metric::kOutputAnswerMrr: return "MRR";
    case Metric::kAffinityQueryMrr: return "MRR(Q)";
    case Metric::kAffinityAnswerMrr: return "MRR(A)";
    case Metric::kSelfLastSentenceMrr: return "MRR";
  }
  return "?";
}

AttentionLayer LayerOf(Metric metric) {
  switch (metric) {
    case Metric::kBelowUniformAnswer:
    case Metric::kBelowUniformQuery:
    case Metric::kOutputAnswerMrr:
      return AttentionLayer::kOutput;
    case Metric::kAffinityQueryMrr:
    case Metric::kAffinityAnswerMrr:
      return AttentionLayer::kQueryAware;
    case Metric::kSelfLastSentenceMrr:
      return AttentionLayer::kSelf;
  }
  return AttentionLayer::kOutput;
}

bool IsPercentage(Metric metric) {
  return metric == Metric::kBelowUniformAnswer || metric == Metric::kBelowUniformQuery;
}

struct Undefined {
  std::string reason;
};

// Occurrences of the tokens under `span` elsewhere in the passage.
std::vector<std::size_t> Occurrences(const std::vector<std::string>& tokens, Span span) {
  std::span<const std::string> all(tokens);
  return FindTokenSequence(all, all.subspan(span.start, span.size()));
}

}  // namespace

std::optional<Metric> ParseMetric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (MetricName(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<Metric> MetricsForLayer(AttentionLayer layer) {
  std::vector<Metric> out;
  for (Metric m : kAllMetrics) {
    if (LayerOf(m) == layer) out.push_back(m);
  }
  return out;
}

std::size_t MetricSummary::excluded_total() const {
  std::size_t total = 0;
  for (const auto& [reason, count] : excluded) total += count;
  return total;
}

const MetricSummary* ProbeReport::Find(Metric metric) const {
  for (const MetricSummary& s : summaries) {
    if (s.metric == metric) return &s;
  }
  return nullptr;
}

namespace {

std::vector<MetricEntry> ProbeExample(const Example& ex, const AttentionRecord* record,
                                      const std::vector<Metric>& metrics,
                                      const ProbeOptions& options) {
  std::vector<MetricEntry> out;
  auto undefined = [&](Metric m, std::string reason) {
    out.push_back(MetricEntry{ex.id, m, std::nullopt, std::move(reason)});
  };
  auto value = [&](Metric m, double v) { out.push_back(MetricEntry{ex.id, m, v, {}}); };

  if (record == nullptr) {
    for (Metric m : metrics) undefined(m, "no_attention_record");
    return out;
  }
  const TokenizedText tokens = Tokenize(ex.passage);
  if (record->passage_len != tokens.tokens.size()) {
    for (Metric m : metrics) undefined(m, "length_mismatch");
    return out;
  }
  if (record->layer == AttentionLayer::kQueryAware &&
      record->query_len != Tokenize(ex.query).tokens.size()) {
    for (Metric m : metrics) undefined(m, "query_length_mismatch");
    return out;
  }
  const std::optional<Span> answer_span =
      ex.provenance ? ex.provenance->answer_span : std::nullopt;
  const std::optional<Span> query_span =
      ex.provenance ? ex.provenance->query_span : std::nullopt;
  auto in_range = [&](const std::optional<Span>& s) {
    return s && s->size() > 0 && s->end <= tokens.tokens.size();
  };
  const bool normalized = IsNormalized(*record, options.normalization_tolerance);

  for (Metric m : metrics) {
    switch (m) {
      case Metric::kBelowUniformAnswer:
      case Metric::kBelowUniformQuery: {
        const bool answer = m == Metric::kBelowUniformAnswer;
        const std::optional<Span>& span = answer ? answer_span : query_span;
        if (!span) {
          undefined(m, answer ? "missing_answer_span" : "missing_query_span");
        } else if (!in_range(span)) {
          undefined(m, "span_out_of_range");
        } else if (!normalized) {
          undefined(m, "unnormalized");
        } else {
          value(m, UniformMassTest(*record, *span).below_uniform ? 1.0 : 0.0);
        }
        break;
      }
      case Metric::kOutputAnswerMrr:
      case Metric::kAffinityAnswerMrr:
      case Metric::kAffinityQueryMrr: {
        const bool query = m == Metric::kAffinityQueryMrr;
        const std::optional<Span>& span = query ? query_span : answer_span;
        if (!span) {
          undefined(m, query ? "missing_query_span" : "missing_answer_span");
        } else if (!in_range(span)) {
          undefined(m, "span_out_of_range");
        } else {
          const std::vector<std::size_t> occ = Occurrences(tokens.tokens, *span);
          value(m, m == Metric::kOutputAnswerMrr
                       ? OutputNgramReciprocalRank(*record, *span, occ)
                       : AffinityNgramReciprocalRank(*record, *span, occ));
        }
        break;
      }
      case Metric::kSelfLastSentenceMrr: {
        if (!ex.provenance || ex.provenance->transform != TransformId::kP9) {
          undefined(m, "not_p9");
          break;
        }
        const std::vector<Span> sentences = SentenceTokenSpans(ex.passage, tokens);
        if (sentences.size() < 2) {
          undefined(m, "single_sentence");
          break;
        }
        const std::size_t n = sentences.front().size();
        const Span last = sentences.back();
        if (n == 0 || last.size() > tokens.tokens.size() - n || last.start < n) {
          undefined(m, "no_candidate_window");
          break;
        }
        value(m, SelfMatchReciprocalRank(*record, n, last));
        break;
      }
    }
  }
  return out;
}

}  // namespace

ProbeReport RunProbe(const Dataset& dataset, std::span<const AttentionRecord> records,
                     const ProbeOptions& options) {
  std::vector<Metric> metrics =
      options.metrics.empty() ? MetricsForLayer(options.layer) : options.metrics;
  for (Metric m : metrics) {
    if (LayerOf(m) != options.layer) {
      throw ValidationError(std::string(MetricName(m)) + " is not computed on the " +
                            std::string(AttentionLayerName(options.layer)) + " layer");
    }
  }

  std::map<std::string_view, const Example*, std::less<>> by_id;
  for (const Example& ex : dataset.examples) by_id.emplace(ex.id, &ex);
  std::map<std::string_view, const AttentionRecord*, std::less<>> record_for;
  for (const AttentionRecord& r : records) {
    if (r.layer != options.layer) continue;
    if (!by_id.contains(r.id)) {
      throw ValidationError("attention record for unknown example " + r.id);
    }
    if (!record_for.emplace(r.id, &r).second) {
      throw ValidationError("duplicate attention record for " + r.id);
    }
  }

  // Work in id order so the report does not depend on input order.
  std::vector<const Example*> ordered;
  ordered.reserve(by_id.size());
  for (const auto& [id, ex] : by_id) ordered.push_back(ex);

  std::vector<std::vector<MetricEntry>> per_example(ordered.size());
  ParallelFor(ordered.size(), [&](std::size_t i) {
    auto it = record_for.find(ordered[i]->id);
    per_example[i] = ProbeExample(*ordered[i],
                                  it == record_for.end() ? nullptr : it->second,
                                  metrics, options);
  });

  ProbeReport report;
  report.layer = options.layer;
  report.total = ordered.size();
  std::vector<double> sums(metrics.size(), 0.0);
  for (Metric m : metrics) report.summaries.push_back(MetricSummary{m, 0, {}, std::nullopt});
  for (auto& entries : per_example) {
    for (std::size_t k = 0; k < entries.size(); ++k) {
      MetricSummary& s = report.summaries[k];
      if (entries[k].value) {
        ++s.included;
        sums[k] += *entries[k].value;
      } else {
        ++s.excluded[entries[k].undefined_reason];
      }
      report.entries.push_back(std::move(entries[k]));
    }
  }
  bool any = false;
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    MetricSummary& s = report.summaries[k];
    if (s.included == 0) continue;
    any = true;
    const double mean = sums[k] / static_cast<double>(s.included);
    s.aggregate = IsPercentage(s.metric) ? 100.0 * mean : mean;
  }
  if (!any) throw ValidationError("no usable examples for any metric");
  return report;
}

nlohmann::ordered_json ReportToJson(const ProbeReport& report) {
  nlohmann::ordered_json j;
  j["layer"] = AttentionLayerName(report.layer);
  j["total"] = report.total;
  nlohmann::ordered_json table = nlohmann::ordered_json::object();
  nlohmann::ordered_json aggregates = nlohmann::ordered_json::object();
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const MetricSummary& s : report.summaries) {
    const std::string name(MetricName(s.metric));
    nlohmann::ordered_json agg = nullptr;
    if (s.aggregate) agg = *s.aggregate;
    table[std::string(TableColumn(s.metric))] = agg;
    aggregates[name] = agg;
    nlohmann::ordered_json m;
    m["included"] = s.included;
    m["excluded"] = s.excluded_total();
    m["excluded_by_reason"] = nlohmann::ordered_json::object();
    for (const auto& [reason, count] : s.excluded) m["excluded_by_reason"][reason] = count;
    metrics[name] = std::move(m);
  }
  j["table"] = std::move(table);
  j["aggregates"] = std::move(aggregates);
  j["metrics"] = std::move(metrics);
  nlohmann::ordered_json examples = nlohmann::ordered_json::array();
  for (const MetricEntry& e : report.entries) {
    nlohmann::ordered_json row;
    row["id"] = e.id;
    row["metric"] = MetricName(e.metric);
    if (e.value) {
      row["value"] = *e.value;
    } else {
      row["value"] = "undefined(" + e.undefined_reason + ")";
    }
    examples.push_back(std::move(row));
  }
  j["examples"] = std::move(examples);
  return j;
}

std::string ReportToCsv(const ProbeReport& report) {
  std::ostringstream out;
  out << "id,metric,value\n";
  out << std::setprecision(17);
  for (const MetricEntry& e : report.entries) {
    std::string id = e.id;
    if (id.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : id) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      id = quoted + "\"";
    }
    out << id << ',' << MetricName(e.metric) << ',';
    if (e.value) {
      out << *e.value;
    } else {
      out << "undefined(" << e.undefined_reason << ")";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace narc
