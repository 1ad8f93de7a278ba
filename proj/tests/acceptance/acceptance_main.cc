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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.h"
#include "httplib.h"
#include "invariants.h"
#include "narc/annotation.h"
#include "narc/baseline.h"
#include "narc/corpus_io.h"
#include "narc/declarative.h"
#include "narc/probe.h"
#include "narc/sentences.h"
#include "narc/tokenizer.h"
#include "narc/transforms.h"
#include "oracle.h"
#include "test_util.h"

namespace narc {
namespace {

using ::narc::testing::DataPath;
using ::narc::testing::ReadFile;
using ::narc::testing::TempDir;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and thresholds.
constexpr double kTransformBudgetSeconds = 5.0;
constexpr double kProbeBudgetSeconds = 10.0;
constexpr int kProbeRecordsPerMetric = 500;
constexpr std::size_t kMaxPassageLen = 30;
constexpr double kOracleTolerance = 1e-12;
constexpr double kP8MarginPoints = 30.0;
constexpr double kP6MarginPoints = 20.0;

struct ImprovementCase {
  double accuracy;
  std::size_t options;
  double percent;
  double tolerance;
};
constexpr ImprovementCase kImprovementCases[] = {
    {0.6621, 2, 32.4, 0.5},
    {0.4408, 4, 76.3, 0.5},
    {0.5203, 3, 56.1, 1.7},
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fixed(double x, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << x;
  return out.str();
}

Outcome TransformSuite() {
  const Dataset& corpus = testing::SyntheticCorpus();
  const testing::CorpusInputs inputs = testing::LoadCorpusInputs(corpus);
  const auto start = Clock::now();
  std::vector<std::string> bad;
  for (TransformId op : AllTransformIds()) {
    const TransformOutcome out =
        ApplyTransform(corpus, testing::CorpusTransformOptions(inputs, op));
    for (std::string& v : testing::CheckTransformInvariants(corpus, out, op, inputs.parses)) {
      bad.push_back(std::move(v));
    }
  }
  const double elapsed = Seconds(start);
  std::string detail = std::to_string(AllTransformIds().size()) + " ids x " +
                       std::to_string(corpus.examples.size()) + " examples, " +
                       std::to_string(bad.size()) + " violations, " + Fixed(elapsed, 2) + " s";
  if (!bad.empty()) detail += "; first: " + bad.front();
  return {bad.empty() && corpus.examples.size() == 200 && elapsed < kTransformBudgetSeconds,
          detail};
}

int RunBinary(const std::vector<std::string>& args) {
  std::string command = "\"" NARC_BINARY "\"";
  for (const std::string& a : args) command += " '" + a + "'";
  command += " 2>/dev/null";
  return std::system(command.c_str());
}

Outcome Determinism() {
  TempDir dir;
  const std::string input = DataPath("race_synthetic").string();
  struct Run {
    std::vector<std::string> args;
    std::string snapshot;
  };
  const Run runs[] = {
      {{"transform", "--op", "O2", "--seed", "42", "--input", input}, "o2_seed42.jsonl"},
      {{"transform", "--op", "O3", "--seed", "7", "--keep", "3", "--input", input},
       "o3_seed7_keep3.jsonl"},
  };
  std::string detail;
  bool pass = true;
  for (const Run& run : runs) {
    std::string first, second;
    for (int i = 0; i < 2; ++i) {
      std::vector<std::string> args = run.args;
      const auto out = dir / (std::to_string(i) + run.snapshot);
      args.insert(args.end(), {"--output", out.string()});
      if (RunBinary(args) != 0) {
        return {false, "narc transform failed for " + run.snapshot};
      }
      (i == 0 ? first : second) = ReadFile(out);
    }
    const std::string snapshot = ReadFile(DataPath("snapshots/" + run.snapshot));
    const bool same = !first.empty() && first == second;
    const bool matches = first == snapshot;
    pass = pass && same && matches;
    detail += run.snapshot + (same ? " repeatable" : " differs between runs") +
              (matches ? ", matches snapshot; " : ", snapshot mismatch; ");
  }
  return {pass, detail};
}

class RecordMaker {
 public:
  std::size_t Uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }
  // Every third call uses coarse weights so ties show up.
  std::vector<double> Weights(std::size_t n) {
    const bool coarse = (calls_++ % 3) == 0;
    std::vector<double> w(n);
    for (double& x : w) {
      x = coarse ? static_cast<double>(Uniform(0, 3)) * 0.1
                 : std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
    }
    return w;
  }
  Span RandomSpan(std::size_t p) {
    const std::size_t len = Uniform(1, p);
    const std::size_t start = Uniform(0, p - len);
    return {start, start + len};
  }

 private:
  std::mt19937_64 gen_{20261016};
  int calls_ = 0;
};

Outcome ProbeOracle() {
  RecordMaker make;
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t mismatches = 0;
  auto compare = [&](double got, double want) {
    const double d = std::abs(got - want);
    worst = std::max(worst, d);
    if (!(d <= kOracleTolerance)) ++mismatches;
  };

  for (int metric = 0; metric < 6; ++metric) {
    for (int i = 0; i < kProbeRecordsPerMetric; ++i) {
      AttentionRecord r;
      r.id = "r";
      const std::size_t p = make.Uniform(metric == 5 ? 2 : 1, kMaxPassageLen);
      r.passage_len = p;
      switch (metric) {
        case 0:    // < UAA
        case 1: {  // < UAQ
          r.layer = AttentionLayer::kOutput;
          r.weights = make.Weights(p);
          double sum = 0.0;
          for (double x : r.weights) sum += x;
          if (sum == 0.0) r.weights.assign(p, 1.0);
          sum = sum == 0.0 ? static_cast<double>(p) : sum;
          for (double& x : r.weights) x /= sum;
          const Span s = make.RandomSpan(p);
          compare(UniformMassTest(r, s).below_uniform ? 1.0 : 0.0,
                  oracle::BelowUniform(r.weights, s.start, s.size()) ? 1.0 : 0.0);
          break;
        }
        case 2: {  // MRR, output layer
          r.layer = AttentionLayer::kOutput;
          r.weights = make.Weights(p);
          const Span s = make.RandomSpan(p);
          const std::vector<std::size_t> extra = {make.Uniform(0, p - s.size())};
          compare(OutputNgramReciprocalRank(r, s, extra),
                  oracle::OutputMrr(r.weights, s.size(), {s.start, extra[0]}));
          break;
        }
        case 3:    // MRR(Q)
        case 4: {  // MRR(A)
          r.layer = AttentionLayer::kQueryAware;
          r.query_len = make.Uniform(1, 12);
          r.weights = make.Weights(p * r.query_len);
          const Span s = make.RandomSpan(p);
          compare(AffinityNgramReciprocalRank(r, s),
                  oracle::AffinityMrr({p, r.query_len, r.weights}, s.size(), {s.start}));
          break;
        }
        default: {  // MRR of the last sentence, self-matching layer
          r.layer = AttentionLayer::kSelf;
          r.weights = make.Weights(p * p);
          const std::size_t n = make.Uniform(1, p - 1);
          const std::size_t k = make.Uniform(1, p - n);
          const std::size_t last = make.Uniform(n, p - k);
          compare(SelfMatchReciprocalRank(r, n, {last, last + k}),
                  oracle::SelfMrr({p, p, r.weights}, n, last, k));
          break;
        }
      }
    }
  }
  const double elapsed = Seconds(start);
  std::ostringstream worst_text;
  worst_text << worst;
  return {mismatches == 0 && elapsed < kProbeBudgetSeconds,
          std::to_string(6 * kProbeRecordsPerMetric) + " records, " +
              std::to_string(mismatches) + " mismatches, max |d| " + worst_text.str() + ", " +
              Fixed(elapsed, 2) + " s"};
}

std::vector<AttentionRecord> UniformOutput(const Dataset& d) {
  std::vector<AttentionRecord> records;
  for (const Example& ex : d.examples) {
    AttentionRecord r;
    r.id = ex.id;
    r.layer = AttentionLayer::kOutput;
    r.passage_len = Tokenize(ex.passage).size();
    r.weights.assign(r.passage_len, 1.0 / static_cast<double>(r.passage_len));
    records.push_back(std::move(r));
  }
  return records;
}

Outcome UniformEdgeCase() {
  std::string detail;
  bool pass = true;
  for (TransformId op : {TransformId::kP2, TransformId::kP6, TransformId::kP9}) {
    TransformOptions options;
    options.op = op;
    const Dataset d = ApplyTransform(testing::SyntheticCorpus(), options).dataset;
    const ProbeReport report = RunProbe(d, UniformOutput(d), {});
    const MetricSummary* uaa = report.Find(Metric::kBelowUniformAnswer);
    const MetricSummary* uaq = report.Find(Metric::kBelowUniformQuery);
    const bool ok = uaa && uaq && uaa->aggregate == 0.0 && uaq->aggregate == 0.0 &&
                    uaa->included == d.examples.size() && uaq->included == d.examples.size();
    pass = pass && ok;
    detail += std::string(TransformIdName(op)) + ": < UAA " +
              (uaa && uaa->aggregate ? Fixed(*uaa->aggregate, 1) : "n/a") + "%, < UAQ " +
              (uaq && uaq->aggregate ? Fixed(*uaq->aggregate, 1) : "n/a") + "%; ";
  }
  return {pass, detail};
}

Outcome Improvement() {
  std::string detail;
  bool pass = true;
  for (const ImprovementCase& c : kImprovementCases) {
    const double got = 100.0 * RelativeImprovement(c.accuracy, c.options);
    const double independent = 100.0 * oracle::RelativeImprovement(c.accuracy, static_cast<int>(c.options));
    const bool ok = std::abs(got - c.percent) <= c.tolerance && std::abs(got - independent) < 1e-9;
    pass = pass && ok;
    detail += "(" + Fixed(c.accuracy, 4) + ", " + std::to_string(c.options) + ") -> " +
              Fixed(got, 2) + "%; ";
  }
  return {pass, detail};
}

Outcome DeclarativeGolden() {
  const Dataset d = LoadDataset(DataPath("golden/bridge_case.jsonl"));
  const ParseMap parses = ReadParseSidecar(DataPath("golden/bridge_case_parse.jsonl"));
  std::string want = ReadFile(DataPath("golden/bridge_case_expected.txt"));
  while (!want.empty() && (want.back() == '\n' || want.back() == '\r')) want.pop_back();
  const Example& ex = d.examples.at(0);
  const DeclarativeResult got = ToDeclarative(ex.query, ex.answer(), &parses.at(ex.id));
  TransformOptions options;
  options.op = TransformId::kP7;
  options.parses = &parses;
  const std::string passage = ApplyTransform(d, options).dataset.examples.at(0).passage;
  return {got.sentence == want && passage == want, "\"" + got.sentence + "\""};
}

Outcome BaselineDirection() {
  const Dataset& corpus = testing::SyntheticCorpus();
  auto accuracy_after = [&](TransformId op) {
    TransformOptions options;
    options.op = op;
    return RunBowBaseline(ApplyTransform(corpus, options).dataset).accuracy;
  };
  const double original = RunBowBaseline(corpus).accuracy;
  const double p8 = accuracy_after(TransformId::kP8);
  const double p6 = accuracy_after(TransformId::kP6);
  const double p8_margin = 100.0 * (p8 - original);
  const double p6_margin = 100.0 * (p6 - original);
  return {p8_margin >= kP8MarginPoints && p6_margin >= kP6MarginPoints,
          "original " + Fixed(100 * original, 1) + "%, P8 " + Fixed(100 * p8, 1) + "% (+" +
              Fixed(p8_margin, 1) + "), P6 " + Fixed(100 * p6, 1) + "% (+" +
              Fixed(p6_margin, 1) + ")"};
}

Outcome SelfMatchingPlumbing() {
  TransformOptions options;
  options.op = TransformId::kP9;
  const Dataset& corpus = testing::SyntheticCorpus();
  const Dataset d = ApplyTransform(corpus, options).dataset;
  std::size_t misplaced = 0;
  std::vector<AttentionRecord> records;
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    const Example& ex = d.examples[i];
    const TokenizedText tokens = Tokenize(ex.passage);
    const std::vector<Span> sentences = SentenceTokenSpans(ex.passage, tokens);
    const Span first = sentences.front();
    const Span last = sentences.back();
    const auto& q = ex.provenance->query_span;
    const auto& a = ex.provenance->answer_span;
    // The hint sentences must come back as the first and last sentence.
    auto text_of = [&](Span s) {
      const std::size_t b = tokens.offsets[s.start].begin;
      return ex.passage.substr(b, tokens.offsets[s.end - 1].end - b);
    };
    const Example& in = corpus.examples[i];
    const std::string opening = "The answer to " + in.query + " is at the end of the passage.";
    const std::string closing = "The answer to " + in.query + " is " + in.answer() + ".";
    if (sentences.size() < 2 || !q || !a || !last.Contains(*q) || !last.Contains(*a) ||
        text_of(first) != opening || text_of(last) != closing) {
      ++misplaced;
    }
    const std::size_t p = tokens.size();
    AttentionRecord r;
    r.id = ex.id;
    r.layer = AttentionLayer::kSelf;
    r.passage_len = p;
    r.weights.assign(p * p, 0.001);
    for (std::size_t row = first.start; row < first.end; ++row) {
      for (std::size_t col = last.start; col < last.end; ++col) r.weights[row * p + col] = 1.0;
    }
    records.push_back(std::move(r));
  }
  ProbeOptions probe;
  probe.layer = AttentionLayer::kSelf;
  const ProbeReport report = RunProbe(d, records, probe);
  const MetricSummary* s = report.Find(Metric::kSelfLastSentenceMrr);
  const bool mrr_ok = s && s->included == d.examples.size() && s->aggregate == 1.0;
  return {misplaced == 0 && mrr_ok,
          std::to_string(misplaced) + " misplaced spans, mrr_self_last_sentence " +
              (s && s->aggregate ? Fixed(*s->aggregate, 4) : "n/a") + " over " +
              (s ? std::to_string(s->included) : "0") + " examples"};
}

int Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "narc");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
}

// Posts one annotation per example through HTTP and returns the number of
// 201 responses.
int Annotate(const Dataset& d, AnnotationKind kind, const std::filesystem::path& store,
             const std::function<nlohmann::json(const Example&)>& payload) {
  AnnotationService service(d, kind, store);
  const int port = service.Bind("127.0.0.1", 0);
  std::thread server([&] { service.Run(); });
  service.WaitUntilReady();
  httplib::Client client("127.0.0.1", port);
  int created = 0;
  while (true) {
    auto next = client.Get("/api/next?annotator=script");
    if (!next || next->status != 200) break;
    const std::string id = nlohmann::json::parse(next->body)["id"];
    const Example* ex = nullptr;
    for (const Example& e : d.examples) {
      if (e.id == id) ex = &e;
    }
    nlohmann::json body = {{"example_id", id},
                           {"annotator", "script"},
                           {"kind", AnnotationKindName(kind)},
                           {"payload", payload(*ex)}};
    auto res = client.Post("/api/annotation", body.dump(), "application/json");
    if (!res || res->status != 201) break;
    ++created;
  }
  service.Stop();
  server.join();
  return created;
}

Outcome AnnotationRoundTrip() {
  TempDir dir;
  Dataset d;
  const Dataset& corpus = testing::SyntheticCorpus();
  d.examples.assign(corpus.examples.begin(), corpus.examples.begin() + 5);
  WriteCanonical(d, dir / "five.jsonl");

  auto selection = [](const Example& ex) {
    const std::size_t n = SentenceTexts(ex.passage).size();
    return nlohmann::json::array({0, n - 1});
  };
  auto confusing = [](const Example& ex) {
    return nlohmann::json((ex.answer_index + 1) % ex.options.size());
  };
  const int p5_posts = Annotate(d, AnnotationKind::kSentenceSelection, dir / "p5.jsonl", selection);
  const int o3_posts = Annotate(d, AnnotationKind::kConfusingOption, dir / "o3.jsonl", confusing);
  if (p5_posts != 5 || o3_posts != 5) {
    return {false, "accepted " + std::to_string(p5_posts) + " + " + std::to_string(o3_posts) +
                       " of 10 annotations"};
  }
  const std::string five = (dir / "five.jsonl").string();
  if (Cli({"apply-annotations", "--dataset", five, "--store", (dir / "p5.jsonl").string(),
           "--kind", "p5", "--output", (dir / "p5_out.jsonl").string()}) != 0 ||
      Cli({"apply-annotations", "--dataset", five, "--store", (dir / "o3.jsonl").string(),
           "--kind", "o3h", "--output", (dir / "o3_out.jsonl").string()}) != 0) {
    return {false, "apply-annotations failed"};
  }
  const Dataset p5 = ReadCanonical(dir / "p5_out.jsonl");
  const Dataset o3 = ReadCanonical(dir / "o3_out.jsonl");
  std::size_t good = 0;
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    const Example& ex = d.examples[i];
    const std::vector<std::string> s = SentenceTexts(ex.passage);
    const std::size_t dropped = (ex.answer_index + 1) % ex.options.size();
    const std::size_t remapped = ex.answer_index - (dropped < ex.answer_index ? 1 : 0);
    if (p5.examples[i].passage == s.front() + " " + s.back() &&
        o3.examples[i].answer_index == remapped && o3.examples[i].answer() == ex.answer() &&
        o3.examples[i].options.size() == ex.options.size() - 1) {
      ++good;
    }
  }
  return {good == d.examples.size(),
          std::to_string(good) + "/5 examples round-tripped through HTTP and apply-annotations"};
}

}  // namespace
}  // namespace narc

int main() {
  setenv("NARC_THREADS", "1", 1);
  struct Criterion {
    const char* tag;
    const char* name;
    narc::Outcome (*check)();
  };
  const Criterion criteria[] = {
      {"PRIMARY", "transform invariants, all ids, 200 examples, < 5 s", narc::TransformSuite},
      {"PRIMARY", "O2/O3 determinism and snapshots", narc::Determinism},
      {"PRIMARY", "probe equals brute-force oracle, 500 records per metric, < 10 s",
       narc::ProbeOracle},
      {"PRIMARY", "uniform output attention gives 0% below uniform", narc::UniformEdgeCase},
      {"PRIMARY", "relative improvement arithmetic", narc::Improvement},
      {"PRIMARY", "declarative golden sentence", narc::DeclarativeGolden},
      {"PRIMARY", "bag-of-words gains on P8 (>= 30 pts) and P6 (>= 20 pts)",
       narc::BaselineDirection},
      {"PRIMARY", "P9 sentence boundaries and self-matching MRR = 1.0",
       narc::SelfMatchingPlumbing},
      {"SECONDARY", "annotation round trip over HTTP", narc::AnnotationRoundTrip},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    narc::Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << c.tag << "] " << c.name << " -- "
              << outcome.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
