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

#include "cli.h"

#include <pthread.h>

#include <cmath>
#include <csignal>
#include <fstream>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "narc/annotation.h"
#include "narc/attention.h"
#include "narc/baseline.h"
#include "narc/corpus_io.h"
#include "narc/errors.h"
#include "narc/parse_tree.h"
#include "narc/probe.h"
#include "narc/tokenizer.h"
#include "narc/transforms.h"

namespace narc {

namespace {

std::string ValidOpList() {
  std::string out;
  for (TransformId id : AllTransformIds()) {
    if (!out.empty()) out += ", ";
    out += TransformIdName(id);
  }
  return out;
}

void WriteJsonFile(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void WriteTextFile(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

double Round4(double x) { return std::round(x * 1e4) / 1e4; }

struct TransformArgs {
  std::string op;
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  std::optional<std::size_t> keep;
  std::string parses;
  std::string sidecar;
  bool allow_missing = false;
};

int Transform(const TransformArgs& args, std::ostream& err) {
  const std::optional<TransformId> op = ParseTransformId(args.op);
  if (!op) {
    throw ValidationError("unknown op " + args.op + "; valid ids: " + ValidOpList());
  }
  TransformOptions options;
  options.op = *op;
  options.seed = args.seed;
  options.keep = args.keep;
  options.allow_missing = args.allow_missing;

  const Dataset input = LoadDataset(args.input);
  ParseMap parses;
  if (!args.parses.empty()) {
    parses = ReadParseSidecar(args.parses);
    options.parses = &parses;
  }
  PassageMap sidecar;
  if (!args.sidecar.empty()) {
    sidecar = ReadPassageSidecar(args.sidecar);
    options.sidecar = &sidecar;
  }

  const TransformOutcome outcome = ApplyTransform(input, options);
  for (const std::string& w : outcome.warnings) err << "warning: " << w << '\n';
  if (!outcome.passed_through.empty()) {
    err << outcome.passed_through.size() << " example(s) passed through unchanged\n";
  }
  WriteCanonical(outcome.dataset, std::filesystem::path(args.output),
                 OutputMeta{"transform", std::string(TransformIdName(*op)), args.seed});
  return kExitOk;
}

struct ProbeArgs {
  std::string dataset;
  std::string attention;
  std::string layer;
  std::string report;
  std::string csv;
  std::vector<std::string> metrics;
  double tolerance = 1e-4;
};

int Probe(const ProbeArgs& args, std::ostream& out) {
  const std::optional<AttentionLayer> layer = ParseAttentionLayer(args.layer);
  if (!layer) {
    throw ValidationError("unknown layer " + args.layer +
                          "; valid layers: output, query_aware, self");
  }
  ProbeOptions options;
  options.layer = *layer;
  options.normalization_tolerance = args.tolerance;
  for (const std::string& name : args.metrics) {
    auto m = ParseMetric(name);
    if (!m) throw ValidationError("unknown metric " + name);
    options.metrics.push_back(*m);
  }
  const Dataset dataset = LoadDataset(args.dataset);
  const std::vector<AttentionRecord> records = LoadAttention(args.attention);
  const ProbeReport report = RunProbe(dataset, records, options);
  const nlohmann::ordered_json j = ReportToJson(report);
  WriteJsonFile(j, args.report);
  if (!args.csv.empty()) WriteTextFile(ReportToCsv(report), args.csv);
  out << j["table"].dump() << '\n';
  return kExitOk;
}

struct BaselineArgs {
  std::string dataset;
  std::string predictions;
  std::string write_predictions;
};

int Baseline(const BaselineArgs& args, std::ostream& out) {
  const Dataset dataset = LoadDataset(args.dataset);
  nlohmann::ordered_json j;
  j["source_tag"] = dataset.source_tag;
  j["n_examples"] = dataset.examples.size();
  double accuracy = 0.0;
  if (!args.predictions.empty()) {
    j["scorer"] = "predictions";
    accuracy = Evaluate(dataset, ReadPredictions(args.predictions));
  } else {
    j["scorer"] = "bag_of_words";
    const BaselineResult result = RunBowBaseline(dataset);
    accuracy = result.accuracy;
    if (!args.write_predictions.empty()) {
      WritePredictions(result.predictions, args.write_predictions);
    }
  }
  j["accuracy"] = accuracy;
  // Chance level is only meaningful when every example has the same width.
  const std::size_t width = dataset.examples.empty() ? 0 : dataset.examples[0].options.size();
  bool uniform = width >= 2;
  for (const Example& ex : dataset.examples) uniform = uniform && ex.options.size() == width;
  if (uniform) {
    j["n_options"] = width;
    j["relative_improvement"] = Round4(RelativeImprovement(accuracy, width));
  }
  out << j.dump() << '\n';
  return kExitOk;
}

int Stats(double accuracy, std::size_t n_options, std::ostream& out) {
  nlohmann::ordered_json j;
  j["accuracy"] = accuracy;
  j["n_options"] = n_options;
  j["relative_improvement"] = Round4(RelativeImprovement(accuracy, n_options));
  out << j.dump() << '\n';
  return kExitOk;
}

// One token per line; with offsets, "begin<TAB>end<TAB>token".
int TokenizeText(const std::string& text, bool offsets, std::ostream& out) {
  const TokenizedText t = Tokenize(text);
  for (std::size_t i = 0; i < t.tokens.size(); ++i) {
    if (offsets) out << t.offsets[i].begin << '\t' << t.offsets[i].end << '\t';
    out << t.tokens[i] << '\n';
  }
  return kExitOk;
}

struct ServeArgs {
  std::string dataset;
  std::string task;
  std::string store;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
};

AnnotationKind RequireTask(const std::string& name) {
  auto kind = ParseTaskName(name);
  if (!kind) throw ValidationError("unknown task " + name + "; valid tasks: p5, o3h");
  return *kind;
}

int Serve(const ServeArgs& args, std::ostream& out) {
  const AnnotationKind kind = RequireTask(args.task);
  AnnotationService::Options options;
  if (!args.static_dir.empty()) options.static_dir = args.static_dir;
  AnnotationService service(LoadDataset(args.dataset), kind, args.store, options);

  // SIGINT/SIGTERM are taken by a waiter thread so the server can shut down
  // cleanly; block them before any server thread exists.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = service.Bind(args.host, args.port);
  out << "listening on http://" << args.host << ':' << port << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.Stop();
  });
  service.Run();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  return kExitOk;
}

struct ApplyArgs {
  std::string dataset;
  std::string store;
  std::string kind;
  std::string output;
  bool allow_missing = false;
};

int Apply(const ApplyArgs& args, std::ostream& err) {
  const AnnotationKind kind = RequireTask(args.kind);
  const Dataset dataset = LoadDataset(args.dataset);
  const std::vector<Annotation> annotations = ReadAnnotations(args.store);
  const ApplyOutcome outcome = ApplyAnnotations(dataset, annotations, kind, args.allow_missing);
  if (!outcome.passed_through.empty()) {
    err << outcome.passed_through.size() << " example(s) passed through unchanged\n";
  }
  WriteCanonical(outcome.dataset, std::filesystem::path(args.output),
                 OutputMeta{"apply-annotations",
                            kind == AnnotationKind::kSentenceSelection ? "P5" : "O3(H)",
                            std::nullopt});
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"narc: reading-comprehension dataset variants and attention probes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NARC_VERSION);

  TransformArgs transform;
  CLI::App* t = app.add_subcommand("transform", "Rewrite a dataset with one transform");
  t->add_option("--op", transform.op, "Transform id: " + ValidOpList())->required();
  t->add_option("--input", transform.input, "RACE directory or canonical JSONL")->required();
  t->add_option("--output", transform.output, "Output JSONL")->required();
  t->add_option("--seed", transform.seed, "Seed for O2 and O3");
  t->add_option("--keep", transform.keep, "Options to keep (O3)");
  t->add_option("--parses", transform.parses, "JSONL of {id, parse} bracketed trees");
  t->add_option("--sidecar", transform.sidecar, "JSONL of {id, passage} for P4 and P5");
  t->add_flag("--allow-missing", transform.allow_missing,
              "Pass through examples absent from the sidecar");

  ProbeArgs probe;
  CLI::App* p = app.add_subcommand("probe", "Score exported attention against a dataset");
  p->add_option("--dataset", probe.dataset, "Transformed dataset JSONL")->required();
  p->add_option("--attention", probe.attention, "Attention JSONL")->required();
  p->add_option("--layer", probe.layer, "output, query_aware or self")->required();
  p->add_option("--report", probe.report, "Report JSON path")->required();
  p->add_option("--csv", probe.csv, "Also write per-example values as CSV");
  p->add_option("--metrics", probe.metrics, "Subset of metrics for the layer");
  p->add_option("--tolerance", probe.tolerance, "Normalization tolerance for output vectors");

  BaselineArgs baseline;
  CLI::App* b = app.add_subcommand("baseline", "Bag-of-words baseline accuracy");
  b->add_option("--dataset", baseline.dataset, "Dataset JSONL or RACE directory")->required();
  b->add_option("--predictions", baseline.predictions,
                "Score this JSONL of {id, prediction} instead of the bag-of-words model");
  b->add_option("--write-predictions", baseline.write_predictions,
                "Write the bag-of-words predictions");

  double accuracy = 0.0;
  std::size_t n_options = 0;
  CLI::App* s = app.add_subcommand("stats", "Relative improvement over random guessing");
  s->add_option("--accuracy", accuracy, "Accuracy in [0, 1]")->required();
  s->add_option("--options", n_options, "Options per question")->required();

  std::string text;
  bool offsets = false;
  CLI::App* k = app.add_subcommand("tokenize", "Print the tokens used by every metric");
  k->add_option("--text", text, "Text to tokenize")->required();
  k->add_flag("--offsets", offsets, "Prefix each token with its byte offsets");

  ServeArgs serve;
  CLI::App* v = app.add_subcommand("serve", "Run the annotation service");
  v->add_option("--dataset", serve.dataset, "Dataset to annotate")->required();
  v->add_option("--task", serve.task, "p5 or o3h")->required();
  v->add_option("--store", serve.store, "Append-only annotation JSONL")->required();
  v->add_option("--port", serve.port, "Port; 0 picks a free one");
  v->add_option("--host", serve.host, "Address to bind");
  v->add_option("--static-dir", serve.static_dir, "Directory served at /");

  ApplyArgs apply;
  CLI::App* a = app.add_subcommand("apply-annotations", "Build P5 or O3(H) from annotations");
  a->add_option("--dataset", apply.dataset, "Annotated dataset")->required();
  a->add_option("--store", apply.store, "Annotation JSONL")->required();
  a->add_option("--kind", apply.kind, "p5 or o3h")->required();
  a->add_option("--output", apply.output, "Output JSONL")->required();
  a->add_flag("--allow-missing", apply.allow_missing, "Pass through unannotated examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (t->parsed()) return Transform(transform, err);
    if (p->parsed()) return Probe(probe, out);
    if (b->parsed()) return Baseline(baseline, out);
    if (s->parsed()) return Stats(accuracy, n_options, out);
    if (k->parsed()) return TokenizeText(text, offsets, out);
    if (v->parsed()) return Serve(serve, out);
    if (a->parsed()) return Apply(apply, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace narc
