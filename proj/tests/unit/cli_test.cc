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

#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "narc/annotation.h"
#include "narc/attention.h"
#include "narc/corpus_io.h"
#include "narc/tokenizer.h"
#include "test_util.h"

namespace narc {
namespace {

using ::narc::testing::DataPath;
using ::narc::testing::ReadFile;
using ::narc::testing::TempDir;
using ::narc::testing::WriteFile;
using ::testing::HasSubstr;
using ::testing::StartsWith;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult Narc(std::vector<std::string> args) {
  args.insert(args.begin(), "narc");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Race() { return DataPath("race_synthetic").string(); }

TEST(CliTest, TokenizeOneTokenPerLine) {
  const CliResult r = Narc({"tokenize", "--text", "Tom's dog, Rex."});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "Tom\n's\ndog\n,\nRex\n.\n");
}

TEST(CliTest, TokenizeOffsets) {
  const CliResult r = Narc({"tokenize", "--text", "a  bc", "--offsets"});
  EXPECT_EQ(r.out, "0\t1\ta\n3\t5\tbc\n");
}

TEST(CliTest, UnknownOpListsValidIds) {
  TempDir dir;
  const CliResult r =
      Narc({"transform", "--op", "P10", "--input", Race(), "--output", (dir / "o.jsonl").string()});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_THAT(r.err, HasSubstr("unknown op P10"));
  EXPECT_THAT(r.err, HasSubstr("P1, P2, P3"));
  EXPECT_THAT(r.err, HasSubstr("O3"));
  EXPECT_FALSE(std::filesystem::exists(dir / "o.jsonl"));
}

TEST(CliTest, MissingInputIsIoError) {
  TempDir dir;
  const CliResult r = Narc({"transform", "--op", "P1", "--input", (dir / "nope").string(),
                           "--output", (dir / "o.jsonl").string()});
  EXPECT_EQ(r.code, kExitIo);
}

TEST(CliTest, BadArgumentsAreValidationErrors) {
  EXPECT_EQ(Narc({}).code, kExitValidation);
  EXPECT_EQ(Narc({"transform", "--op", "P1"}).code, kExitValidation);
  EXPECT_EQ(Narc({"stats", "--accuracy", "1.5", "--options", "4"}).code, kExitValidation);
  EXPECT_EQ(Narc({"stats", "--accuracy", "0.5", "--options", "1"}).code, kExitValidation);
}

TEST(CliTest, VersionExitsZero) {
  const CliResult r = Narc({"--version"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_FALSE(r.out.empty());
}

TEST(CliTest, StatsPrintsRoundedImprovement) {
  const CliResult r = Narc({"stats", "--accuracy", "0.3311", "--options", "4"});
  ASSERT_EQ(r.code, kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["relative_improvement"].get<double>(), 0.3244);
}

TEST(CliTest, TransformIsByteDeterministicAcrossThreadCounts) {
  TempDir dir;
  for (const char* op : {"O2", "O3"}) {
    std::vector<std::string> base = {"transform", "--op", op, "--input", Race(), "--seed", "42",
                                     "--keep", "3"};
    auto first = base, second = base;
    first.insert(first.end(), {"--output", (dir / "a.jsonl").string()});
    second.insert(second.end(), {"--output", (dir / "b.jsonl").string()});
    ASSERT_EQ(Narc(first).code, kExitOk);
    setenv("NARC_THREADS", "1", 1);
    ASSERT_EQ(Narc(second).code, kExitOk);
    setenv("NARC_THREADS", "2", 1);
    EXPECT_EQ(ReadFile(dir / "a.jsonl"), ReadFile(dir / "b.jsonl")) << op;
  }
}

TEST(CliTest, MetaHeaderRecordsOpAndSeed) {
  TempDir dir;
  ASSERT_EQ(Narc({"transform", "--op", "O2", "--input", Race(), "--seed", "9", "--output",
                 (dir / "o.jsonl").string()})
                .code,
            kExitOk);
  std::istringstream in(ReadFile(dir / "o.jsonl"));
  std::string first;
  std::getline(in, first);
  const auto meta = nlohmann::json::parse(first);
  EXPECT_TRUE(IsMetaLine(meta));
  EXPECT_THAT(first, HasSubstr("\"O2\""));
  EXPECT_THAT(first, HasSubstr("9"));
  EXPECT_THAT(first, ::testing::Not(HasSubstr(dir.path().string())));
  const Dataset d = ReadCanonical(dir / "o.jsonl");
  EXPECT_EQ(d.examples.size(), 200u);
  EXPECT_EQ(d.source_tag, "O2");
}

TEST(CliTest, BaselineOnOriginalAndP8) {
  TempDir dir;
  const CliResult original = Narc({"baseline", "--dataset", Race()});
  ASSERT_EQ(original.code, kExitOk) << original.err;
  ASSERT_EQ(Narc({"transform", "--op", "P8", "--input", Race(), "--output",
                 (dir / "p8.jsonl").string()})
                .code,
            kExitOk);
  const CliResult p8 = Narc({"baseline", "--dataset", (dir / "p8.jsonl").string(),
                            "--write-predictions", (dir / "pred.jsonl").string()});
  ASSERT_EQ(p8.code, kExitOk);
  const auto a = nlohmann::json::parse(original.out);
  const auto b = nlohmann::json::parse(p8.out);
  EXPECT_EQ(a["scorer"], "bag_of_words");
  EXPECT_EQ(b["n_options"], 4);
  EXPECT_GE(b["accuracy"].get<double>() - a["accuracy"].get<double>(), 0.30);

  // Scoring the written predictions reproduces the accuracy.
  const CliResult rescored = Narc({"baseline", "--dataset", (dir / "p8.jsonl").string(),
                                  "--predictions", (dir / "pred.jsonl").string()});
  ASSERT_EQ(rescored.code, kExitOk);
  const auto c = nlohmann::json::parse(rescored.out);
  EXPECT_EQ(c["scorer"], "predictions");
  EXPECT_EQ(c["accuracy"], b["accuracy"]);
}

TEST(CliTest, P3WithoutParsesStillRuns) {
  TempDir dir;
  const CliResult r = Narc({"transform", "--op", "P3", "--input", Race(), "--parses",
                           DataPath("parses_synthetic.jsonl").string(), "--output",
                           (dir / "p3.jsonl").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(ReadCanonical(dir / "p3.jsonl").examples.size(), 200u);
}

TEST(CliTest, SidecarRequiredForP4) {
  TempDir dir;
  const CliResult r = Narc({"transform", "--op", "P4", "--input", Race(), "--output",
                           (dir / "p4.jsonl").string()});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_THAT(r.err, HasSubstr("sidecar"));
}

TEST(CliTest, ProbeWritesReportAndCsv) {
  TempDir dir;
  ASSERT_EQ(Narc({"transform", "--op", "P1", "--input", Race(), "--output",
                 (dir / "p1.jsonl").string()})
                .code,
            kExitOk);
  const Dataset d = ReadCanonical(dir / "p1.jsonl");
  std::vector<AttentionRecord> records;
  for (const Example& ex : d.examples) {
    const std::size_t n = Tokenize(ex.passage).size();
    AttentionRecord r;
    r.id = ex.id;
    r.layer = AttentionLayer::kOutput;
    r.passage_len = n;
    r.weights.assign(n, 1.0 / static_cast<double>(n));
    records.push_back(r);
  }
  {
    std::ofstream out(dir / "att.jsonl");
    WriteAttention(records, out);
  }
  const CliResult r = Narc({"probe", "--dataset", (dir / "p1.jsonl").string(), "--attention",
                           (dir / "att.jsonl").string(), "--layer", "output", "--report",
                           (dir / "report.json").string(), "--csv", (dir / "v.csv").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto table = nlohmann::json::parse(r.out);
  EXPECT_EQ(table["< UAA"].get<double>(), 0.0);
  const auto report = nlohmann::json::parse(ReadFile(dir / "report.json"));
  EXPECT_EQ(report["total"], 200);
  EXPECT_THAT(ReadFile(dir / "v.csv"), StartsWith("id,metric,value\n"));

  EXPECT_EQ(Narc({"probe", "--dataset", (dir / "p1.jsonl").string(), "--attention",
                 (dir / "att.jsonl").string(), "--layer", "diagonal", "--report",
                 (dir / "r2.json").string()})
                .code,
            kExitValidation);
}

TEST(CliTest, ApplyAnnotationsWritesO3H) {
  TempDir dir;
  const Dataset race = testing::SyntheticCorpus();
  {
    AnnotationStore store(dir / "store.jsonl");
    for (const Example& ex : race.examples) {
      Annotation a;
      a.example_id = ex.id;
      a.annotator = "ann";
      a.kind = AnnotationKind::kConfusingOption;
      a.option = (ex.answer_index + 1) % ex.options.size();
      store.Append(a);
    }
  }
  const CliResult r = Narc({"apply-annotations", "--dataset", Race(), "--store",
                           (dir / "store.jsonl").string(), "--kind", "o3h", "--output",
                           (dir / "o3h.jsonl").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Dataset out = ReadCanonical(dir / "o3h.jsonl");
  ASSERT_EQ(out.examples.size(), race.examples.size());
  for (std::size_t i = 0; i < out.examples.size(); ++i) {
    EXPECT_EQ(out.examples[i].options.size(), 3u);
    EXPECT_EQ(out.examples[i].answer(), race.examples[i].answer());
  }
  EXPECT_EQ(Narc({"apply-annotations", "--dataset", Race(), "--store",
                 (dir / "store.jsonl").string(), "--kind", "x", "--output",
                 (dir / "z.jsonl").string()})
                .code,
            kExitValidation);
}

}  // namespace
}  // namespace narc
