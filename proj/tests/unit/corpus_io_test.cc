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

#include "narc/corpus_io.h"

#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "narc/errors.h"
#include "test_util.h"

namespace narc {
namespace {

using ::narc::testing::DataPath;
using ::narc::testing::MakeExample;
using ::narc::testing::TempDir;
using ::narc::testing::WriteFile;
using ::testing::HasSubstr;

std::string RaceDoc(const std::string& id, const std::string& answers) {
  return R"({"article":"X.","questions":["_ ?"],"options":[["a","b","c","d"]],"answers":[)" +
         answers + R"(],"id":")" + id + R"("})";
}

TEST(RaceLoaderTest, LetterArithmetic) {
  TempDir dir;
  WriteFile(dir / "1.txt", RaceDoc("1.txt", R"("C")"));
  const Dataset d = LoadRaceDir(dir.path());
  ASSERT_EQ(d.examples.size(), 1u);
  EXPECT_EQ(d.examples[0].answer_index, 2u);
  EXPECT_EQ(d.examples[0].id, "1.txt:0");
  EXPECT_EQ(d.examples[0].passage, "X.");
}

TEST(RaceLoaderTest, EmptyDirectory) {
  TempDir dir;
  EXPECT_TRUE(LoadRaceDir(dir.path()).examples.empty());
}

TEST(RaceLoaderTest, LetterOutOfRange) {
  TempDir dir;
  WriteFile(dir / "1.txt", RaceDoc("1.txt", R"("E")"));
  try {
    LoadRaceDir(dir.path());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_THAT(e.what(), HasSubstr("answer letter out of range"));
  }
}

TEST(RaceLoaderTest, MalformedLetter) {
  TempDir dir;
  WriteFile(dir / "1.txt", RaceDoc("1.txt", R"("c")"));
  EXPECT_THROW(LoadRaceDir(dir.path()), ValidationError);
}

TEST(RaceLoaderTest, MissingFieldNamesFileAndField) {
  TempDir dir;
  WriteFile(dir / "broken.txt", R"({"article":"X.","questions":[],"options":[],"id":"b"})");
  try {
    LoadRaceDir(dir.path());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_THAT(e.what(), HasSubstr("broken.txt"));
    EXPECT_THAT(e.what(), HasSubstr("answers"));
  }
}

TEST(RaceLoaderTest, DuplicateId) {
  TempDir dir;
  WriteFile(dir / "1.txt", RaceDoc("same", R"("A")"));
  WriteFile(dir / "2.txt", RaceDoc("same", R"("B")"));
  EXPECT_THROW(LoadRaceDir(dir.path()), ValidationError);
}

TEST(RaceLoaderTest, OrderedByFilenameThenOrdinal) {
  const Dataset& d = testing::SyntheticCorpus();
  ASSERT_EQ(d.examples.size(), 200u);
  EXPECT_EQ(d.examples[0].id, "synth001.txt:0");
  EXPECT_EQ(d.examples[1].id, "synth001.txt:1");
  EXPECT_EQ(d.examples[199].id, "synth100.txt:1");
  EXPECT_EQ(d.source_tag, "race_synthetic");
}

TEST(RaceLoaderTest, MissingDirectoryIsIoError) {
  EXPECT_THROW(LoadRaceDir("/nonexistent/narc"), IoError);
}

Dataset ThreeExamples() {
  Dataset d;
  d.source_tag = "unit";
  d.examples.push_back(MakeExample("a", "P one.", "Q?", {"x", "y"}, 1));
  d.examples.push_back(MakeExample("b", "Ünïcode “quotes”.", "_ here", {"p", "q", "r"}, 0));
  Example c = MakeExample("c", "Sky blue.", "What?", {"blue", "red"}, 0);
  c.provenance = Provenance{};
  c.provenance->transform = TransformId::kP1;
  c.provenance->answer_span = Span{1, 2};
  c.provenance->seed = 42;
  c.provenance->notes = "n";
  d.examples.push_back(c);
  return d;
}

TEST(CanonicalTest, RoundTrip) {
  const Dataset d = ThreeExamples();
  std::stringstream buffer;
  WriteCanonical(d, buffer, OutputMeta{"transform", "P1", 0});
  const Dataset back = ReadCanonical(buffer);
  ASSERT_EQ(back.examples.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.examples[i], d.examples[i]) << i;
  }
}

TEST(CanonicalTest, HeaderFirstAndFieldOrder) {
  std::stringstream buffer;
  WriteCanonical(ThreeExamples(), buffer, OutputMeta{"transform", "P1", 7});
  std::string header, first;
  std::getline(buffer, header);
  std::getline(buffer, first);
  EXPECT_THAT(header, HasSubstr(R"("_meta":{"tool":"narc")"));
  EXPECT_THAT(header, HasSubstr(R"("seed":7)"));
  EXPECT_EQ(first.rfind(R"({"id":"a","passage":"P one.","query":"Q?","options")", 0), 0u);
}

TEST(CanonicalTest, MissingOptionsReportsLine) {
  std::stringstream in(
      R"({"id":"a","passage":"p","query":"q","options":["x","y"],"answer_index":0})"
      "\n"
      R"({"id":"b","passage":"p","query":"q","answer_index":0})"
      "\n");
  try {
    ReadCanonical(in);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "line 2: missing field options");
  }
}

TEST(CanonicalTest, EmptyFileIsEmptyDataset) {
  std::stringstream in("");
  EXPECT_TRUE(ReadCanonical(in).examples.empty());
}

TEST(CanonicalTest, RejectsInvalidExample) {
  std::stringstream in(
      R"({"id":"a","passage":"p","query":"q","options":["x",""],"answer_index":0})"
      "\n");
  EXPECT_THROW(ReadCanonical(in), ValidationError);
  std::stringstream out_of_range(
      R"({"id":"a","passage":"p","query":"q","options":["x","y"],"answer_index":2})"
      "\n");
  EXPECT_THROW(ReadCanonical(out_of_range), ValidationError);
}

TEST(CanonicalTest, LoadDatasetDispatchesOnPathKind) {
  TempDir dir;
  WriteCanonical(ThreeExamples(), dir / "d.jsonl");
  EXPECT_EQ(LoadDataset(dir / "d.jsonl").examples.size(), 3u);
  EXPECT_EQ(LoadDataset(DataPath("race_synthetic")).examples.size(), 200u);
  EXPECT_THROW(LoadDataset(dir / "missing.jsonl"), IoError);
}

}  // namespace
}  // namespace narc
