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

#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "narc/errors.h"

namespace narc {
namespace {

using ::testing::HasSubstr;

std::vector<AttentionRecord> Read(const std::string& text) {
  std::istringstream in(text);
  return ReadAttention(in);
}

TEST(AttentionTest, OutputRecord) {
  const auto r = Read(R"({"id":"e1","layer":"output","passage_len":3,"weights":[0.2,0.5,0.3]})");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].layer, AttentionLayer::kOutput);
  EXPECT_EQ(r[0].cols(), 1u);
  EXPECT_DOUBLE_EQ(r[0].at(1, 0), 0.5);
  EXPECT_TRUE(IsNormalized(r[0], 1e-4));
}

TEST(AttentionTest, LengthMismatchNamesLine) {
  try {
    Read(R"({"id":"e1","layer":"output","passage_len":3,"weights":[0.2,0.5]})");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "line 1: expected 3 weights, got 2");
  }
}

TEST(AttentionTest, QueryAwareIsRowMajor) {
  const auto r = Read(
      R"({"id":"e","layer":"query_aware","passage_len":2,"query_len":2,"weights":[1,2,3,4]})");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_DOUBLE_EQ(r[0].at(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(r[0].at(1, 0), 3.0);
}

TEST(AttentionTest, SelfIsSquare) {
  const auto r = Read(R"({"id":"e","layer":"self","passage_len":2,"weights":[1,0,0,1]})");
  EXPECT_EQ(r[0].cols(), 2u);
  EXPECT_THROW(Read(R"({"id":"e","layer":"self","passage_len":2,"weights":[1,0,0]})"),
               ValidationError);
}

TEST(AttentionTest, UnknownLayer) {
  try {
    Read("\n" R"({"id":"e","layer":"cross","passage_len":1,"weights":[1]})");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_THAT(e.what(), HasSubstr("line 2"));
    EXPECT_THAT(e.what(), HasSubstr("unknown layer"));
  }
}

TEST(AttentionTest, NormalizationTolerance) {
  AttentionRecord r{"e", AttentionLayer::kOutput, 2, 0, {0.5, 0.50005}};
  EXPECT_TRUE(IsNormalized(r, 1e-4));
  EXPECT_FALSE(IsNormalized(r, 1e-5));
  r.weights = {1.2, -0.2};
  EXPECT_FALSE(IsNormalized(r, 1e-4));
}

TEST(AttentionTest, WriteThenRead) {
  const std::vector<AttentionRecord> records = {
      {"a", AttentionLayer::kQueryAware, 2, 1, {0.25, 0.75}},
      {"b", AttentionLayer::kOutput, 1, 0, {1.0}}};
  std::stringstream buffer;
  WriteAttention(records, buffer);
  const auto back = ReadAttention(buffer);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].weights, records[0].weights);
  EXPECT_EQ(back[0].query_len, 1u);
  EXPECT_EQ(back[1].id, "b");
}

}  // namespace
}  // namespace narc
