// Copyright 2026 The primalkit Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "primalkit/core/json_format.h"
#include "primalkit/core/lp_format.h"

#ifndef PRIMALKIT_TEST_DATA_DIR
#error "PRIMALKIT_TEST_DATA_DIR must point at tests/data"
#endif

namespace primalkit {
namespace {

TEST(LpFormatTest, ParsesSmallBinaryModel) {
  const MilpInstance inst = ParseLpFile(
      "Minimize obj: x + 2 y Subject To c1: x + y >= 1 Binaries x y End");
  ASSERT_EQ(inst.num_variables(), 2);
  ASSERT_EQ(inst.num_constraints(), 1);
  EXPECT_EQ(inst.variables[0].name, "x");
  EXPECT_EQ(inst.variables[1].name, "y");
  EXPECT_EQ(inst.variables[0].integrality, Integrality::kBinary);
  EXPECT_DOUBLE_EQ(inst.variables[1].upper, 1.0);
  const LinearConstraint& c = inst.constraints[0];
  EXPECT_EQ(c.name, "c1");
  EXPECT_EQ(c.sense, ConstraintSense::kGreaterEqual);
  EXPECT_DOUBLE_EQ(c.rhs, 1.0);
  EXPECT_EQ(c.terms, (std::vector<Term>{{0, 1.0}, {1, 1.0}}));
  EXPECT_EQ(inst.objective.terms, (std::vector<Term>{{0, 1.0}, {1, 2.0}}));
}

TEST(LpFormatTest, SosSectionBecomesTaggedConstraint) {
  const MilpInstance inst = ParseLpFile(
      "Minimize\n obj: x1 + x2\nSubject To\nSOS\n S1:: x1:1 x2:2\nEnd\n");
  ASSERT_EQ(inst.num_constraints(), 1);
  const LinearConstraint& c = inst.constraints[0];
  ASSERT_TRUE(c.IsSos1());
  EXPECT_EQ(*c.sos1_group, c.name);
  EXPECT_EQ(c.terms, (std::vector<Term>{{0, 1.0}, {1, 2.0}}));
}

TEST(LpFormatTest, SyntaxErrorNamesOffendingToken) {
  try {
    ParseLpFile("Minimize\n obj: x\nSubject To\n c: x + >= 1\nEnd\n");
    FAIL() << "expected a parse error";
  } catch (const LpParseError& e) {
    EXPECT_EQ(e.token(), ">=");
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.column(), 9);
  }
}

TEST(LpFormatTest, RejectsUnknownSectionAndDuplicateBounds) {
  EXPECT_THROW(ParseLpFile("Objective\n x\nEnd\n"), LpParseError);
  EXPECT_THROW(ParseLpFile("Minimize\n obj: x\nSemi-continuous\n x\nEnd\n"),
               LpParseError);
  EXPECT_THROW(ParseLpFile("Minimize\n obj: x\nBounds\n x <= 4\n x <= 5\nEnd\n"),
               LpParseError);
  EXPECT_THROW(ParseLpFile("Minimize\n obj: x\nBounds\n x free\n x >= 1\nEnd\n"),
               LpParseError);
  EXPECT_THROW(ParseLpFile("Minimize\n obj: x\nSOS\n S2:: x:1\nEnd\n"), LpParseError);
  EXPECT_THROW(ParseLpFile("Minimize\n obj: [ x ^ 2 ]\nEnd\n"), LpParseError);
}

TEST(LpFormatTest, UnnamedRowsGetGeneratedNames) {
  const MilpInstance inst =
      ParseLpFile("Minimize\n obj: x\nSubject To\n x >= 1\n named: x <= 3\n x <= 9\nEnd\n");
  ASSERT_EQ(inst.num_constraints(), 3);
  EXPECT_EQ(inst.constraints[0].name, "R1");
  EXPECT_EQ(inst.constraints[1].name, "named");
  EXPECT_EQ(inst.constraints[2].name, "R3");
}

TEST(LpFormatTest, MaximizationIsNegated) {
  const MilpInstance inst =
      ParseLpFile("Maximize\n obj: 3 a - b + 5\nSubject To\n a + b <= 1\nEnd\n");
  EXPECT_TRUE(inst.negated_from_max);
  EXPECT_EQ(inst.objective.terms, (std::vector<Term>{{0, -3.0}, {1, 1.0}}));
  EXPECT_DOUBLE_EQ(inst.objective.offset, -5.0);
}

TEST(LpFormatTest, FreeVariableWritesInfiniteBounds) {
  MilpInstance inst;
  inst.name = "free";
  inst.variables.push_back({"v", -kInfinity, kInfinity});
  const std::string text = WriteLpFile(inst);
  EXPECT_NE(text.find("-inf <= v <= +inf"), std::string::npos) << text;
  const MilpInstance back = ParseLpFile(text);
  EXPECT_TRUE(SemanticallyEqual(inst, back));
}

TEST(LpFormatTest, EmptyConstraintSectionRoundTrips) {
  MilpInstance inst;
  inst.name = "empty";
  inst.variables.push_back({"z", 1.0, 4.0, Integrality::kInteger});
  inst.objective.terms.push_back({0, 1.0});
  const std::string text = WriteLpFile(inst);
  EXPECT_NE(text.find("Subject To\nBounds"), std::string::npos) << text;
  EXPECT_TRUE(SemanticallyEqual(inst, ParseLpFile(text)));
}

TEST(LpFormatTest, WriteThenParseIsIdentityOnTwoVariableModel) {
  const MilpInstance inst = ParseLpFile(
      "Minimize obj: x + 2 y Subject To c1: x + y >= 1 Binaries x y End");
  const MilpInstance back = ParseLpFile(WriteLpFile(inst));
  EXPECT_TRUE(SemanticallyEqual(inst, back));
}

class HandWrittenLpTest : public ::testing::TestWithParam<std::string> {};

TEST_P(HandWrittenLpTest, RoundTripsThroughLpAndJson) {
  const std::string path =
      std::string(PRIMALKIT_TEST_DATA_DIR) + "/lp/" + GetParam();
  const MilpInstance inst = ReadLpFileFromPath(path);
  const MilpInstance via_lp = ParseLpFile(WriteLpFile(inst));
  EXPECT_TRUE(SemanticallyEqual(inst, via_lp)) << WriteLpFile(inst);
  const MilpInstance via_json = ParseInstanceJson(WriteInstanceJson(inst));
  EXPECT_TRUE(SemanticallyEqual(inst, via_json));
  EXPECT_EQ(via_json.negated_from_max, inst.negated_from_max);
}

INSTANTIATE_TEST_SUITE_P(
    DataFiles, HandWrittenLpTest,
    ::testing::Values("01_two_var.lp", "02_sos1.lp", "03_maximize.lp",
                      "04_free_and_fixed.lp", "05_generals.lp",
                      "06_empty_constraints.lp", "07_multiline.lp",
                      "08_sos_with_constraints.lp", "09_scientific.lp",
                      "10_comment_heavy.lp"));

TEST(LpFormatTest, HandWrittenFilesParseAsDocumented) {
  const std::string dir = std::string(PRIMALKIT_TEST_DATA_DIR) + "/lp/";
  const MilpInstance sos = ReadLpFileFromPath(dir + "02_sos1.lp");
  ASSERT_EQ(sos.num_constraints(), 3);
  EXPECT_FALSE(sos.constraints[0].IsSos1());
  EXPECT_EQ(*sos.constraints[1].sos1_group, "sos1");
  EXPECT_EQ(*sos.constraints[2].sos1_group, "pair");

  const MilpInstance fixed = ReadLpFileFromPath(dir + "04_free_and_fixed.lp");
  EXPECT_EQ(fixed.variables[0].lower, -kInfinity);
  EXPECT_EQ(fixed.variables[0].upper, kInfinity);
  EXPECT_EQ(fixed.variables[1].lower, -kInfinity);
  EXPECT_DOUBLE_EQ(fixed.variables[1].upper, 10.0);
  EXPECT_DOUBLE_EQ(fixed.variables[2].lower, 3.0);
  EXPECT_DOUBLE_EQ(fixed.variables[2].upper, 3.0);
  EXPECT_EQ(fixed.constraints[0].name, "R1");

  const MilpInstance named = ReadLpFileFromPath(dir + "05_generals.lp");
  EXPECT_EQ(named.name, "generals_demo");
  EXPECT_EQ(named.variables[0].integrality, Integrality::kInteger);

  const MilpInstance multi = ReadLpFileFromPath(dir + "07_multiline.lp");
  EXPECT_DOUBLE_EQ(multi.objective.offset, 12.0);
  EXPECT_EQ(multi.constraints[0].terms.size(), 4u);
  EXPECT_EQ(multi.constraints[1].sense, ConstraintSense::kLessEqual);
  EXPECT_EQ(multi.constraints[2].sense, ConstraintSense::kGreaterEqual);

  const MilpInstance comments = ReadLpFileFromPath(dir + "10_comment_heavy.lp");
  EXPECT_EQ(comments.num_constraints(), 4);
  EXPECT_EQ(comments.name, "10_comment_heavy");
}

TEST(JsonFormatTest, RejectsSchemaViolations) {
  EXPECT_THROW(ParseInstanceJson("{}"), StructuralError);
  EXPECT_THROW(ParseInstanceJson(R"({"objective":{"terms":[]},"variables":[],
      "constraints":[{"name":"c","terms":[[0,1.0]]}]})"),
               StructuralError);
  EXPECT_THROW(ParseInstanceJson(R"({"objective":{"terms":[]},
      "variables":[{"name":"x","lower":0,"upper":1,"type":"weird"}],"constraints":[]})"),
               StructuralError);
}

}  // namespace
}  // namespace primalkit
