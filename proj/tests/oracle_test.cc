// Copyright 2026 The pimodel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pimodel/oracle.hpp"

#include <gtest/gtest.h>

#include "pimodel/shapes.hpp"

namespace pimodel {
namespace {

Truth exact(const char* text) { return eval_arith(parse_arith(text)).value; }

TEST(Oracle, BoundedExact) {
  EXPECT_EQ(exact("(allle x 3 (exle y 4 (S x y)))"), Truth::kTrue);
  EXPECT_EQ(exact("(allle x 4 (exle y 4 (S x y)))"), Truth::kFalse);
  EXPECT_EQ(exact("(exle x 5 (times x x 9))"), Truth::kTrue);
  EXPECT_EQ(exact("(allle x 6 (plus x 0 x))"), Truth::kTrue);
  EXPECT_EQ(exact("(zero 1)"), Truth::kFalse);
  EXPECT_EQ(exact("(<-> (= 2 2) (not (S 2 2)))"), Truth::kTrue);
  EXPECT_THROW(eval_arith(parse_arith("(all x (= x x))")), Error);
  EXPECT_THROW(eval_arith(parse_arith("(= x 0)")), Error);
}

TEST(Oracle, FreeVariablesAndRelations) {
  ArithEnv env{{{"x", 3}}, {{"P", {{1, 2}, {3, 3}}}}};
  EXPECT_EQ(eval_arith(parse_arith("(app P x x)"), env).value, Truth::kTrue);
  EXPECT_EQ(eval_arith(parse_arith("(app P 2 1)"), env).value, Truth::kFalse);
  EXPECT_EQ(eval_arith(parse_arith("(exle y 3 (app P y 2))"), env).value, Truth::kTrue);
}

TEST(Oracle, CeilingMode) {
  OracleConfig approx{12, OracleMode::kCeilingApprox};
  EXPECT_EQ(eval_arith(parse_arith("(all x (ex y (S x y)))"), {}, approx).value, Truth::kUnknown);
  EXPECT_EQ(eval_arith(parse_arith("(ex x (times x x 49))"), {}, approx).value, Truth::kTrue);
  EXPECT_EQ(eval_arith(parse_arith("(ex x (and (S x 0) (= x x)))"), {}, approx).value, Truth::kFalse);
  EXPECT_EQ(eval_arith(parse_arith("(all x (not (S x 0)))"), {}, approx).value, Truth::kUnknown);
  EXPECT_EQ(eval_arith(parse_arith("(all x (-> (S x 3) (S 1 x)))"), {}, approx).value, Truth::kTrue);
  EXPECT_EQ(eval_arith(parse_arith("(ex x (ex y (and (S y x) (= y 20))))"), {}, approx).value, Truth::kTrue);
  EXPECT_EQ(eval_arith(parse_arith("(ex x (ex y (and (S y x) (and (= y 4) (= x 7)))))"), {}, approx).value, Truth::kFalse);
}

TEST(Oracle, InjectivityScan) {
  ScanReport lit = injectivity_scan(Codec::kLiteralPair, 16);
  EXPECT_FALSE(lit.injective());
  ASSERT_FALSE(lit.collisions.empty());
  EXPECT_EQ(lit.collisions.front().code, 5);
  bool eleven = false;
  for (const auto& c : lit.collisions) {
    if (c.code != 11) continue;
    std::set<std::vector<std::uint64_t>> pair = {c.first, c.second};
    eleven = eleven || pair == std::set<std::vector<std::uint64_t>>{{1, 2}, {3, 1}};
  }
  EXPECT_TRUE(eleven);
  for (std::size_t i = 1; i < lit.collisions.size(); ++i) EXPECT_LE(lit.collisions[i - 1].code, lit.collisions[i].code);

  EXPECT_TRUE(injectivity_scan(Codec::kProductPair, 16).injective());
  EXPECT_TRUE(injectivity_scan(Codec::kProductSeq, 6).injective());
  EXPECT_EQ(injectivity_scan(Codec::kProductPair, 4).checked, 16u);
  EXPECT_NE(to_json(lit).find("\"collisions\""), std::string::npos);
}

TEST(Oracle, BruteInterpreterOnKnownFacts) {
  FiniteModel m = truncate(minimal_family(), {3, 0, {}});
  m.open = false;
  NameSupply ns({"x", "y"});
  FormulaPtr s = successor(Var("x"), Var("y"), ns);
  EXPECT_EQ(brute_second_order(m, 3, s, Env{{{"x", 1}, {"y", 2}}, {}}).value, Truth::kTrue);
  EXPECT_EQ(brute_second_order(m, 3, s, Env{{{"x", 2}, {"y", 1}}, {}}).value, Truth::kFalse);
  FormulaPtr big = ExistsSecond("P", 2, ForallFirst("x", App(SetVar("P", 2), {Var("x"), Var("x")})));
  FiniteModel w = truncate(minimal_family(), {5, 0, {}});
  EXPECT_THROW(brute_second_order(w, 5, big), Error);
}

}  // namespace
}  // namespace pimodel
