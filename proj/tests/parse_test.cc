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

#include "pimodel/parse.hpp"

#include <gtest/gtest.h>

#include "pimodel/shapes.hpp"

namespace pimodel {
namespace {

TEST(Parse, Atoms) {
  auto f = parse_formula("(= x zero)");
  EXPECT_TRUE(alpha_equal(f, Eq(Var("x"), Zero())));
  auto g = parse_formula("(app X (card Y))");
  EXPECT_TRUE(alpha_equal(g, App(SetVar("X"), {Card(SetVar("Y"))})));
}

TEST(Parse, QuantifiersAndSets) {
  auto f = parse_formula("(All P 2 (Ex X 1 (= (card (bigusect P X)) (card (union X (minus X zero))))))");
  EXPECT_EQ(f->kind, FormulaKind::kAllSecond);
  EXPECT_EQ(f->arity, 2);
  EXPECT_EQ(f->lhs->kind, FormulaKind::kExSecond);
  EXPECT_TRUE(free_vars(f).empty());
}

TEST(Parse, NaryConnectives) {
  auto f = parse_formula("(and (= x x) (= y y) (= z z))");
  EXPECT_TRUE(alpha_equal(f, And(Eq(Var("x"), Var("x")), And(Eq(Var("y"), Var("y")), Eq(Var("z"), Var("z"))))));
}

TEST(Parse, NumberGuards) {
  NameSupply names({"x"});
  auto f = parse_formula("(allN x (= x x))");
  EXPECT_TRUE(alpha_equal(f, all_n("x", Eq(Var("x"), Var("x")), names)));
  ASSERT_TRUE(match_all_n(f).has_value());
  auto g = parse_formula("(N zero)");
  ASSERT_TRUE(match_natural(g).has_value());
}

TEST(Parse, ShadowedBinderStaysDistinct) {
  auto f = parse_formula("(all x (and (= x zero) (all x (= x x))))");
  EXPECT_TRUE(free_vars(f).empty());
  EXPECT_TRUE(alpha_equal(f, ForallFirst("a", And(Eq(Var("a"), Zero()), ForallFirst("b", Eq(Var("b"), Var("b")))))));
}

TEST(Parse, ErrorsCarryPositions) {
  try {
    parse_formula("(and (= x zero)\n  (frob x))");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("frob"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse_formula("(= x"), Error);
  EXPECT_THROW(parse_formula("(not)"), Error);
  EXPECT_THROW(parse_formula("(All X 0 (= x x))"), Error);
  EXPECT_THROW(parse_formula("(= x zero) extra"), Error);
}

TEST(Parse, SexpReader) {
  Sexp s = read_sexp("(a (b c) d)");
  ASSERT_FALSE(s.is_atom);
  ASSERT_EQ(s.items.size(), 3u);
  EXPECT_EQ(s.items[1].items[1].atom, "c");
}

}  // namespace
}  // namespace pimodel
