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

#include "pimodel/formula.hpp"

#include <gtest/gtest.h>

#include "pimodel/parse.hpp"
#include "pimodel/translate.hpp"

namespace pimodel {
namespace {

TEST(Formula, FreeVariablesSkipBinders) {
  auto f = ForallFirst("x", And(Eq(Var("x"), Var("y")), App(SetVar("X"), {Var("z")})));
  FreeVars fv = free_vars(f);
  EXPECT_EQ(fv.first, (std::set<std::string>{"y", "z"}));
  EXPECT_EQ(fv.second, (std::map<std::string, int>{{"X", 1}}));
}

TEST(Formula, SecondOrderBinderHidesSet) {
  auto f = ExistsSecond("P", 2, App(SetVar("P", 2), {Var("a"), Var("b")}));
  FreeVars fv = free_vars(f);
  EXPECT_TRUE(fv.second.empty());
  EXPECT_EQ(fv.first.size(), 2u);
}

TEST(Formula, ArityMismatchIsRejected) {
  EXPECT_THROW(App(SetVar("P", 2), {Var("x")}), Error);
  EXPECT_THROW(Section(SetVar("X"), Var("x")), Error);
}

TEST(Formula, SubstitutionAvoidsCapture) {
  auto f = ForallFirst("y", Eq(Var("x"), Var("y")));
  auto g = substitute(f, "x", Var("y"));
  EXPECT_EQ(free_vars(g).first, (std::set<std::string>{"y"}));
  EXPECT_TRUE(alpha_equal(g, ForallFirst("q", Eq(Var("y"), Var("q")))));
  EXPECT_FALSE(alpha_equal(g, ForallFirst("q", Eq(Var("q"), Var("q")))));
}

TEST(Formula, SubstitutionLeavesBoundOccurrences) {
  auto f = And(Eq(Var("x"), Zero()), ForallFirst("x", Eq(Var("x"), Zero())));
  auto g = substitute(f, "x", Zero());
  EXPECT_TRUE(alpha_equal(g, And(Eq(Zero(), Zero()), ForallFirst("x", Eq(Var("x"), Zero())))));
}

TEST(Formula, AlphaEquality) {
  auto a = ForallFirst("x", Eq(Var("x"), Zero()));
  auto b = ForallFirst("y", Eq(Var("y"), Zero()));
  auto c = ForallFirst("y", Eq(Var("x"), Zero()));
  EXPECT_TRUE(alpha_equal(a, b));
  EXPECT_FALSE(alpha_equal(a, c));
  EXPECT_TRUE(alpha_equal(Card(SetVar("X")), Card(SetVar("X"))));
  EXPECT_FALSE(alpha_equal(Card(SetVar("X")), Card(SetVar("Y"))));
}

TEST(Formula, NameSupplyAvoidsReservedNames) {
  NameSupply names({"x.0", "x.1"});
  std::string a = names.fresh("x");
  std::string b = names.fresh("x", {"x.2", "x.3"});
  EXPECT_NE(a, "x.0");
  EXPECT_NE(a, "x.1");
  EXPECT_NE(a, b);
  EXPECT_NE(b, "x.2");
  EXPECT_NE(b, "x.3");
}

TEST(Formula, RenderParseRoundTripOnAxioms) {
  for (const auto& [name, f] : axiom_suite()) {
    std::string text = render(f);
    FormulaPtr back = parse_formula(text);
    EXPECT_TRUE(alpha_equal(f, back)) << name;
    EXPECT_EQ(render(back), text) << name;
  }
}

TEST(Formula, SizeCountsNodes) {
  EXPECT_EQ(size(Eq(Var("x"), Zero())), 1u);
  EXPECT_EQ(size(Not(And(Eq(Var("x"), Zero()), Eq(Var("x"), Zero())))), 4u);
}

}  // namespace
}  // namespace pimodel
