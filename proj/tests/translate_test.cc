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

#include "pimodel/translate.hpp"

#include <gtest/gtest.h>

#include "pimodel/classify.hpp"
#include "pimodel/semantics.hpp"
#include "pimodel/shapes.hpp"

namespace pimodel {
namespace {

TEST(Translate, AxiomSuiteShape) {
  auto suite = axiom_suite();
  ASSERT_EQ(suite.size(), 13u);
  std::vector<std::string> names;
  for (const auto& a : suite) names.push_back(a.name);
  EXPECT_EQ(names, (std::vector<std::string>{"S1", "S2", "A1", "A2", "M1", "M2", "Z1", "Q1", "Q2", "Q3", "Q4", "Q5",
                                             "Q6"}));
  NameSupply ns({"x"});
  FormulaPtr q3 = all_n("x", plus(Var("x"), Zero(), Var("x"), ns), ns);
  FormulaPtr q5 = all_n("x", times(Var("x"), Zero(), Zero(), ns), ns);
  EXPECT_TRUE(alpha_equal(suite[9].formula, q3));
  EXPECT_TRUE(alpha_equal(suite[11].formula, q5));
  for (const auto& a : suite) EXPECT_TRUE(free_vars(a.formula).empty()) << a.name;
}

TEST(Translate, AtomTable) {
  NameSupply ns({"x", "y", "z"});
  TranslationOutput s = fregean(parse_arith("(S x y)"));
  EXPECT_TRUE(alpha_equal(s.formula, successor(Var("x"), Var("y"), ns)));
  TranslationOutput p = fregean(parse_arith("(plus x y z)"));
  EXPECT_TRUE(alpha_equal(p.formula, plus(Var("x"), Var("y"), Var("z"), ns)));
  TranslationOutput t = fregean(parse_arith("(times x y z)"));
  EXPECT_TRUE(alpha_equal(t.formula, times(Var("x"), Var("y"), Var("z"), ns)));
  TranslationOutput e = fregean(parse_arith("(= x y)"));
  EXPECT_TRUE(alpha_equal(e.formula, Eq(Var("x"), Var("y"))));
  TranslationOutput zero = fregean(parse_arith("(zero x)"));
  EXPECT_TRUE(alpha_equal(zero.formula, Eq(Var("x"), Zero())));
  EXPECT_FALSE(s.beyond_first_order);
  EXPECT_EQ(s.free_var_map.size(), 2u);
}

TEST(Translate, QuantifiersGetNumberGuards) {
  TranslationOutput a = fregean(parse_arith("(all x (ex y (S x y)))"));
  auto outer = match_all_n(a.formula);
  ASSERT_TRUE(outer.has_value());
  auto inner = match_ex_n(outer->body);
  ASSERT_TRUE(inner.has_value());
  EXPECT_TRUE(match_successor(inner->body).has_value());
  EXPECT_TRUE(free_vars(a.formula).empty());
  EXPECT_TRUE(is_inductive(a.formula));
}

TEST(Translate, ConnectivesAreHomomorphic) {
  TranslationOutput a = fregean(parse_arith("(-> (not (= x y)) (and (zero x) (or (= x x) (= y y))))"));
  EXPECT_EQ(a.formula->kind, FormulaKind::kImplies);
  EXPECT_EQ(a.formula->lhs->kind, FormulaKind::kNot);
  EXPECT_EQ(a.formula->rhs->kind, FormulaKind::kAnd);
  EXPECT_EQ(a.formula->rhs->rhs->kind, FormulaKind::kOr);
}

TEST(Translate, SecondOrderIsFlagged) {
  TranslationOutput a = fregean(parse_arith("(All P 1 (-> (app P x) (app P x)))"));
  EXPECT_TRUE(a.beyond_first_order);
  EXPECT_EQ(a.formula->kind, FormulaKind::kBox);
  EXPECT_EQ(a.formula->lhs->kind, FormulaKind::kAllSecond);
  TranslationOutput b = fregean(parse_arith("(Ex P 2 (app P x x))"));
  EXPECT_EQ(b.formula->kind, FormulaKind::kDia);
  EXPECT_EQ(b.formula->lhs->kind, FormulaKind::kExSecond);
}

TEST(Translate, RejectsNestedInput) {
  EXPECT_THROW(fregean(parse_arith("(S 0 x)")), Error);
  EXPECT_THROW(fregean(parse_arith("(allle x 2 (= x x))")), Error);
  EXPECT_NO_THROW(fregean(unnest(parse_arith("(allle x 2 (S 0 x))"))));
}

TEST(Translate, NumeralsDenoteNumbers) {
  FiniteModel m = truncate(minimal_family(), {6, 37, {}});
  Evaluator ev(m);
  for (std::uint64_t n = 0; n <= 3; ++n) {
    FormulaPtr s = sigma(n, "x");
    EXPECT_EQ(free_vars(s).first, (std::set<std::string>{"x"}));
    for (Element e = 0; e <= 5; ++e) {
      EXPECT_EQ(ev.holds(5, s, Env{{{"x", e}}, {}}), e == n) << n << " " << e;
    }
  }
}

TEST(Translate, SuccessorAlternativeSwap) {
  FormulaPtr s1 = axiom_suite().front().formula;
  FormulaPtr alt = with_successor_alt(s1);
  EXPECT_FALSE(alpha_equal(s1, alt));
  EXPECT_TRUE(free_vars(alt).empty());
  FiniteModel m = truncate(minimal_family(), {4, 17, {}});
  Evaluator ev(m);
  for (std::size_t w = 0; w < m.truncated; ++w) EXPECT_EQ(ev.holds(w, s1), ev.holds(w, alt));
}

TEST(Translate, InductionInstance) {
  FormulaPtr phi = Eq(Var("x"), Var("x"));
  FormulaPtr inst = induction_instance(phi, "x");
  EXPECT_EQ(inst->kind, FormulaKind::kImplies);
  EXPECT_TRUE(free_vars(inst).empty());
  ASSERT_TRUE(match_all_n(inst->rhs).has_value());
  EXPECT_THROW(induction_instance(phi, "y"), Error);
}

}  // namespace
}  // namespace pimodel
