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

#include "pimodel/classify.hpp"

#include <gtest/gtest.h>

#include "pimodel/shapes.hpp"
#include "pimodel/translate.hpp"

namespace pimodel {
namespace {

class Classify : public ::testing::Test {
 protected:
  NameSupply names{{"x", "y", "z"}};
  TermPtr x = Var("x");
  TermPtr y = Var("y");
  TermPtr z = Var("z");
};

TEST_F(Classify, InductiveExamples) {
  EXPECT_FALSE(is_inductive(natural(Zero(), names)));
  EXPECT_FALSE(is_inductive(ForallFirst("z", Eq(x, z))));
  EXPECT_FALSE(is_inductive(ExistsFirst("y", successor(Zero(), y, names))));
  EXPECT_TRUE(is_inductive(all_n("z", Eq(x, z), names)));
  EXPECT_TRUE(is_inductive(ex_n("y", successor(Zero(), y, names), names)));
}

TEST_F(Classify, InductiveClosure) {
  auto atom = plus(x, y, z, names);
  EXPECT_TRUE(is_inductive(atom));
  EXPECT_TRUE(is_inductive(Not(And(atom, times(x, x, Zero(), names)))));
  EXPECT_TRUE(is_inductive(Implies(Eq(x, Zero()), Or(atom, Eq(y, y)))));
  EXPECT_FALSE(is_inductive(Eq(Card(SetVar("X")), x)));
  EXPECT_FALSE(is_inductive_term(Card(SetVar("X"))));
  EXPECT_TRUE(is_inductive_term(Zero()));
  EXPECT_FALSE(is_inductive(Box(Eq(x, x))));
}

TEST_F(Classify, DemandCountsBoxesOutsideDefinitions) {
  EXPECT_EQ(demand(successor(x, y, names)), 0);
  EXPECT_EQ(demand(natural(x, names)), 0);
  EXPECT_EQ(demand(all_n("x", Eq(x, x), names)), 1);
  EXPECT_EQ(demand(all_n("x", all_n("y", Eq(x, y), names), names)), 2);
  EXPECT_EQ(demand(And(all_n("x", Eq(x, x), names), ex_n("y", Eq(y, y), names))), 1);
  for (const auto& [name, f] : axiom_suite()) EXPECT_LE(demand(f), 1) << name;
}

TEST_F(Classify, ModalDepthCountsEverything) {
  EXPECT_EQ(modal_depth(Box(Dia(Eq(x, x)))), 2);
  EXPECT_GE(modal_depth(successor(x, y, names)), 1);
}

TEST_F(Classify, SetShorthandExpands) {
  auto f = Eq(Card(UnionOf(SetVar("X"), SetVar("Y"))), x);
  auto g = expand_set_shorthand(f);
  std::function<bool(const SetPtr&)> only_vars = [&](const SetPtr& s) { return s->kind == SetKind::kVar; };
  std::function<bool(const FormulaPtr&)> clean = [&](const FormulaPtr& h) -> bool {
    if (!h) return true;
    if (h->kind == FormulaKind::kApp && !only_vars(h->set)) return false;
    if (h->kind == FormulaKind::kEq) {
      for (const auto& t : {h->lhs_term, h->rhs_term}) {
        if (t->kind == TermKind::kCard && !only_vars(t->set)) return false;
      }
    }
    return clean(h->lhs) && clean(h->rhs);
  };
  EXPECT_TRUE(clean(g));
  EXPECT_EQ(free_vars(g), free_vars(f));
}

TEST_F(Classify, MetaAgrees) {
  auto f = all_n("x", Eq(x, Zero()), names);
  FormulaMeta meta = classify(f);
  EXPECT_TRUE(meta.is_inductive);
  EXPECT_EQ(meta.demand, 1);
}

}  // namespace
}  // namespace pimodel
