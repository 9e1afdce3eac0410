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

#include "pimodel/semantics.hpp"

#include <gtest/gtest.h>

#include "pimodel/oracle.hpp"
#include "pimodel/shapes.hpp"
#include "pimodel/translate.hpp"

namespace pimodel {
namespace {

FiniteModel closed(const std::string& fam, std::uint64_t horizon) {
  FiniteModel m = truncate(family_by_name(fam), {horizon, 0, {}});
  m.open = false;
  return m;
}

// Compares the shortcut evaluator, the plain evaluator and the independent
// brute-force interpreter on every world and every assignment over the
// model's elements.
void expect_agreement(const FiniteModel& m, const FormulaPtr& f, const std::vector<std::string>& vars) {
  Evaluator fast(m);
  EvalOptions plain_opts;
  plain_opts.fast_paths = false;
  Evaluator plain(m, plain_opts);
  ElementSet all = m.domain_union();
  std::vector<std::size_t> idx(vars.size(), 0);
  for (std::size_t w = 0; w < m.size(); ++w) {
    while (true) {
      Env env;
      for (std::size_t i = 0; i < vars.size(); ++i) env.first[vars[i]] = all[idx[i]];
      bool a = fast.holds(w, f, env);
      bool b = plain.holds(w, f, env);
      Verdict c = brute_second_order(m, w, f, env);
      ASSERT_EQ(a, b) << render(f) << " at world " << w;
      ASSERT_EQ(c.value, a ? Truth::kTrue : Truth::kFalse) << render(f) << " at world " << w;
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == all.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
}

class Semantics : public ::testing::Test {
 protected:
  NameSupply names{{"x", "y", "z"}};
  TermPtr x = Var("x");
  TermPtr y = Var("y");
  TermPtr z = Var("z");
  RelationBuilder succ = [](TermPtr a, TermPtr b, NameSupply& n) { return successor(a, b, n); };
};

TEST_F(Semantics, ShortcutsAgreeWithEnumeration) {
  FiniteModel m = closed("minimal", 3);
  expect_agreement(m, successor(x, y, names), {"x", "y"});
  expect_agreement(m, successor_alt(x, y, names), {"x", "y"});
  expect_agreement(m, plus(x, y, z, names), {"x", "y", "z"});
  expect_agreement(m, strong_ancestral(succ, x, y, names), {"x", "y"});
  expect_agreement(m, weak_ancestral(succ, x, y, names), {"x", "y"});
  expect_agreement(m, natural(x, names), {"x"});
  expect_agreement(closed("minimal", 2), times(x, y, z, names), {"x", "y", "z"});
}

TEST_F(Semantics, ShortcutsAgreeOnSubsetAndSwap) {
  FiniteModel s = closed("subset", 2);
  expect_agreement(s, successor(x, y, names), {"x", "y"});
  expect_agreement(s, natural(x, names), {"x"});
  FiniteModel w = closed("swap:3,0", 3);
  expect_agreement(w, successor(x, y, names), {"x", "y"});
  expect_agreement(w, plus(x, y, z, names), {"x", "y", "z"});
  expect_agreement(w, natural(x, names), {"x"});
}

TEST_F(Semantics, NaturalsAtWorlds) {
  FiniteModel m = truncate(minimal_family(), {6, 37, {}});
  for (std::size_t w = 0; w < m.truncated; ++w) EXPECT_EQ(naturals_at(m, w), m.dom[w]);

  TruncationSpec spec;
  spec.worlds = std::vector<ModelFamily::World>{{2, 100}, {0, 1, 3}, {0, 1, 2, 3, 100}};
  FiniteModel s = truncate(subset_family(), spec);
  for (std::size_t w = 0; w < s.size(); ++w) {
    if (s.dom[w] == ElementSet{2, 100}) EXPECT_TRUE(naturals_at(s, w).empty());
    if (s.dom[w] == ElementSet{0, 1, 3}) EXPECT_EQ(naturals_at(s, w), (ElementSet{0, 1}));
    if (s.dom[w] == ElementSet{0, 1, 2, 3, 100}) EXPECT_EQ(naturals_at(s, w), (ElementSet{0, 1, 2, 3}));
  }

  FiniteModel sw = truncate(swap_family(3, 0), {6, 37, {}});
  for (std::size_t w = 0; w < 3; ++w) EXPECT_TRUE(naturals_at(sw, w).empty());
  for (std::size_t w = 0; w < sw.truncated; ++w) EXPECT_EQ(naturals_at(sw, w), naturals_expected(sw, w));
}

TEST_F(Semantics, AncestralExamples) {
  FiniteModel m = closed("minimal", 2);
  std::vector<std::pair<Element, Element>> chain = {{0, 1}, {1, 2}};
  EXPECT_TRUE(ancestral_fast(m, 2, chain, 0, 2, false));
  EXPECT_FALSE(ancestral_fast(m, 2, chain, 2, 0, false));
  EXPECT_FALSE(ancestral_fast(m, 1, chain, 0, 2, false));
  EXPECT_TRUE(ancestral_fast(m, 2, {}, 1, 1, true));
  EXPECT_FALSE(ancestral_fast(m, 2, {}, 1, 1, false));
}

TEST_F(Semantics, ModalitiesAndVerdicts) {
  FiniteModel m = truncate(minimal_family(), {3, 0, {}});
  Evaluator ev(m);
  auto zero_exists = ExistsFirst("x", Eq(x, Zero()));
  EXPECT_TRUE(ev.holds(0, zero_exists));
  auto three_exists = Dia(ExistsFirst("x", Eq(Card(PlusOne(PlusOne(PlusOne(EmptySet(), Var("a")), Var("b")), Var("c"))), x)));
  Env env{{{"a", 0}, {"b", 1}, {"c", 2}}, {}};
  EXPECT_EQ(ev.eval(0, three_exists, env).value, Truth::kTrue);

  // Demand counts boxes only, so a failed diamond alone stays faithful.
  auto big = Dia(ExistsFirst("x", Eq(x, Var("e"))));
  Verdict v = ev.eval(0, big, Env{{{"e", 4}}, {}});
  EXPECT_EQ(v.value, Truth::kFalse);
  EXPECT_TRUE(v.faithful);
  auto boxed = Box(Dia(ExistsFirst("x", Eq(x, Var("e")))));
  Verdict u = ev.eval(0, boxed, Env{{{"e", 3}}, {}});
  EXPECT_EQ(u.value, Truth::kTrue);
}

TEST_F(Semantics, EnvironmentErrors) {
  FiniteModel m = truncate(minimal_family(), {2, 0, {}});
  Evaluator ev(m);
  EXPECT_THROW(ev.eval(0, Eq(x, Zero())), Error);
  EXPECT_THROW(ev.eval(0, App(SetVar("X", 2), {x, x}), Env{{{"x", 0}}, {{"X", {{0}}}}}), Error);
  EXPECT_THROW(ev.eval(0, Eq(Card(SetVar("X")), Zero()), Env{{}, {{"X", {{99}}}}}), Error);
  // A future element is a legal value for a free variable.
  EXPECT_EQ(ev.eval(0, Eq(x, x), Env{{{"x", 2}}, {}}).value, Truth::kTrue);
}

TEST_F(Semantics, CostGuard) {
  FiniteModel m = truncate(minimal_family(), {3, 0, {}});
  EvalOptions opts;
  opts.max_bits = 8;
  Evaluator ev(m, opts);
  auto f = ExistsSecond("P", 2, ForallFirst("x", App(SetVar("P", 2), {x, x})));
  EXPECT_THROW(ev.eval(3, f), Error);
  EXPECT_NO_THROW(ev.eval(1, f));
}

TEST_F(Semantics, CheckValidOnAxiom) {
  FiniteModel m = truncate(minimal_family(), {6, 37, {}});
  auto suite = axiom_suite();
  SuiteReport r = check_valid(m, suite.front().formula);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.per_world.size(), 7u);
  for (const auto& w : r.per_world) {
    if (w.faithful) EXPECT_EQ(w.value, Truth::kTrue);
  }
}

TEST_F(Semantics, CheckValidReportsWitness) {
  FiniteModel m = truncate(minimal_family(), {4, 17, {}});
  FormulaPtr phi = ForallFirst("z", Eq(Var("z"), x));
  FormulaPtr inst = induction_instance(phi, "x");
  SuiteReport r = check_valid(m, inst->rhs);
  ASSERT_FALSE(r.per_world.empty());
  EXPECT_EQ(r.per_world[0].value, Truth::kFalse);
  ASSERT_TRUE(r.per_world[0].witness.has_value());
  ASSERT_TRUE(r.per_world[0].witness->world.has_value());
  EXPECT_EQ(*r.per_world[0].witness->world, 1);
  EXPECT_FALSE(r.pass);
}

TEST_F(Semantics, StabilityWitness) {
  FiniteModel s = truncate(subset_family(), {3, 10, {}});
  SuiteReport good = check_stability(s, natural(x, names), {"x"});
  EXPECT_TRUE(good.pass);
  SuiteReport bad = check_stability(s, Not(natural(x, names)), {"x"});
  EXPECT_FALSE(bad.pass);
  bool seen = false;
  for (const auto& w : bad.per_world) {
    if (w.value != Truth::kFalse) continue;
    ASSERT_TRUE(w.witness.has_value());
    std::size_t here = s.index_of(w.world);
    std::size_t there = s.index_of(*w.witness->world);
    EXPECT_TRUE(s.acc[here][there]);
    Element e = w.witness->env.at("x");
    EXPECT_FALSE(holds_N(s, here, e));
    EXPECT_TRUE(holds_N(s, there, e));
    seen = true;
  }
  EXPECT_TRUE(seen);
  FiniteModel m = truncate(minimal_family(), {5, 26, {}});
  EXPECT_TRUE(check_stability(m, successor(x, y, names), {"x", "y"}).pass);
}

TEST_F(Semantics, ReportJson) {
  FiniteModel m = truncate(minimal_family(), {2, 5, {}});
  SuiteReport r = check_valid(m, ExistsFirst("x", Eq(x, Zero())));
  r.name = "zero";
  std::string j = to_json(r);
  EXPECT_NE(j.find("\"per_world\""), std::string::npos);
  EXPECT_NE(j.find("\"faithful\""), std::string::npos);
  EXPECT_NE(j.find("\"pass\": true"), std::string::npos);
}

}  // namespace
}  // namespace pimodel
