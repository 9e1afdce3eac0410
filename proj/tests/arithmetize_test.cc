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

#include "pimodel/arithmetize.hpp"

#include <gtest/gtest.h>

#include "pimodel/semantics.hpp"
#include "pimodel/shapes.hpp"

namespace pimodel {
namespace {

TEST(Arithmetize, WorkedExample) {
  FormulaPtr f = Box(ForallFirst("v", Dia(ExistsSecond("Z", 1, Eq(Var("v"), Card(SetVar("Z")))))));
  EXPECT_EQ(render(arithmetize(f)),
            "(all s.0 (-> (W s.0) (-> (R w s.0) (all v (-> (ex Y.3 (and (D s.0 Y.3) (ex u.4 (at v Y.3 u.4)))) "
            "(ex s.1 (and (W s.1) (and (R s.0 s.1) (ex Z (and (and (Seq Z) (ex X.2 (and (D s.1 X.2) (sb Z X.2)))) "
            "(#M Z v)))))))))))");
}

TEST(Arithmetize, FreeVariablesKeepWorldParameter) {
  CPtr c = arithmetize(Eq(Var("x"), Zero()));
  std::set<std::string> fv = free_vars(c);
  EXPECT_TRUE(fv.count("x"));
  EXPECT_FALSE(fv.count("w"));
  CPtr d = arithmetize(Box(Eq(Var("x"), Var("x"))));
  EXPECT_TRUE(free_vars(d).count("w"));
}

TEST(Arithmetize, ReservedWorldName) {
  EXPECT_THROW(arithmetize(Eq(Var("w"), Zero())), Error);
  EXPECT_THROW(arithmetize(ForallFirst("w", Eq(Var("w"), Zero()))), Error);
}

TEST(Arithmetize, AgreesWithDirectEvaluation) {
  FiniteModel m = truncate(minimal_family(), {2, 0, {}});
  m.open = false;
  CodedModel coded = encode_model(m);
  CodedEvaluator ce(coded);
  Evaluator ev(m);
  NameSupply ns({"x", "y"});
  std::vector<FormulaPtr> fs = {
      successor(Var("x"), Var("y"), ns),
      natural(Var("x"), ns),
      Box(ExistsFirst("y", Eq(Var("y"), Var("x")))),
      Dia(ExistsSecond("X", 1, Eq(Card(SetVar("X")), Var("x")))),
      ForallSecond("P", 2, Implies(App(SetVar("P", 2), {Var("x"), Var("x")}), ExistsFirst("y", App(SetVar("P", 2), {Var("y"), Var("x")})))),
  };
  for (const auto& f : fs) {
    CPtr cf = arithmetize(f);
    for (std::size_t w = 0; w < m.size(); ++w) {
      for (Element a : m.domain_union()) {
        for (Element b : m.domain_union()) {
          Env env{{{"x", a}, {"y", b}}, {}};
          EXPECT_EQ(ev.holds(w, f, env), ce.holds(cf, w, env.first)) << render(f) << " world " << w << " x=" << a;
        }
      }
    }
  }
}

}  // namespace
}  // namespace pimodel
