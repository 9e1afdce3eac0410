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

#include "pimodel/arith.hpp"

#include <gtest/gtest.h>

#include "pimodel/oracle.hpp"

namespace pimodel {
namespace {

TEST(Arith, ParseRenderRoundTrip) {
  for (const char* text : {"(all x (ex y (S x y)))", "(allle a 3 (exle b 2 (plus a b 4)))",
                           "(All P 2 (-> (app P x 0) (times x 1 x)))"}) {
    ArithPtr f = parse_arith(text);
    EXPECT_EQ(render(f), text);
    EXPECT_TRUE(alpha_equal(parse_arith(render(f)), f));
  }
}

TEST(Arith, ParseErrors) {
  EXPECT_THROW(parse_arith("(S x)"), Error);
  EXPECT_THROW(parse_arith("(allle x y (= x x))"), Error);
  EXPECT_THROW(parse_arith("(frob x)"), Error);
}

TEST(Arith, FreeVariables) {
  ArithPtr f = parse_arith("(all x (plus x y 3))");
  EXPECT_EQ(free_vars(f).first, (std::set<std::string>{"y"}));
  EXPECT_FALSE(has_second_order(f));
  EXPECT_TRUE(has_second_order(parse_arith("(Ex P 1 (app P 0))")));
}

TEST(Arith, NumeralFormulaPicksOutOneNumber) {
  OracleConfig approx{12, OracleMode::kCeilingApprox};
  for (std::uint64_t n = 0; n <= 4; ++n) {
    ArithPtr t = tau(n, "x");
    EXPECT_EQ(free_vars(t).first, (std::set<std::string>{"x"}));
    EXPECT_TRUE(is_unnested(t));
    for (std::uint64_t v = 0; v <= 6; ++v) {
      Verdict r = eval_arith(t, ArithEnv{{{"x", v}}, {}}, approx);
      EXPECT_EQ(r.value, v == n ? Truth::kTrue : Truth::kFalse) << n << " " << v;
    }
  }
}

TEST(Arith, UnnestRemovesNumeralsAndBounds) {
  OracleConfig approx{12, OracleMode::kCeilingApprox};
  for (const char* text : {"(S 1 2)", "(S 2 1)", "(plus 1 2 3)", "(times 2 2 3)", "(= 2 2)", "(zero 0)",
                           "(allle a 2 (exle b 3 (S a b)))", "(exle a 3 (times a a 4))", "(allle a 3 (plus a 0 a))"}) {
    ArithPtr f = parse_arith(text);
    ArithPtr g = unnest(f);
    EXPECT_TRUE(is_unnested(g)) << text;
    EXPECT_FALSE(is_unnested(f)) << text;
    EXPECT_EQ(eval_arith(g, {}, approx).value, eval_arith(f).value) << text;
  }
}

}  // namespace
}  // namespace pimodel
