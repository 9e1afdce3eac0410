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

#include "pimodel/suite.hpp"

#include <gtest/gtest.h>

#include "pimodel/classify.hpp"

namespace pimodel {
namespace {

TEST(Suite, NamesAndDescriptions) {
  EXPECT_GE(suite_names().size(), 10u);
  for (const auto& s : suite_names()) EXPECT_FALSE(describe(s).empty()) << s;
  EXPECT_THROW(describe("no-such-suite"), Error);
}

TEST(Suite, ReportIsDeterministic) {
  SuiteSpec spec{"lemmas-2x", "minimal", 4, std::nullopt, 7, std::nullopt};
  RunReport a = run_suite(spec);
  RunReport b = run_suite(spec);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_NE(to_json(a).find("\"metadata\""), std::string::npos);
  EXPECT_NE(to_text(a).find("exit 0"), std::string::npos);
}

TEST(Suite, ConfigurationErrors) {
  EXPECT_EQ(run_suite({"no-such-suite"}).exit_code, 2);
  SuiteSpec wide{"hume", "minimal", std::nullopt, 5, 0, std::nullopt};
  EXPECT_EQ(run_suite(wide).exit_code, 2);
  SuiteSpec deep{"q-axioms", "minimal", 40, std::nullopt, 0, std::nullopt};
  RunReport r = run_suite(deep);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.error.find("cost guard"), std::string::npos);
  EXPECT_EQ(run_suite({"q-axioms", "bogus"}).exit_code, 2);
}

TEST(Suite, InductiveCorpus) {
  auto fs = inductive_corpus(3, 24);
  ASSERT_EQ(fs.size(), 24u);
  for (const auto& f : fs) {
    EXPECT_TRUE(is_inductive(f)) << render(f);
    EXPECT_TRUE(free_vars(f).first.count("x")) << render(f);
  }
  auto again = inductive_corpus(3, 24);
  for (std::size_t i = 0; i < fs.size(); ++i) EXPECT_EQ(render(fs[i]), render(again[i]));
}

TEST(Suite, SentenceCorpus) {
  auto fs = bounded_sentence_corpus(0, 60);
  ASSERT_EQ(fs.size(), 60u);
  std::set<std::string> distinct;
  for (const auto& f : fs) distinct.insert(render(f));
  EXPECT_GE(distinct.size(), 50u);
}

TEST(Suite, CodecRunPasses) {
  RunReport r = run_suite({"codec", "minimal"});
  EXPECT_EQ(r.exit_code, 0) << to_text(r);
  bool expected = false;
  for (const auto& c : r.checks) expected = expected || c.expected_failure;
  EXPECT_TRUE(expected);
}

TEST(Suite, CounterexampleReproduces) {
  RunReport r = run_suite({"induction-counterexample", "minimal"});
  EXPECT_EQ(r.exit_code, 0) << to_text(r);
  RunReport bad = run_suite({"induction-counterexample", "swap:3,0"});
  EXPECT_EQ(bad.exit_code, 1);
}

TEST(Suite, HumePrincipleIsClosed) { EXPECT_TRUE(free_vars(hume_principle()).empty()); }

}  // namespace
}  // namespace pimodel
