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

#include "pimodel/model.hpp"
#include "pimodel/formula.hpp"

#include <algorithm>

#include <gtest/gtest.h>

namespace pimodel {
namespace {

bool contains(const ElementSet& s, Element e) { return std::binary_search(s.begin(), s.end(), e); }

TEST(Model, MinimalTruncation) {
  FiniteModel m = truncate(minimal_family(), {3, 0, {}});
  ASSERT_EQ(m.size(), 4u);
  EXPECT_EQ(m.truncated, 4u);
  for (std::size_t n = 0; n < 4; ++n) {
    ElementSet want;
    for (Element e = 0; e <= n; ++e) want.push_back(e);
    EXPECT_EQ(m.dom[n], want);
    EXPECT_EQ(m.horizon_rank(n), static_cast<int>(3 - n));
  }
  EXPECT_TRUE(m.acc[0][3]);
  EXPECT_FALSE(m.acc[3][0]);
  EXPECT_EQ(m.octo({}), 0u);
  EXPECT_EQ(m.octo({5, 9}), 2u);
  EXPECT_TRUE(validate_pi(m).ok());
}

TEST(Model, ExtensionChainSitsAboveTruncation) {
  FiniteModel m = truncate(minimal_family(), {6, 37, {}});
  EXPECT_EQ(m.truncated, 7u);
  EXPECT_GT(m.size(), 7u);
  EXPECT_EQ(m.dom.back().size(), 37u);
  for (std::size_t w = 0; w < m.size(); ++w) EXPECT_TRUE(m.acc[w].back());
  EXPECT_EQ(m.horizon_rank(m.size() - 1), -1);
  EXPECT_TRUE(validate_pi(m).ok());
}

TEST(Model, SubsetTruncation) {
  FiniteModel m = truncate(subset_family(), {2, 0, {}});
  EXPECT_EQ(m.size(), 7u);
  EXPECT_TRUE(validate_pi(m).ok());
  for (std::size_t w = 0; w < m.size(); ++w) {
    for (std::size_t s = 0; s < m.size(); ++s) {
      bool subset = std::includes(m.dom[s].begin(), m.dom[s].end(), m.dom[w].begin(), m.dom[w].end());
      EXPECT_EQ(static_cast<bool>(m.acc[w][s]), subset);
    }
  }
}

TEST(Model, SwapFamilyHidesZeroEarly) {
  FiniteModel m = truncate(swap_family(3, 0), {5, 0, {}});
  for (std::size_t w = 0; w < 3; ++w) EXPECT_FALSE(contains(m.dom[w], 0)) << w;
  EXPECT_TRUE(contains(m.dom[3], 0));
  for (std::size_t w = 0; w < m.size(); ++w) EXPECT_EQ(m.dom[w].size(), w + 1);
  EXPECT_TRUE(validate_pi(m).ok());
}

TEST(Model, FamilyNames) {
  EXPECT_EQ(family_by_name("minimal").kind(), FamilyKind::kMinimal);
  EXPECT_EQ(family_by_name("subset").kind(), FamilyKind::kSubset);
  EXPECT_EQ(family_by_name("swap:3,0").kind(), FamilyKind::kSwap);
  EXPECT_THROW(family_by_name("swap:3"), Error);
  EXPECT_THROW(family_by_name("lattice"), Error);
}

TEST(Model, ValidationReportsBrokenConditions) {
  FiniteModel m = truncate(minimal_family(), {3, 0, {}});
  m.acc[1][1] = 0;
  PiReport r = validate_pi(m);
  EXPECT_FALSE(r.ok());
  ASSERT_NE(r.find("reflexive"), nullptr);
  EXPECT_EQ(r.find("reflexive")->status, CheckStatus::kFail);
  EXPECT_FALSE(r.find("reflexive")->detail.empty());
  ASSERT_NE(r.find("infinitely many worlds"), nullptr);
  EXPECT_EQ(r.find("infinitely many worlds")->status, CheckStatus::kNotCheckable);

  FiniteModel g = truncate(minimal_family(), {3, 0, {}});
  g.dom[2] = g.dom[1];
  EXPECT_EQ(validate_pi(g).find("domain growth")->status, CheckStatus::kFail);

  FiniteModel d = truncate(subset_family(), {2, 0, {}});
  for (auto& row : d.acc) row.back() = 0;
  d.acc.back().back() = 1;
  EXPECT_EQ(validate_pi(d).find("directed")->status, CheckStatus::kFail);
}

TEST(Model, JsonRoundTrip) {
  FiniteModel m = truncate(swap_family(3, 0), {4, 10, {}});
  FiniteModel back = finite_model_from_json(to_json(m));
  EXPECT_EQ(to_json(back), to_json(m));
  EXPECT_EQ(back.truncated, m.truncated);
  EXPECT_THROW(finite_model_from_json("{\"worlds\": 3}"), Error);
}

TEST(Model, CodedRoundTrip) {
  for (const std::string& fam : {"minimal", "subset", "swap:3,0"}) {
    FiniteModel m = truncate(family_by_name(fam), {3, 10, {}});
    CodedModel c = encode_model(m);
    FiniteModel back = decode_model(c);
    EXPECT_EQ(to_json(back), to_json(m)) << fam;
    EXPECT_EQ(encode_model(back), c) << fam;
    EXPECT_EQ(coded_model_from_json(to_json(c)), c) << fam;
  }
}

}  // namespace
}  // namespace pimodel
