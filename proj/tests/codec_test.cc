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

#include "pimodel/codec.hpp"
#include "pimodel/formula.hpp"

#include <gtest/gtest.h>

namespace pimodel {
namespace {

TEST(Codec, Primes) {
  EXPECT_EQ(prime(0), 2u);
  EXPECT_EQ(prime(1), 3u);
  EXPECT_EQ(prime(4), 11u);
  EXPECT_EQ(prime(24), 97u);
}

TEST(Codec, PairRoundTrip) {
  std::set<BigNat> seen;
  for (std::uint64_t x = 0; x < 20; ++x) {
    for (std::uint64_t y = 0; y < 20; ++y) {
      BigNat c = encode_pair(x, y);
      EXPECT_EQ(decode_pair(c), std::make_pair(x, y));
      EXPECT_TRUE(seen.insert(c).second);
    }
  }
}

TEST(Codec, SequenceRoundTrip) {
  std::vector<std::vector<std::uint64_t>> samples = {{}, {0}, {5}, {0, 1, 2}, {1, 3, 4, 5, 9}, {2, 100}};
  for (const auto& s : samples) {
    BigNat c = encode_seq(s);
    EXPECT_TRUE(is_seq_code(c));
    EXPECT_EQ(decode_seq(c), s);
  }
  EXPECT_NE(encode_seq({0}), encode_seq({0, 1}));
  EXPECT_NE(encode_seq({1, 2}), encode_seq({1, 3}));
  EXPECT_THROW(encode_seq({2, 1}), Error);
  EXPECT_THROW(encode_seq({1, 1}), Error);
}

TEST(Codec, TupleRoundTrip) {
  std::vector<std::uint64_t> t = {4, 0, 7};
  EXPECT_EQ(decode_tuple(encode_tuple(t), 3), t);
}

TEST(Codec, LiteralPairCollides) {
  EXPECT_EQ(literal_pair_code(1, 2), 11);
  EXPECT_EQ(literal_pair_code(3, 1), 11);
  EXPECT_EQ(literal_pair_code(1, 1), literal_pair_code(2, 0));
}

TEST(Codec, Valuation) {
  EXPECT_EQ(valuation(72, 2), 3u);
  EXPECT_EQ(valuation(72, 3), 2u);
  EXPECT_EQ(valuation(72, 5), 0u);
}

TEST(Codec, DecimalRoundTrip) {
  BigNat big = BigNat(1) << 200;
  EXPECT_EQ(from_decimal(to_decimal(big)), big);
  EXPECT_THROW(from_decimal("12a"), Error);
}

TEST(Codec, FactoredNaturals) {
  Nat small = Nat::product({{2, 3}, {3, 1}});
  EXPECT_EQ(small.value(), 24);
  EXPECT_EQ(small.exponent(2), 3);
  EXPECT_EQ(Nat::parse(small.str()), small);

  Nat huge = Nat::product({{2, BigNat(1) << 80}, {5, 1}});
  EXPECT_TRUE(huge.factored());
  EXPECT_THROW(huge.value(), Error);
  EXPECT_EQ(huge.exponent(5), 1);
  EXPECT_EQ(Nat::parse(huge.str()), huge);

  Nat p = Nat::pair(BigNat(1) << 70, 3);
  auto [a, b] = decode_pair(p);
  EXPECT_EQ(a, BigNat(1) << 70);
  EXPECT_EQ(b, 3);
}

}  // namespace
}  // namespace pimodel
