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

// Numeric codings of finite objects: pairs, strictly increasing sequences
// and tuples, all as exact arbitrary-precision naturals.

#ifndef PIMODEL_CODEC_HPP_
#define PIMODEL_CODEC_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pimodel {

using BigNat = boost::multiprecision::cpp_int;

// The i-th prime, counting from pi(0) = 2.
std::uint64_t prime(std::size_t i);

// 2^x * 3^y.
BigNat encode_pair(std::uint64_t x, std::uint64_t y);
std::pair<std::uint64_t, std::uint64_t> decode_pair(const BigNat& code);

// prod_i pi(i)^(s_i + 1); s must be strictly increasing.
BigNat encode_seq(const std::vector<std::uint64_t>& s);
std::vector<std::uint64_t> decode_seq(const BigNat& code);
// Non-throwing check of the sequence discipline.
bool is_seq_code(const BigNat& code);

// prod_i pi(i)^(t_i); arbitrary tuples of fixed, known length.
BigNat encode_tuple(const std::vector<std::uint64_t>& t);
std::vector<std::uint64_t> decode_tuple(const BigNat& code, std::size_t length);

// Literal sum codings, kept to exhibit their collisions.
BigNat literal_pair_code(std::uint64_t x, std::uint64_t y);
BigNat literal_seq_code(const std::vector<std::uint64_t>& s);

// Exponent of prime p in n (n > 0).
std::uint64_t valuation(BigNat n, std::uint64_t p);

std::string to_decimal(const BigNat& n);
BigNat from_decimal(const std::string& s);

// An exact natural that is kept as a product of prime powers once its value
// would exceed kMaxBits; codes such as 2^w * 3^(sequence code) are otherwise
// far too large to write out. The representation is canonical, so equality
// and ordering are structural.
class Nat {
 public:
  static constexpr double kMaxBits = 65536;

  Nat() = default;
  Nat(std::uint64_t v) : value_(v) {}  // NOLINT(runtime/explicit)
  Nat(BigNat v);                       // NOLINT(runtime/explicit)

  // prod p_k^(e_k) over distinct primes.
  static Nat product(std::vector<std::pair<std::uint64_t, BigNat>> factors);
  static Nat pair(const BigNat& x, const BigNat& y);

  bool factored() const { return !factors_.empty(); }
  // Exact value; throws if the number is kept factored.
  const BigNat& value() const;
  // Exponent of prime p.
  BigNat exponent(std::uint64_t p) const;
  // Prime factorization by trial division for small values; the stored
  // factors otherwise.
  std::vector<std::pair<std::uint64_t, BigNat>> factorization() const;

  // Decimal when small, otherwise "2^a*3^b*...".
  std::string str() const;
  static Nat parse(const std::string& s);

  bool operator==(const Nat& o) const { return value_ == o.value_ && factors_ == o.factors_; }
  bool operator<(const Nat& o) const;

 private:
  BigNat value_ = 0;
  std::vector<std::pair<std::uint64_t, BigNat>> factors_;  // sorted by prime
};

// Unpacks 2^x * 3^y.
std::pair<BigNat, BigNat> decode_pair(const Nat& code);

}  // namespace pimodel

#endif  // PIMODEL_CODEC_HPP_
