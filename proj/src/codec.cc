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

#include <cctype>
#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "pimodel/formula.hpp"

namespace pimodel {

std::uint64_t prime(std::size_t i) {
  static std::mutex mu;
  static std::vector<std::uint64_t> primes = {2};
  std::lock_guard<std::mutex> lock(mu);
  while (primes.size() <= i) {
    std::uint64_t c = primes.back() + 1;
    for (;; ++c) {
      bool is_prime = true;
      for (std::uint64_t p : primes) {
        if (p * p > c) break;
        if (c % p == 0) {
          is_prime = false;
          break;
        }
      }
      if (is_prime) break;
    }
    primes.push_back(c);
  }
  return primes[i];
}

namespace {

BigNat power(std::uint64_t base, std::uint64_t e) {
  BigNat r = 1;
  BigNat b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

}  // namespace

std::uint64_t valuation(BigNat n, std::uint64_t p) {
  if (n <= 0) throw Error("valuation of a non-positive number");
  std::uint64_t k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

BigNat encode_pair(std::uint64_t x, std::uint64_t y) { return power(2, x) * power(3, y); }

std::pair<std::uint64_t, std::uint64_t> decode_pair(const BigNat& code) {
  if (code <= 0) throw Error("malformed pair code " + to_decimal(code));
  BigNat n = code;
  std::uint64_t x = 0, y = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++x;
  }
  while (n % 3 == 0) {
    n /= 3;
    ++y;
  }
  if (n != 1) throw Error("malformed pair code " + to_decimal(code));
  return {x, y};
}

BigNat encode_seq(const std::vector<std::uint64_t>& s) {
  BigNat r = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && s[i] <= s[i - 1]) throw Error("sequence is not strictly increasing");
    r *= power(prime(i), s[i] + 1);
  }
  return r;
}

namespace {

std::optional<std::vector<std::uint64_t>> try_decode_seq(const BigNat& code) {
  if (code <= 0) return std::nullopt;
  BigNat n = code;
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; n != 1; ++i) {
    std::uint64_t p = prime(i);
    std::uint64_t k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k == 0) return std::nullopt;
    std::uint64_t v = k - 1;
    if (!out.empty() && v <= out.back()) return std::nullopt;
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> decode_seq(const BigNat& code) {
  auto r = try_decode_seq(code);
  if (!r) throw Error("malformed sequence code " + to_decimal(code));
  return *r;
}

bool is_seq_code(const BigNat& code) { return try_decode_seq(code).has_value(); }

BigNat encode_tuple(const std::vector<std::uint64_t>& t) {
  BigNat r = 1;
  for (std::size_t i = 0; i < t.size(); ++i) r *= power(prime(i), t[i]);
  return r;
}

std::vector<std::uint64_t> decode_tuple(const BigNat& code, std::size_t length) {
  if (code <= 0) throw Error("malformed tuple code " + to_decimal(code));
  BigNat n = code;
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < length; ++i) {
    std::uint64_t p = prime(i);
    std::uint64_t k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    out.push_back(k);
  }
  if (n != 1) throw Error("malformed tuple code " + to_decimal(code));
  return out;
}

BigNat literal_pair_code(std::uint64_t x, std::uint64_t y) { return power(2, x) + power(3, y); }

BigNat literal_seq_code(const std::vector<std::uint64_t>& s) {
  BigNat r = 0;
  for (std::size_t i = 0; i < s.size(); ++i) r += power(prime(i), s[i] + 1);
  return r;
}

std::string to_decimal(const BigNat& n) { return n.str(); }

BigNat from_decimal(const std::string& s) {
  if (s.empty()) throw Error("empty number");
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw Error("not a decimal natural: " + s);
  }
  return BigNat(s);
}

}  // namespace pimodel

namespace pimodel {

namespace {

double estimate_bits(const std::vector<std::pair<std::uint64_t, BigNat>>& factors) {
  double bits = 0;
  for (const auto& [p, e] : factors) bits += std::log2(static_cast<double>(p)) * e.convert_to<double>();
  return bits;
}

BigNat big_power(std::uint64_t base, const BigNat& e) {
  return power(base, e.convert_to<std::uint64_t>());
}

}  // namespace

Nat::Nat(BigNat v) : value_(std::move(v)) {
  if (value_ < 0) throw Error("negative natural");
}

Nat Nat::product(std::vector<std::pair<std::uint64_t, BigNat>> factors) {
  std::sort(factors.begin(), factors.end());
  std::vector<std::pair<std::uint64_t, BigNat>> merged;
  for (auto& f : factors) {
    if (f.second == 0) continue;
    if (!merged.empty() && merged.back().first == f.first) {
      merged.back().second += f.second;
    } else {
      merged.push_back(std::move(f));
    }
  }
  Nat n;
  if (estimate_bits(merged) > kMaxBits) {
    n.factors_ = std::move(merged);
    return n;
  }
  BigNat v = 1;
  for (const auto& [p, e] : merged) v *= big_power(p, e);
  n.value_ = v;
  return n;
}

Nat Nat::pair(const BigNat& x, const BigNat& y) { return product({{2, x}, {3, y}}); }

const BigNat& Nat::value() const {
  if (factored()) throw Error("code too large to expand: " + str());
  return value_;
}

std::vector<std::pair<std::uint64_t, BigNat>> Nat::factorization() const {
  if (factored()) return factors_;
  if (value_ == 0) throw Error("zero has no factorization");
  std::vector<std::pair<std::uint64_t, BigNat>> out;
  BigNat n = value_;
  for (std::size_t i = 0; n != 1; ++i) {
    std::uint64_t p = prime(i);
    if (BigNat(p) * p > n) {
      if (n > std::numeric_limits<std::uint64_t>::max()) throw Error("cannot factor " + value_.str());
      out.push_back({n.convert_to<std::uint64_t>(), 1});
      break;
    }
    BigNat k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k > 0) out.push_back({p, k});
    if (i > 100000) throw Error("cannot factor " + value_.str());
  }
  return out;
}

BigNat Nat::exponent(std::uint64_t p) const {
  if (factored()) {
    for (const auto& [q, e] : factors_) {
      if (q == p) return e;
    }
    return 0;
  }
  if (value_ == 0) throw Error("exponent of zero");
  return valuation(value_, p);
}

std::string Nat::str() const {
  if (!factored()) return value_.str();
  std::string out;
  for (const auto& [p, e] : factors_) {
    if (!out.empty()) out += "*";
    out += std::to_string(p) + "^" + e.str();
  }
  return out;
}

Nat Nat::parse(const std::string& s) {
  if (s.find('^') == std::string::npos) return Nat(from_decimal(s));
  std::vector<std::pair<std::uint64_t, BigNat>> factors;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t star = s.find('*', pos);
    std::string part = s.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
    std::size_t caret = part.find('^');
    if (caret == std::string::npos) throw Error("malformed factored natural: " + s);
    BigNat base = from_decimal(part.substr(0, caret));
    if (base > 1000000) throw Error("malformed factored natural: " + s);
    factors.push_back({base.convert_to<std::uint64_t>(), from_decimal(part.substr(caret + 1))});
    if (star == std::string::npos) break;
    pos = star + 1;
  }
  return product(std::move(factors));
}

bool Nat::operator<(const Nat& o) const {
  if (factored() != o.factored()) return !factored();
  if (!factored()) return value_ < o.value_;
  return factors_ < o.factors_;
}

std::pair<BigNat, BigNat> decode_pair(const Nat& code) {
  if (!code.factored()) {
    auto [x, y] = decode_pair(code.value());
    return {BigNat(x), BigNat(y)};
  }
  BigNat x = 0, y = 0;
  for (const auto& [p, e] : code.factorization()) {
    if (p == 2) {
      x = e;
    } else if (p == 3) {
      y = e;
    } else {
      throw Error("malformed pair code " + code.str());
    }
  }
  return {x, y};
}

}  // namespace pimodel
