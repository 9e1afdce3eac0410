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

// First-order relational arithmetic: atoms =, zero, S, plus, times over
// variables (and numeral literals before unnesting), optional second-order
// quantifiers and applications, and numeral-bounded quantifiers.

#ifndef PIMODEL_ARITH_HPP_
#define PIMODEL_ARITH_HPP_

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pimodel/formula.hpp"
#include "pimodel/parse.hpp"

namespace pimodel {

enum class ArithKind {
  kEq,     // (= a b)
  kZero,   // (zero a)
  kS,      // (S a b): b = a + 1
  kPlus,   // (plus a b c): a + b = c
  kTimes,  // (times a b c): a * b = c
  kApp,    // (app X a ...)
  kNot,
  kAnd,
  kOr,
  kImplies,
  kIff,
  kAll,
  kEx,
  kAllLe,  // (allle x n f): every x <= n
  kExLe,   // (exle x n f): some x <= n
  kAllSecond,
  kExSecond,
};

struct ArithArg {
  bool numeral = false;
  std::string name;
  std::uint64_t value = 0;

  bool operator==(const ArithArg&) const = default;
};

struct ArithFormula;
using ArithPtr = std::shared_ptr<const ArithFormula>;

struct ArithFormula {
  ArithKind kind = ArithKind::kEq;
  std::vector<ArithArg> args;  // atoms
  std::string set_name;        // kApp
  ArithPtr lhs;
  ArithPtr rhs;
  std::string var;             // quantifiers
  int arity = 0;               // second-order quantifiers and kApp
  std::uint64_t bound = 0;     // bounded quantifiers

  bool is_atom() const { return kind <= ArithKind::kApp; }
};

ArithArg AVar(std::string name);
ArithArg ANum(std::uint64_t value);

ArithPtr AEq(ArithArg a, ArithArg b);
ArithPtr AZero(ArithArg a);
ArithPtr AS(ArithArg a, ArithArg b);
ArithPtr APlus(ArithArg a, ArithArg b, ArithArg c);
ArithPtr ATimes(ArithArg a, ArithArg b, ArithArg c);
ArithPtr AApp(std::string set, std::vector<ArithArg> args);
ArithPtr ANot(ArithPtr f);
ArithPtr AAnd(ArithPtr l, ArithPtr r);
ArithPtr AOr(ArithPtr l, ArithPtr r);
ArithPtr AImplies(ArithPtr l, ArithPtr r);
ArithPtr AIff(ArithPtr l, ArithPtr r);
ArithPtr AAll(std::string v, ArithPtr f);
ArithPtr AEx(std::string v, ArithPtr f);
ArithPtr AAllLe(std::string v, std::uint64_t bound, ArithPtr f);
ArithPtr AExLe(std::string v, std::uint64_t bound, ArithPtr f);
ArithPtr AAllSecond(std::string v, int arity, ArithPtr f);
ArithPtr AExSecond(std::string v, int arity, ArithPtr f);

ArithPtr parse_arith(std::string_view text);
ArithPtr parse_arith(const Sexp& node);
std::string render(const ArithPtr& f);

FreeVars free_vars(const ArithPtr& f);
bool alpha_equal(const ArithPtr& f, const ArithPtr& g);
bool has_second_order(const ArithPtr& f);

// tau_0(x) = zero(x); tau_{n+1}(x) = Ey(tau_n(y) & S(y,x)).
ArithPtr tau(std::uint64_t n, const std::string& var, NameSupply& names);
ArithPtr tau(std::uint64_t n, const std::string& var = "x");

// True when no numeral literal and no bounded quantifier remains.
bool is_unnested(const ArithPtr& f);

// Removes numeral literals (via tau chains) and bounded quantifiers
// (x <= n becomes Em(tau_n(m) & Ed plus(x,d,m))).
ArithPtr unnest(const ArithPtr& f);

}  // namespace pimodel

#endif  // PIMODEL_ARITH_HPP_
