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

// Abstract syntax of the second-order modal language with the cardinality
// operator (the octothorpe), plus the structural utilities every other module
// leans on: free variables, alpha-equivalence, substitution, rendering.

#ifndef PIMODEL_FORMULA_HPP_
#define PIMODEL_FORMULA_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pimodel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term;
struct SetExpr;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using SetPtr = std::shared_ptr<const SetExpr>;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class TermKind { kVar, kZero, kCard };

struct Term {
  TermKind kind = TermKind::kVar;
  std::string name;  // kVar
  SetPtr set;        // kCard
};

enum class SetKind {
  kVar,       // X (any arity)
  kEmpty,     // {}
  kUnion,     // lhs u rhs
  kMinus,     // lhs - {term}
  kPlus1,     // lhs u {term}
  kSect,      // {y | lhs term y}, lhs binary
  kBigUSect,  // U_{x in rhs} {y | lhs x y}, lhs binary
};

struct SetExpr {
  SetKind kind = SetKind::kVar;
  std::string name;  // kVar
  int arity = 1;     // kVar
  SetPtr lhs;
  SetPtr rhs;
  TermPtr term;

  // Arity of the relation this expression denotes.
  int result_arity() const { return kind == SetKind::kVar ? arity : 1; }
};

enum class FormulaKind {
  kEq,
  kApp,
  kNot,
  kAnd,
  kOr,
  kImplies,
  kIff,
  kBox,
  kDia,
  kAllFirst,
  kExFirst,
  kAllSecond,
  kExSecond,
};

struct Formula {
  FormulaKind kind = FormulaKind::kEq;
  TermPtr lhs_term;  // kEq
  TermPtr rhs_term;  // kEq
  SetPtr set;        // kApp
  std::vector<TermPtr> args;  // kApp
  FormulaPtr lhs;    // connectives; body of modalities and quantifiers
  FormulaPtr rhs;    // binary connectives
  std::string var;   // quantifiers
  int arity = 0;     // second-order quantifiers

  bool is_binary() const {
    return kind == FormulaKind::kAnd || kind == FormulaKind::kOr ||
           kind == FormulaKind::kImplies || kind == FormulaKind::kIff;
  }
  bool is_quantifier() const {
    return kind == FormulaKind::kAllFirst || kind == FormulaKind::kExFirst ||
           kind == FormulaKind::kAllSecond || kind == FormulaKind::kExSecond;
  }
  bool is_second_order_quantifier() const {
    return kind == FormulaKind::kAllSecond || kind == FormulaKind::kExSecond;
  }
};

// Term constructors.
TermPtr Var(std::string name);
TermPtr Zero();
TermPtr Card(SetPtr set);

// Set-expression constructors. Operand arities are checked eagerly.
SetPtr SetVar(std::string name, int arity = 1);
SetPtr EmptySet();
SetPtr UnionOf(SetPtr l, SetPtr r);
SetPtr MinusOne(SetPtr s, TermPtr u);
SetPtr PlusOne(SetPtr s, TermPtr u);
SetPtr Section(SetPtr p, TermPtr x);
SetPtr BigUnionSection(SetPtr p, SetPtr over);

// Formula constructors.
FormulaPtr Eq(TermPtr l, TermPtr r);
FormulaPtr App(SetPtr s, std::vector<TermPtr> args);
FormulaPtr Not(FormulaPtr f);
FormulaPtr And(FormulaPtr l, FormulaPtr r);
FormulaPtr Or(FormulaPtr l, FormulaPtr r);
FormulaPtr Implies(FormulaPtr l, FormulaPtr r);
FormulaPtr Iff(FormulaPtr l, FormulaPtr r);
FormulaPtr Box(FormulaPtr f);
FormulaPtr Dia(FormulaPtr f);
FormulaPtr ForallFirst(std::string v, FormulaPtr f);
FormulaPtr ExistsFirst(std::string v, FormulaPtr f);
FormulaPtr ForallSecond(std::string v, int arity, FormulaPtr f);
FormulaPtr ExistsSecond(std::string v, int arity, FormulaPtr f);

// Right-nested conjunction; requires a non-empty list.
FormulaPtr AndAll(const std::vector<FormulaPtr>& fs);

struct FreeVars {
  std::set<std::string> first;
  std::map<std::string, int> second;  // name -> arity

  bool empty() const { return first.empty() && second.empty(); }
  bool operator==(const FreeVars&) const = default;
};

FreeVars free_vars(const FormulaPtr& f);
FreeVars free_vars(const TermPtr& t);
FreeVars free_vars(const SetPtr& s);

// Every variable name occurring anywhere (bound or free).
std::set<std::string> all_names(const FormulaPtr& f);

// Deterministic source of fresh variable names. Generated names have the
// shape `base.N`, which the parser accepts as an identifier.
class NameSupply {
 public:
  NameSupply() = default;
  // Names in `reserved` are never produced.
  explicit NameSupply(std::set<std::string> reserved) : reserved_(std::move(reserved)) {}

  std::string fresh(std::string_view base, const std::set<std::string>& avoid = {});

 private:
  std::set<std::string> reserved_;
  std::size_t next_ = 0;
};

// Structural equality up to renaming of bound variables.
bool alpha_equal(const FormulaPtr& f, const FormulaPtr& g);
bool alpha_equal(const TermPtr& a, const TermPtr& b);

// Capture-avoiding substitution of a first-order variable by a term.
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& t);

// Structural node count; used for cost reporting.
std::size_t size(const FormulaPtr& f);

std::string render(const TermPtr& t);
std::string render(const SetPtr& s);
// Canonical s-expression. Recognized natural-number guards are printed with
// the (N t), (allN x f) and (exN x f) sugar.
std::string render(const FormulaPtr& f);

}  // namespace pimodel

#endif  // PIMODEL_FORMULA_HPP_
