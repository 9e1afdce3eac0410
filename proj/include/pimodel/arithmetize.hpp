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

// Arithmetization of modal formulas into first-order arithmetic over a coded
// model, and an evaluator for the resulting formulas on a concrete coded
// model.
#ifndef PIMODEL_ARITHMETIZE_HPP_
#define PIMODEL_ARITHMETIZE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pimodel/formula.hpp"
#include "pimodel/model.hpp"

namespace pimodel {

enum class CKind {
  kEq,       // a = b
  kCard,     // #_M(Y, x)
  kElemAt,   // x = [Y]_u
  kWorld,    // W_M(s)
  kAcc,      // R_M(w, s)
  kDom,      // D_M(w, Y)
  kSeq,      // Seq(Y)
  kNSeq,     // nSeq(P)
  kSub,      // Y in sb(X)
  kTupleIn,  // (x1, ..., xn) in P
  kWithin,   // every coordinate of every tuple of P occurs in X
  kNot,
  kAnd,
  kOr,
  kImplies,
  kIff,
  kAll,
  kEx,
};

struct CArg {
  bool literal = false;
  std::string name;
  std::uint64_t value = 0;
};

struct CFormula;
using CPtr = std::shared_ptr<const CFormula>;

struct CFormula {
  CKind kind = CKind::kEq;
  std::vector<CArg> args;
  int arity = 0;  // kNSeq
  CPtr lhs;
  CPtr rhs;
  std::string var;
  // kEx over a set code fixed by a membership definition: the only code
  // that can satisfy the body. Only an evaluation hint.
  bool defined = false;
  std::string def_var;
  CPtr def_guard;
  CPtr def_body;
};

// The world parameter of the output is "w".
CPtr arithmetize(const FormulaPtr& f);

std::string render(const CPtr& f);
std::set<std::string> free_vars(const CPtr& f);

// Evaluates arithmetized formulas over a coded model. Quantifiers take their
// candidates from the guard they carry; a quantifier without a recognizable
// guard is an error. Needs at most 8 distinct domain elements.
class CodedEvaluator {
 public:
  explicit CodedEvaluator(const CodedModel& c);
  ~CodedEvaluator();
  CodedEvaluator(const CodedEvaluator&) = delete;
  CodedEvaluator& operator=(const CodedEvaluator&) = delete;

  // `world` is an index into the coded world list; env gives elements.
  bool holds(const CPtr& f, std::size_t world, const std::map<std::string, Element>& env = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pimodel

#endif  // PIMODEL_ARITHMETIZE_HPP_
