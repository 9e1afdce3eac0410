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

// The definitional vocabulary built on top of the octothorpe: successor (both
// forms), addition, multiplication, the ancestral, the natural-number
// predicate and its guarded quantifiers. Each builder has a matching
// recognizer so later passes can find the definitions again after they have
// been expanded into plain syntax.

#ifndef PIMODEL_SHAPES_HPP_
#define PIMODEL_SHAPES_HPP_

#include <functional>
#include <optional>
#include <string>

#include "pimodel/formula.hpp"

namespace pimodel {

// <>EG,u[Gu & y=#G & x=#(G-{u})]
FormulaPtr successor(TermPtr x, TermPtr y, NameSupply& names);
// <>EF,u[~Fu & x=#F & y=#(F u {u})]
FormulaPtr successor_alt(TermPtr x, TermPtr y, NameSupply& names);
// <>EX,Y(a=#X & b=#Y & c=#(X u Y) & Az~(Xz & Yz))
FormulaPtr plus(TermPtr a, TermPtr b, TermPtr c, NameSupply& names);
// <>EX,P[#X=b & Ax(Xx -> #{y|Pxy}=a) & disjoint sections & #U{y|Pxy}=c]
FormulaPtr times(TermPtr a, TermPtr b, TermPtr c, NameSupply& names);

// Builds phi(s, t) for fresh or given argument terms.
using RelationBuilder = std::function<FormulaPtr(TermPtr, TermPtr, NameSupply&)>;

// AX[(Ax,y(Xx & phi(x,y) -> Xy) & Ax(phi(a,x) -> Xx)) -> Xb]
FormulaPtr strong_ancestral(const RelationBuilder& phi, TermPtr a, TermPtr b,
                            NameSupply& names);
// phi^+(a,b) | a=b
FormulaPtr weak_ancestral(const RelationBuilder& phi, TermPtr a, TermPtr b,
                          NameSupply& names);
// S^{+=}(0,t) & Ey(y=0)
FormulaPtr natural(TermPtr t, NameSupply& names);
// [](Ax(N x -> body))
FormulaPtr all_n(const std::string& var, FormulaPtr body, NameSupply& names);
// <>(Ex(N x & body))
FormulaPtr ex_n(const std::string& var, FormulaPtr body, NameSupply& names);

struct BinaryMatch {
  TermPtr first;
  TermPtr second;
};

struct TernaryMatch {
  TermPtr a;
  TermPtr b;
  TermPtr c;
};

// Least-closure shape: AX[(Ax,y(Xx & step -> Xy) & Az(start -> Xz)) -> X target].
// The step and start formulas may be arbitrary as long as they do not
// mention X; the shape is true exactly when target lies in the closure of
// the start set under step inside the current domain.
struct ClosureMatch {
  std::string set_var;
  std::string step_from;
  std::string step_to;
  FormulaPtr step;
  std::string start_var;
  FormulaPtr start;
  TermPtr target;
};

struct GuardMatch {
  std::string var;
  FormulaPtr body;
};

std::optional<BinaryMatch> match_successor(const FormulaPtr& f);
std::optional<BinaryMatch> match_successor_alt(const FormulaPtr& f);
std::optional<TernaryMatch> match_plus(const FormulaPtr& f);
std::optional<TernaryMatch> match_times(const FormulaPtr& f);
std::optional<ClosureMatch> match_closure(const FormulaPtr& f);
// Returns the argument of a natural-number predicate built by `natural`.
std::optional<TermPtr> match_natural(const FormulaPtr& f);
std::optional<GuardMatch> match_all_n(const FormulaPtr& f);
std::optional<GuardMatch> match_ex_n(const FormulaPtr& f);

}  // namespace pimodel

#endif  // PIMODEL_SHAPES_HPP_
