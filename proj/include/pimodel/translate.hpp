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

// The Fregean translation from relational arithmetic into the modal language,
// numeral formulas, the modalized Robinson axioms and induction instances.
#ifndef PIMODEL_TRANSLATE_HPP_
#define PIMODEL_TRANSLATE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pimodel/arith.hpp"
#include "pimodel/formula.hpp"

namespace pimodel {

struct TranslationOutput {
  FormulaPtr formula;
  // The natural-number predicate in the variable "x".
  FormulaPtr domain_formula;
  std::map<std::string, std::string> free_var_map;
  // Set when the input quantifies over relations.
  bool beyond_first_order = false;
};

// Requires unnested input.
TranslationOutput fregean(const ArithPtr& f);

// Rewrites every successor subformula into the alternative form that adds
// a fresh element to a set.
FormulaPtr with_successor_alt(const FormulaPtr& f);

// sigma_0(x) = (x = #{}); sigma_{n+1}(x) = <>Ey(N y & sigma_n(y) & S y x).
FormulaPtr sigma(std::uint64_t n, const std::string& var = "x");

// Box Ax1(N x1 -> Ax2(N x2 -> ... body)).
FormulaPtr all_n_many(const std::vector<std::string>& vars, FormulaPtr body, NameSupply& names);

struct NamedFormula {
  std::string name;
  FormulaPtr formula;
};

// S1, S2, A1, A2, M1, M2, Z1, Q1-Q6.
std::vector<NamedFormula> axiom_suite();

// [phi(0) & Box Ax,y in N(phi(x) & S x y -> phi(y))] -> Box Ax in N phi(x).
FormulaPtr induction_instance(const FormulaPtr& phi, const std::string& var);

}  // namespace pimodel

#endif  // PIMODEL_TRANSLATE_HPP_
