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

// Syntactic classification and the set-shorthand expansion.

#ifndef PIMODEL_CLASSIFY_HPP_
#define PIMODEL_CLASSIFY_HPP_

#include "pimodel/formula.hpp"

namespace pimodel {

struct FormulaMeta {
  bool is_inductive = false;
  bool is_unnested = false;
  // Largest number of box operators on one path through the formula, not
  // counting those inside recognized definitions (successor, addition,
  // multiplication, closures, the natural-number predicate).
  int demand = 0;
  int modal_depth = 0;
};

FormulaMeta classify(const FormulaPtr& f);

bool is_inductive(const FormulaPtr& f);
bool is_inductive_term(const TermPtr& t);
int demand(const FormulaPtr& f);
int modal_depth(const FormulaPtr& f);

// Replaces every composite set expression inside an atom by a fresh
// second-order variable H bound as Ex H (Az(Hz <-> definition) & atom[H]).
FormulaPtr expand_set_shorthand(const FormulaPtr& f);

}  // namespace pimodel

#endif  // PIMODEL_CLASSIFY_HPP_
