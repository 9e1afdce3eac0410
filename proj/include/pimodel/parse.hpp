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

// S-expression reader and the formula parser.

#ifndef PIMODEL_PARSE_HPP_
#define PIMODEL_PARSE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "pimodel/formula.hpp"

namespace pimodel {

struct Sexp {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexp> items;
  int line = 1;
  int column = 1;

  std::string where() const;
};

// Reads exactly one s-expression; trailing input other than whitespace and
// `;` comments is an error.
Sexp read_sexp(std::string_view text);

// Throws Error with the position of the node.
[[noreturn]] void fail_at(const Sexp& node, const std::string& message);

FormulaPtr parse_formula(std::string_view text);
FormulaPtr parse_formula(const Sexp& node);

}  // namespace pimodel

#endif  // PIMODEL_PARSE_HPP_
