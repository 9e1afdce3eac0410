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

// Kripke evaluation over finite models: actualist first-order quantifiers,
// full powerset second-order quantifiers, rigid octothorpe, and structural
// fast paths for the definitional shapes.

#ifndef PIMODEL_SEMANTICS_HPP_
#define PIMODEL_SEMANTICS_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pimodel/formula.hpp"
#include "pimodel/model.hpp"

namespace pimodel {

using Tuple = std::vector<Element>;

struct Env {
  std::map<std::string, Element> first;
  std::map<std::string, std::vector<Tuple>> second;
};

enum class Truth { kFalse, kTrue, kUnknown };

std::string to_string(Truth t);

struct Verdict {
  Truth value = Truth::kUnknown;
  bool faithful = false;
};

struct EvalOptions {
  // Route the definitional shapes (successor, addition, multiplication,
  // closures) to their direct characterizations.
  bool fast_paths = true;
  // Second-order quantifiers may enumerate at most 2^max_bits relations.
  int max_bits = 24;
};

// Two-valued result on the finite structure plus whether some possibility
// search came back empty in an open model.
struct RawResult {
  bool value = false;
  bool boundary = false;
};

class Evaluator {
 public:
  explicit Evaluator(const FiniteModel& m, EvalOptions opts = {});
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  const FiniteModel& model() const { return model_; }

  RawResult raw(std::size_t w, const FormulaPtr& f, const Env& env = {});
  bool holds(std::size_t w, const FormulaPtr& f, const Env& env = {}) { return raw(w, f, env).value; }
  Verdict eval(std::size_t w, const FormulaPtr& f, const Env& env = {});

 private:
  struct Impl;
  const FiniteModel& model_;
  std::unique_ptr<Impl> impl_;
};

// One-shot helpers.
Verdict eval(const FiniteModel& m, std::size_t w, const Env& env, const FormulaPtr& f);
bool holds_N(const FiniteModel& m, std::size_t w, Element x);
// The extension of the natural-number predicate at w.
ElementSet naturals_at(const FiniteModel& m, std::size_t w);
// {a_0, ..., a_{n-1}} with n least such that a_n is missing from dom(w).
ElementSet naturals_expected(const FiniteModel& m, std::size_t w);

bool ancestral_fast(const FiniteModel& m, std::size_t w, const std::vector<std::pair<Element, Element>>& rel,
                    Element a, Element b, bool weak);

struct Witness {
  std::optional<BigNat> world;  // offending accessible world
  std::map<std::string, Element> env;
  std::string note;
};

struct WorldVerdict {
  BigNat world;
  Truth value = Truth::kUnknown;
  bool faithful = false;
  std::optional<Witness> witness;
};

// Per-formula report.
struct SuiteReport {
  std::string name;
  std::string formula;
  std::vector<WorldVerdict> per_world;
  bool pass = false;
};

struct CheckOptions {
  EvalOptions eval;
  // Free first-order variables; each ranges over the domain of the world
  // being checked.
  std::vector<std::string> free_first;
  // Restrict to worlds of the truncation whose domain has at most this many
  // elements (0: no limit).
  std::size_t max_domain = 0;
};

SuiteReport check_valid(const FiniteModel& m, const FormulaPtr& f, const CheckOptions& opts = {});
SuiteReport check_valid(Evaluator& ev, const FormulaPtr& f, const CheckOptions& opts = {});

// For every truncation world w and every assignment of `vars` to elements of
// dom(w): if f is true at w it stays true at every accessible world.
SuiteReport check_stability(const FiniteModel& m, const FormulaPtr& f, const std::vector<std::string>& vars);
SuiteReport check_stability(Evaluator& ev, const FormulaPtr& f, const std::vector<std::string>& vars);

std::string to_json(const SuiteReport& r);

}  // namespace pimodel

#endif  // PIMODEL_SEMANTICS_HPP_
