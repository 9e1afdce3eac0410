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

// Reference evaluators kept independent of the main evaluator: arithmetic
// truth in the standard model, a plain second-order interpreter over finite
// models, and exhaustive injectivity scans of the number codings.
#ifndef PIMODEL_ORACLE_HPP_
#define PIMODEL_ORACLE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pimodel/arith.hpp"
#include "pimodel/semantics.hpp"

namespace pimodel {

enum class OracleMode { kBoundedExact, kCeilingApprox };

struct OracleConfig {
  // Range of unbounded first-order quantifiers in the approximate mode.
  std::uint64_t ceiling = 12;
  OracleMode mode = OracleMode::kBoundedExact;
};

struct ArithEnv {
  std::map<std::string, std::uint64_t> first;
  std::map<std::string, std::vector<std::vector<std::uint64_t>>> second;
};

// Exact mode rejects unbounded quantifiers. Approximate mode searches up to
// the ceiling: a universal is False on a counterexample and otherwise
// Unknown, an existential is True on a witness and otherwise Unknown, except
// that a quantifier whose guard pins its variable below a known value is
// decided exactly. `faithful` is set when the value is not Unknown.
Verdict eval_arith(const ArithPtr& f, const ArithEnv& env = {}, const OracleConfig& cfg = {});

// Straightforward interpreter: no shape shortcuts, no memo, operands in
// written order. Second-order quantifiers over more than 16 tuples raise.
Verdict brute_second_order(const FiniteModel& m, std::size_t w, const FormulaPtr& f, const Env& env = {});

enum class Codec { kLiteralPair, kProductPair, kLiteralSeq, kProductSeq };

std::string to_string(Codec c);

struct Collision {
  std::vector<std::uint64_t> first;
  std::vector<std::uint64_t> second;
  BigNat code;
};

struct ScanReport {
  Codec codec = Codec::kProductPair;
  std::uint64_t bound = 0;
  std::size_t checked = 0;
  // Ordered by code value.
  std::vector<Collision> collisions;
  bool injective() const { return collisions.empty(); }
};

// Pair codecs: all (x, y) with x, y < bound. Sequence codecs: strictly
// increasing sequences over {0..bound} of length at most max_length.
ScanReport injectivity_scan(Codec codec, std::uint64_t bound, std::size_t max_length = 4);

std::string to_json(const ScanReport& r);

}  // namespace pimodel

#endif  // PIMODEL_ORACLE_HPP_
