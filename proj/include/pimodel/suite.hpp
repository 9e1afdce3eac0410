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

// Named verification suites over model truncations and their reports.
#ifndef PIMODEL_SUITE_HPP_
#define PIMODEL_SUITE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pimodel/arith.hpp"
#include "pimodel/formula.hpp"
#include "pimodel/model.hpp"
#include "pimodel/semantics.hpp"

namespace pimodel {

struct SuiteSpec {
  std::string suite;
  // minimal | subset | swap:i,j | custom:<file.json>
  std::string model = "minimal";
  // Defaults depend on suite and family; see default_horizon.
  std::optional<std::uint64_t> horizon;
  // Hume suite: largest world domain checked (default 4).
  std::optional<std::size_t> max_domain;
  std::uint64_t seed = 0;
  // Size of the last extension world; defaults to horizon^2 + 1.
  std::optional<std::uint64_t> extension;
};

struct CheckResult {
  std::string name;
  std::string statement;
  // The check succeeds by reproducing a documented failure.
  bool expected_failure = false;
  bool pass = false;
  std::vector<std::string> notes;
  std::optional<SuiteReport> report;
};

struct RunReport {
  std::string suite;
  std::string model;
  std::optional<std::uint64_t> horizon;
  std::optional<std::size_t> max_domain;
  std::uint64_t seed = 0;
  std::string commit;
  std::vector<CheckResult> checks;
  bool pass = false;
  // 0: all checks pass, 1: a violation, 2: configuration or cost error.
  int exit_code = 2;
  std::string error;
};

const std::vector<std::string>& suite_names();
std::uint64_t default_horizon(const std::string& suite, const std::string& model);
FiniteModel build_model(const SuiteSpec& spec);

RunReport run_suite(const SuiteSpec& spec);
std::string describe(const std::string& suite);

std::string to_json(const RunReport& r);
std::string to_text(const RunReport& r);

// Seeded corpora; both deterministic for a given seed.
std::vector<FormulaPtr> inductive_corpus(std::uint64_t seed, std::size_t count);
std::vector<ArithPtr> bounded_sentence_corpus(std::uint64_t seed, std::size_t count);

FormulaPtr hume_principle();
std::string commit_id();

}  // namespace pimodel

#endif  // PIMODEL_SUITE_HPP_
