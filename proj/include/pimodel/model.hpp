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

// Potentially infinite Kripke models: the three concrete families, finite
// truncations with an optional cofinal extension chain, validation of the
// model conditions, JSON serialization and the numeric model codes.

#ifndef PIMODEL_MODEL_HPP_
#define PIMODEL_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pimodel/codec.hpp"

namespace pimodel {

using Element = std::uint64_t;
using ElementSet = std::vector<Element>;  // sorted, duplicate-free

enum class FamilyKind { kMinimal, kSubset, kSwap };

// A lazily described model. Worlds of the chain families (minimal, swap) are
// named {n}; worlds of the subset family are named by their members.
class ModelFamily {
 public:
  using World = std::vector<Element>;

  ModelFamily(FamilyKind kind, Element i = 0, Element j = 0);

  FamilyKind kind() const { return kind_; }
  std::string name() const;
  bool is_chain() const { return kind_ != FamilyKind::kSubset; }

  ElementSet domain(const World& w) const;
  bool accessible(const World& w, const World& s) const;
  // A world accessible from both.
  World join(const World& w, const World& s) const;
  Element numbering(std::uint64_t n) const { return n; }
  BigNat world_id(const World& w) const;
  // Chain families: worlds 0..bound. Subset family: the nonempty subsets of
  // {0..bound}, ordered by size and then lexicographically.
  std::vector<World> worlds(std::uint64_t bound) const;

 private:
  FamilyKind kind_;
  Element swap_i_ = 0;
  Element swap_j_ = 0;
};

ModelFamily minimal_family();
ModelFamily subset_family();
ModelFamily swap_family(Element i, Element j);
// "minimal", "subset" or "swap:i,j".
ModelFamily family_by_name(const std::string& name);

struct TruncationSpec {
  // Chain families: worlds 0..horizon. Subset family: base set {0..horizon}.
  std::uint64_t horizon = 6;
  // Domain size of the last world of the extension chain placed above the
  // truncation; 0 or anything not above the truncation means no extension.
  std::uint64_t extension = 0;
  // Explicit world selection; replaces the horizon and disables extension.
  std::optional<std::vector<ModelFamily::World>> worlds;
};

struct FiniteModel {
  std::string family = "custom";
  // Family-derived models stand for an infinite model; evaluation may then
  // report Unknown. Custom models are taken as they are.
  bool open = false;
  std::vector<BigNat> world_ids;
  // Worlds [0, truncated) are the truncation; the rest is the extension.
  std::size_t truncated = 0;
  std::vector<std::vector<char>> acc;
  std::vector<ElementSet> dom;
  // a(0), a(1), ...
  std::vector<Element> numbering;
  // Optional explicit octothorpe values that take precedence over a(|X|).
  std::vector<std::pair<ElementSet, Element>> octo_table;
  // Longest strict accessibility chain inside the truncation; -1 for
  // extension worlds.
  std::vector<int> rank;

  std::size_t size() const { return world_ids.size(); }
  bool in_truncation(std::size_t w) const { return w < truncated; }
  int horizon_rank(std::size_t w) const { return rank.at(w); }
  Element a(std::size_t n) const;
  Element octo(const ElementSet& set) const;
  std::size_t index_of(const BigNat& id) const;
  // Indices of the worlds accessible from w (w included), in index order.
  std::vector<std::size_t> successors(std::size_t w) const;
  // Every element occurring in some domain or as a numbering value.
  ElementSet universe() const;
  ElementSet domain_union() const;
};

FiniteModel truncate(const ModelFamily& fam, const TruncationSpec& spec);

// Recomputes ranks; used after building a custom model by hand.
void compute_ranks(FiniteModel& m);

enum class CheckStatus { kPass, kFail, kNotCheckable };

struct ConditionCheck {
  std::string condition;
  CheckStatus status = CheckStatus::kPass;
  std::string detail;  // witness on failure
};

struct PiReport {
  std::vector<ConditionCheck> checks;

  bool ok() const;
  const ConditionCheck* find(const std::string& condition) const;
};

PiReport validate_pi(const FiniteModel& m);

std::string to_json(const FiniteModel& m);
FiniteModel finite_model_from_json(const std::string& text);

// Numeric codes of a model. Worlds are numbered 0..n-1 in model order; pairs
// are 2^x 3^y; domains are coded as pairs (w, sequence code); the numbering
// as pairs (n, a(n)).
struct CodedModel {
  std::vector<Nat> worlds;
  std::vector<Nat> access;
  std::vector<Nat> domains;
  std::vector<Nat> numbering;
  std::vector<Nat> octo_table;  // pairs (sequence code, value)
  // Not part of the arithmetic content; restores the original world names.
  std::vector<BigNat> world_ids;
  std::size_t truncated = 0;
  std::string family;
  bool open = false;

  bool operator==(const CodedModel&) const = default;
};

CodedModel encode_model(const FiniteModel& m);
FiniteModel decode_model(const CodedModel& c);
std::string to_json(const CodedModel& c);
CodedModel coded_model_from_json(const std::string& text);

}  // namespace pimodel

#endif  // PIMODEL_MODEL_HPP_
