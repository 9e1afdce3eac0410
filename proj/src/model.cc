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

#include "pimodel/model.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pimodel/formula.hpp"

namespace pimodel {

using json = nlohmann::json;

ModelFamily::ModelFamily(FamilyKind kind, Element i, Element j) : kind_(kind), swap_i_(i), swap_j_(j) {
  if (kind == FamilyKind::kSwap && i == j) {
    throw Error("swap(" + std::to_string(i) + "," + std::to_string(j) + ") is not a transposition");
  }
}

std::string ModelFamily::name() const {
  switch (kind_) {
    case FamilyKind::kMinimal:
      return "minimal";
    case FamilyKind::kSubset:
      return "subset";
    case FamilyKind::kSwap:
      return "swap:" + std::to_string(swap_i_) + "," + std::to_string(swap_j_);
  }
  return "?";
}

namespace {

std::uint64_t chain_index(const ModelFamily::World& w) {
  if (w.size() != 1) throw Error("chain worlds are named by a single index");
  return w[0];
}

ElementSet sorted(ElementSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

bool subset_of(const ElementSet& a, const ElementSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string show(const ElementSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

}  // namespace

ElementSet ModelFamily::domain(const World& w) const {
  if (kind_ == FamilyKind::kSubset) {
    if (w.empty()) throw Error("subset-model worlds are nonempty");
    return sorted(w);
  }
  std::uint64_t n = chain_index(w);
  ElementSet out;
  for (Element e = 0; e <= n; ++e) {
    Element v = e;
    if (kind_ == FamilyKind::kSwap) {
      if (e == swap_i_) {
        v = swap_j_;
      } else if (e == swap_j_) {
        v = swap_i_;
      }
    }
    out.push_back(v);
  }
  return sorted(out);
}

bool ModelFamily::accessible(const World& w, const World& s) const {
  if (kind_ == FamilyKind::kSubset) return subset_of(sorted(w), sorted(s));
  return chain_index(w) <= chain_index(s);
}

ModelFamily::World ModelFamily::join(const World& w, const World& s) const {
  if (kind_ == FamilyKind::kSubset) {
    ElementSet out = w;
    out.insert(out.end(), s.begin(), s.end());
    return sorted(out);
  }
  return {std::max(chain_index(w), chain_index(s))};
}

BigNat ModelFamily::world_id(const World& w) const {
  if (kind_ == FamilyKind::kSubset) return encode_seq(sorted(w));
  return chain_index(w);
}

std::vector<ModelFamily::World> ModelFamily::worlds(std::uint64_t bound) const {
  std::vector<World> out;
  if (kind_ != FamilyKind::kSubset) {
    for (std::uint64_t n = 0; n <= bound; ++n) out.push_back({n});
    return out;
  }
  if (bound > 20) throw Error("subset base too large");
  std::uint64_t count = bound + 1;
  for (std::uint64_t mask = 1; mask < (1ULL << count); ++mask) {
    World w;
    for (std::uint64_t e = 0; e < count; ++e) {
      if (mask >> e & 1) w.push_back(e);
    }
    out.push_back(w);
  }
  std::stable_sort(out.begin(), out.end(), [](const World& a, const World& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

ModelFamily minimal_family() { return ModelFamily(FamilyKind::kMinimal); }
ModelFamily subset_family() { return ModelFamily(FamilyKind::kSubset); }
ModelFamily swap_family(Element i, Element j) { return ModelFamily(FamilyKind::kSwap, i, j); }

ModelFamily family_by_name(const std::string& name) {
  if (name == "minimal") return minimal_family();
  if (name == "subset") return subset_family();
  if (name.rfind("swap:", 0) == 0) {
    std::string rest = name.substr(5);
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw Error("expected swap:i,j");
    try {
      return swap_family(std::stoull(rest.substr(0, comma)), std::stoull(rest.substr(comma + 1)));
    } catch (const std::logic_error&) {
      throw Error("expected swap:i,j with natural numbers, got " + name);
    }
  }
  throw Error("unknown model family '" + name + "'");
}

Element FiniteModel::a(std::size_t n) const {
  if (n >= numbering.size()) throw Error("numbering a(" + std::to_string(n) + ") is not defined by the model");
  return numbering[n];
}

Element FiniteModel::octo(const ElementSet& set) const {
  for (const auto& [s, v] : octo_table) {
    if (s == set) return v;
  }
  return a(set.size());
}

std::size_t FiniteModel::index_of(const BigNat& id) const {
  for (std::size_t i = 0; i < world_ids.size(); ++i) {
    if (world_ids[i] == id) return i;
  }
  throw Error("no world with id " + id.str());
}

std::vector<std::size_t> FiniteModel::successors(std::size_t w) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < size(); ++s) {
    if (acc[w][s]) out.push_back(s);
  }
  return out;
}

ElementSet FiniteModel::domain_union() const {
  ElementSet out;
  for (const auto& d : dom) out.insert(out.end(), d.begin(), d.end());
  return sorted(out);
}

ElementSet FiniteModel::universe() const {
  ElementSet out = domain_union();
  out.insert(out.end(), numbering.begin(), numbering.end());
  for (const auto& [s, v] : octo_table) out.push_back(v);
  return sorted(out);
}

void compute_ranks(FiniteModel& m) {
  m.rank.assign(m.size(), -1);
  std::vector<std::size_t> order;
  for (std::size_t w = 0; w < m.truncated; ++w) order.push_back(w);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return m.dom[a].size() > m.dom[b].size(); });
  for (std::size_t w : order) {
    int r = 0;
    for (std::size_t s = 0; s < m.truncated; ++s) {
      if (s != w && m.acc[w][s] && m.rank[s] >= 0) r = std::max(r, m.rank[s] + 1);
    }
    m.rank[w] = r;
  }
}

namespace {

bool directed(const FiniteModel& m, std::size_t limit, std::size_t& bad_w, std::size_t& bad_s) {
  for (std::size_t w = 0; w < limit; ++w) {
    for (std::size_t s = w + 1; s < limit; ++s) {
      bool found = false;
      for (std::size_t t = 0; t < limit && !found; ++t) found = m.acc[w][t] && m.acc[s][t];
      if (!found) {
        bad_w = w;
        bad_s = s;
        return false;
      }
    }
  }
  return true;
}

}  // namespace

FiniteModel truncate(const ModelFamily& fam, const TruncationSpec& spec) {
  std::vector<ModelFamily::World> worlds;
  std::size_t truncated = 0;
  if (spec.worlds) {
    worlds = *spec.worlds;
    if (worlds.empty()) throw Error("truncation selects no worlds");
    truncated = worlds.size();
  } else {
    worlds = fam.worlds(spec.horizon);
    truncated = worlds.size();
    std::uint64_t top_size = spec.horizon + 1;
    for (std::uint64_t size = top_size + 1; size <= spec.extension; ++size) {
      if (fam.is_chain()) {
        worlds.push_back({size - 1});
      } else {
        ModelFamily::World w;
        for (Element e = 0; e < size; ++e) w.push_back(e);
        worlds.push_back(w);
      }
    }
  }
  FiniteModel m;
  m.family = fam.name();
  m.open = true;
  m.truncated = truncated;
  std::size_t max_dom = 0;
  for (const auto& w : worlds) {
    m.world_ids.push_back(fam.world_id(w));
    m.dom.push_back(fam.domain(w));
    max_dom = std::max(max_dom, m.dom.back().size());
  }
  std::set<BigNat> ids(m.world_ids.begin(), m.world_ids.end());
  if (ids.size() != m.world_ids.size()) throw Error("truncation selects a world twice");
  m.acc.assign(worlds.size(), std::vector<char>(worlds.size(), 0));
  for (std::size_t i = 0; i < worlds.size(); ++i) {
    for (std::size_t j = 0; j < worlds.size(); ++j) m.acc[i][j] = fam.accessible(worlds[i], worlds[j]);
  }
  for (std::size_t n = 0; n <= max_dom + 1; ++n) m.numbering.push_back(fam.numbering(n));
  std::size_t bw = 0, bs = 0;
  if (!directed(m, truncated, bw, bs)) {
    throw Error("truncation is not directed: worlds " + m.world_ids[bw].str() + " and " + m.world_ids[bs].str() +
                " have no common successor");
  }
  compute_ranks(m);
  return m;
}

bool PiReport::ok() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const ConditionCheck& c) { return c.status == CheckStatus::kFail; });
}

const ConditionCheck* PiReport::find(const std::string& condition) const {
  for (const auto& c : checks) {
    if (c.condition == condition) return &c;
  }
  return nullptr;
}

namespace {

void add(PiReport& r, const std::string& condition, bool pass, const std::string& witness = "") {
  r.checks.push_back({condition, pass ? CheckStatus::kPass : CheckStatus::kFail, pass ? "" : witness});
}

std::string pair_str(const FiniteModel& m, std::size_t a, std::size_t b) {
  return "(" + m.world_ids[a].str() + "," + m.world_ids[b].str() + ")";
}

void check_hume_table(const FiniteModel& m, PiReport& r) {
  std::vector<ElementSet> sets;
  std::size_t largest = 0;
  for (std::size_t w = 0; w < m.truncated; ++w) {
    if (m.dom[w].size() > m.dom[largest].size()) largest = w;
  }
  const ElementSet& base = m.dom[largest];
  if (base.size() <= 16) {
    for (std::uint64_t mask = 0; mask < (1ULL << base.size()); ++mask) {
      ElementSet s;
      for (std::size_t i = 0; i < base.size(); ++i) {
        if (mask >> i & 1) s.push_back(base[i]);
      }
      sets.push_back(s);
    }
  } else {
    for (std::size_t k = 0; k <= base.size(); ++k) sets.push_back(ElementSet(base.begin(), base.begin() + k));
  }
  for (const auto& [s, v] : m.octo_table) sets.push_back(s);
  std::map<std::size_t, std::pair<Element, ElementSet>> by_size;
  std::map<Element, std::pair<std::size_t, ElementSet>> by_value;
  for (const auto& s : sets) {
    Element v;
    try {
      v = m.octo(s);
    } catch (const Error& e) {
      add(r, "octothorpe", false, e.what());
      return;
    }
    auto [it, fresh] = by_size.emplace(s.size(), std::make_pair(v, s));
    if (!fresh && it->second.first != v) {
      add(r, "HP table", false,
          "#" + show(it->second.second) + " = " + std::to_string(it->second.first) + " but #" + show(s) + " = " +
              std::to_string(v) + " although both have " + std::to_string(s.size()) + " elements");
      return;
    }
    auto [jt, fresh_v] = by_value.emplace(v, std::make_pair(s.size(), s));
    if (!fresh_v && jt->second.first != s.size()) {
      add(r, "HP table", false,
          "#" + show(jt->second.second) + " = #" + show(s) + " = " + std::to_string(v) + " with different sizes");
      return;
    }
  }
  add(r, "HP table", true);
}

}  // namespace

PiReport validate_pi(const FiniteModel& m) {
  PiReport r;
  std::size_t n = m.size();
  {
    std::string bad;
    for (std::size_t w = 0; w < n && bad.empty(); ++w) {
      if (!m.acc[w][w]) bad = m.world_ids[w].str();
    }
    add(r, "reflexive", bad.empty(), bad);
  }
  {
    std::string bad;
    for (std::size_t a = 0; a < n && bad.empty(); ++a) {
      for (std::size_t b = 0; b < n && bad.empty(); ++b) {
        for (std::size_t c = 0; c < n && bad.empty(); ++c) {
          if (m.acc[a][b] && m.acc[b][c] && !m.acc[a][c]) {
            bad = "(" + m.world_ids[a].str() + "," + m.world_ids[b].str() + "," + m.world_ids[c].str() + ")";
          }
        }
      }
    }
    add(r, "transitive", bad.empty(), bad);
  }
  {
    std::string bad;
    for (std::size_t a = 0; a < n && bad.empty(); ++a) {
      for (std::size_t b = a + 1; b < n && bad.empty(); ++b) {
        if (m.acc[a][b] && m.acc[b][a]) bad = pair_str(m, a, b);
      }
    }
    add(r, "antisymmetric", bad.empty(), bad);
  }
  {
    std::size_t bw = 0, bs = 0;
    bool ok = directed(m, m.truncated, bw, bs) && directed(m, n, bw, bs);
    add(r, "directed", ok, ok ? "" : pair_str(m, bw, bs));
  }
  {
    std::string bad;
    for (std::size_t w = 0; w < n && bad.empty(); ++w) {
      if (m.dom[w].empty()) bad = m.world_ids[w].str();
    }
    add(r, "nonempty domains", bad.empty(), bad);
  }
  {
    std::string bad;
    for (std::size_t a = 0; a < n && bad.empty(); ++a) {
      for (std::size_t b = 0; b < n && bad.empty(); ++b) {
        if (a == b || !m.acc[a][b]) continue;
        if (!subset_of(m.dom[a], m.dom[b]) || m.dom[a].size() == m.dom[b].size()) bad = pair_str(m, a, b);
      }
    }
    add(r, "domain growth", bad.empty(), bad);
  }
  {
    std::map<Element, std::size_t> seen;
    std::string bad;
    for (std::size_t k = 0; k < m.numbering.size() && bad.empty(); ++k) {
      auto [it, fresh] = seen.emplace(m.numbering[k], k);
      if (!fresh) bad = "a(" + std::to_string(it->second) + ") = a(" + std::to_string(k) + ")";
    }
    add(r, "numbering injective", bad.empty(), bad);
  }
  check_hume_table(m, r);
  r.checks.push_back({"infinitely many worlds", CheckStatus::kNotCheckable, "not checkable on a truncation"});
  {
    bool ok = true;
    std::string bad;
    try {
      FiniteModel back = decode_model(encode_model(m));
      ok = back.dom == m.dom && back.acc == m.acc && back.numbering == m.numbering;
      if (!ok) bad = "coded model does not decode to the same tables";
    } catch (const Error& e) {
      ok = false;
      bad = e.what();
    }
    add(r, "coded model", ok, bad);
  }
  return r;
}

namespace {

json id_json(const BigNat& id) {
  if (id <= std::numeric_limits<std::uint64_t>::max()) return id.convert_to<std::uint64_t>();
  return id.str();
}

BigNat id_from_json(const json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    if (j.get<long long>() < 0) throw Error("negative world id");
    return BigNat(j.get<std::uint64_t>());
  }
  if (j.is_string()) return from_decimal(j.get<std::string>());
  throw Error("world ids must be naturals or decimal strings");
}

}  // namespace

std::string to_json(const FiniteModel& m) {
  json j;
  j["family"] = m.family;
  j["open"] = m.open;
  j["truncated"] = m.truncated;
  j["worlds"] = json::array();
  for (const auto& id : m.world_ids) j["worlds"].push_back(id_json(id));
  j["acc"] = json::array();
  for (const auto& row : m.acc) {
    json r = json::array();
    for (char c : row) r.push_back(c ? 1 : 0);
    j["acc"].push_back(r);
  }
  j["dom"] = json::object();
  for (std::size_t w = 0; w < m.size(); ++w) j["dom"][m.world_ids[w].str()] = m.dom[w];
  j["a"] = json::object();
  for (std::size_t n = 0; n < m.numbering.size(); ++n) j["a"][std::to_string(n)] = m.numbering[n];
  if (!m.octo_table.empty()) {
    j["octo"] = json::array();
    for (const auto& [s, v] : m.octo_table) j["octo"].push_back({{"set", s}, {"value", v}});
  }
  return j.dump();
}

FiniteModel finite_model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("model JSON: ") + e.what());
  }
  try {
    FiniteModel m;
    m.family = j.value("family", "custom");
    m.open = j.value("open", false);
    for (const auto& w : j.at("worlds")) m.world_ids.push_back(id_from_json(w));
    if (m.world_ids.empty()) throw Error("model has no worlds");
    std::size_t n = m.world_ids.size();
    m.truncated = j.value("truncated", n);
    if (m.truncated == 0 || m.truncated > n) throw Error("truncated must lie in 1..number of worlds");
    const json& acc = j.at("acc");
    if (acc.size() != n) throw Error("acc must be an n x n matrix");
    for (const auto& row : acc) {
      if (row.size() != n) throw Error("acc must be an n x n matrix");
      std::vector<char> r;
      for (const auto& c : row) r.push_back(c.is_boolean() ? c.get<bool>() : c.get<int>() != 0);
      m.acc.push_back(r);
    }
    const json& dom = j.at("dom");
    for (const auto& id : m.world_ids) {
      auto it = dom.find(id.str());
      if (it == dom.end()) throw Error("no domain for world " + id.str());
      m.dom.push_back(sorted(it->get<ElementSet>()));
    }
    const json& a = j.at("a");
    std::map<std::size_t, Element> numbering;
    for (auto it = a.begin(); it != a.end(); ++it) numbering[std::stoull(it.key())] = it.value().get<Element>();
    for (std::size_t k = 0; k < numbering.size(); ++k) {
      if (!numbering.count(k)) throw Error("numbering must be defined on 0..n without gaps");
      m.numbering.push_back(numbering[k]);
    }
    if (j.contains("octo")) {
      for (const auto& e : j["octo"]) m.octo_table.push_back({sorted(e.at("set").get<ElementSet>()), e.at("value")});
    }
    compute_ranks(m);
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("model JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(std::string("model JSON: ") + e.what());
  }
}

CodedModel encode_model(const FiniteModel& m) {
  CodedModel c;
  c.family = m.family;
  c.open = m.open;
  c.truncated = m.truncated;
  c.world_ids = m.world_ids;
  for (std::size_t w = 0; w < m.size(); ++w) {
    c.worlds.push_back(Nat(w));
    c.domains.push_back(Nat::pair(w, encode_seq(m.dom[w])));
    for (std::size_t s = 0; s < m.size(); ++s) {
      if (m.acc[w][s]) c.access.push_back(Nat::pair(w, s));
    }
  }
  for (std::size_t n = 0; n < m.numbering.size(); ++n) c.numbering.push_back(Nat::pair(n, m.numbering[n]));
  for (const auto& [s, v] : m.octo_table) c.octo_table.push_back(Nat::pair(encode_seq(s), v));
  std::sort(c.access.begin(), c.access.end());
  return c;
}

namespace {

std::uint64_t small(const BigNat& v, const std::string& what, const Nat& code) {
  if (v > 1000000000) throw Error("malformed " + what + " code " + code.str());
  return v.convert_to<std::uint64_t>();
}

ElementSet seq_elements(const BigNat& code, const Nat& outer) {
  if (!is_seq_code(code)) throw Error("malformed sequence inside code " + outer.str());
  return decode_seq(code);
}

}  // namespace

FiniteModel decode_model(const CodedModel& c) {
  FiniteModel m;
  m.family = c.family;
  m.open = c.open;
  std::size_t n = c.worlds.size();
  if (n == 0) throw Error("coded model has no worlds");
  for (std::size_t i = 0; i < n; ++i) {
    if (c.worlds[i].factored() || c.worlds[i].value() != i) {
      throw Error("malformed world code " + c.worlds[i].str() + " (worlds are numbered 0..n-1)");
    }
  }
  m.world_ids = c.world_ids.empty() ? std::vector<BigNat>() : c.world_ids;
  if (m.world_ids.empty()) {
    for (std::size_t i = 0; i < n; ++i) m.world_ids.push_back(i);
  }
  if (m.world_ids.size() != n) throw Error("world id sidecar does not match the coded worlds");
  m.truncated = c.truncated == 0 ? n : c.truncated;
  m.acc.assign(n, std::vector<char>(n, 0));
  for (const auto& code : c.access) {
    auto [x, y] = decode_pair(code);
    std::uint64_t w = small(x, "accessibility", code), s = small(y, "accessibility", code);
    if (w >= n || s >= n) throw Error("accessibility code " + code.str() + " mentions a non-world");
    m.acc[w][s] = 1;
  }
  m.dom.assign(n, {});
  std::vector<char> seen(n, 0);
  for (const auto& code : c.domains) {
    auto [x, y] = decode_pair(code);
    std::uint64_t w = small(x, "domain", code);
    if (w >= n) throw Error("domain code " + code.str() + " mentions a non-world");
    if (seen[w]) throw Error("domain code " + code.str() + " gives a second domain to world " + std::to_string(w));
    seen[w] = 1;
    m.dom[w] = seq_elements(y, code);
  }
  for (std::size_t w = 0; w < n; ++w) {
    if (!seen[w]) throw Error("world " + std::to_string(w) + " has no domain code");
  }
  std::map<std::uint64_t, Element> numbering;
  for (const auto& code : c.numbering) {
    auto [x, y] = decode_pair(code);
    std::uint64_t k = small(x, "numbering", code);
    if (!numbering.emplace(k, small(y, "numbering", code)).second) {
      throw Error("numbering code " + code.str() + " assigns a second value to " + std::to_string(k));
    }
  }
  for (std::size_t k = 0; k < numbering.size(); ++k) {
    if (!numbering.count(k)) throw Error("numbering codes leave a gap at " + std::to_string(k));
    m.numbering.push_back(numbering[k]);
  }
  for (const auto& code : c.octo_table) {
    auto [x, y] = decode_pair(code);
    m.octo_table.push_back({seq_elements(x, code), small(y, "octothorpe", code)});
  }
  compute_ranks(m);
  return m;
}

std::string to_json(const CodedModel& c) {
  auto arr = [](const std::vector<Nat>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.str());
    return a;
  };
  json j;
  j["W"] = arr(c.worlds);
  j["R"] = arr(c.access);
  j["D"] = arr(c.domains);
  j["a"] = arr(c.numbering);
  if (!c.octo_table.empty()) j["octo"] = arr(c.octo_table);
  j["world_ids"] = json::array();
  for (const auto& id : c.world_ids) j["world_ids"].push_back(id.str());
  j["truncated"] = c.truncated;
  j["family"] = c.family;
  j["open"] = c.open;
  return j.dump();
}

CodedModel coded_model_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    auto arr = [](const json& a) {
      std::vector<Nat> out;
      for (const auto& x : a) out.push_back(Nat::parse(x.get<std::string>()));
      return out;
    };
    CodedModel c;
    c.worlds = arr(j.at("W"));
    c.access = arr(j.at("R"));
    c.domains = arr(j.at("D"));
    c.numbering = arr(j.at("a"));
    if (j.contains("octo")) c.octo_table = arr(j["octo"]);
    if (j.contains("world_ids")) {
      for (const auto& x : j["world_ids"]) c.world_ids.push_back(from_decimal(x.get<std::string>()));
    }
    c.truncated = j.value("truncated", c.worlds.size());
    c.family = j.value("family", "custom");
    c.open = j.value("open", false);
    return c;
  } catch (const json::exception& e) {
    throw Error(std::string("coded model JSON: ") + e.what());
  }
}

}  // namespace pimodel
