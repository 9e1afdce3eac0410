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

#include "pimodel/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

#include "pimodel/classify.hpp"

namespace pimodel {

namespace {

// ---- arithmetic in the standard model ----

Truth from_bool(bool b) { return b ? Truth::kTrue : Truth::kFalse; }

Truth t_not(Truth a) {
  if (a == Truth::kUnknown) return a;
  return a == Truth::kTrue ? Truth::kFalse : Truth::kTrue;
}

Truth t_and(Truth a, Truth b) {
  if (a == Truth::kFalse || b == Truth::kFalse) return Truth::kFalse;
  if (a == Truth::kTrue && b == Truth::kTrue) return Truth::kTrue;
  return Truth::kUnknown;
}

Truth t_or(Truth a, Truth b) { return t_not(t_and(t_not(a), t_not(b))); }

class Arith {
 public:
  Arith(const ArithEnv& env, const OracleConfig& cfg) : cfg_(cfg) {
    first_ = env.first;
    for (const auto& [name, tuples] : env.second) second_[name] = std::set<std::vector<std::uint64_t>>(tuples.begin(), tuples.end());
  }

  Truth eval(const ArithPtr& f) {
    switch (f->kind) {
      case ArithKind::kEq:
        return from_bool(val(f->args[0]) == val(f->args[1]));
      case ArithKind::kZero:
        return from_bool(val(f->args[0]) == 0);
      case ArithKind::kS:
        return from_bool(val(f->args[1]) == val(f->args[0]) + 1);
      case ArithKind::kPlus:
        return from_bool(val(f->args[0]) + val(f->args[1]) == val(f->args[2]));
      case ArithKind::kTimes: {
        unsigned __int128 p = static_cast<unsigned __int128>(val(f->args[0])) * val(f->args[1]);
        return from_bool(p == val(f->args[2]));
      }
      case ArithKind::kApp: {
        auto it = second_.find(f->set_name);
        if (it == second_.end()) throw Error("no value for relation variable " + f->set_name);
        std::vector<std::uint64_t> t;
        for (const auto& a : f->args) t.push_back(val(a));
        return from_bool(it->second.count(t) > 0);
      }
      case ArithKind::kNot:
        return t_not(eval(f->lhs));
      case ArithKind::kAnd: {
        Truth l = eval(f->lhs);
        if (l == Truth::kFalse) return l;
        return t_and(l, eval(f->rhs));
      }
      case ArithKind::kOr: {
        Truth l = eval(f->lhs);
        if (l == Truth::kTrue) return l;
        return t_or(l, eval(f->rhs));
      }
      case ArithKind::kImplies: {
        Truth l = eval(f->lhs);
        if (l == Truth::kFalse) return Truth::kTrue;
        return t_or(t_not(l), eval(f->rhs));
      }
      case ArithKind::kIff: {
        Truth l = eval(f->lhs);
        Truth r = eval(f->rhs);
        if (l == Truth::kUnknown || r == Truth::kUnknown) return Truth::kUnknown;
        return from_bool(l == r);
      }
      case ArithKind::kAllLe:
      case ArithKind::kExLe:
        return range(f, f->bound, f->kind == ArithKind::kAllLe, true);
      case ArithKind::kAll:
      case ArithKind::kEx: {
        bool all = f->kind == ArithKind::kAll;
        if (cfg_.mode == OracleMode::kBoundedExact) {
          throw Error("unbounded quantifier over " + f->var + " in exact mode");
        }
        const ArithPtr& body = f->lhs;
        if (!all) {
          if (auto b = pinned(f->var, body)) return range(f, *b, all, true);
        } else if (body->kind == ArithKind::kImplies) {
          if (auto b = pinned(f->var, body->lhs)) return range(f, *b, all, true);
        }
        return range(f, cfg_.ceiling, all, false);
      }
      case ArithKind::kAllSecond:
      case ArithKind::kExSecond:
        return relations(f);
    }
    throw Error("unknown arithmetic formula");
  }

 private:
  std::uint64_t val(const ArithArg& a) const {
    if (a.numeral) return a.value;
    auto it = first_.find(a.name);
    if (it == first_.end()) throw Error("no value for variable " + a.name);
    return it->second;
  }

  using Bounds = std::map<std::string, std::uint64_t>;

  // Exact value of an argument other than var, if known.
  std::optional<std::uint64_t> known(const ArithArg& a, const std::string& var, const Bounds& ubs) const {
    if (a.numeral) return a.value;
    if (a.name == var || ubs.count(a.name)) return std::nullopt;
    auto it = first_.find(a.name);
    if (it == first_.end()) return std::nullopt;
    return it->second;
  }

  // Upper bound of an argument other than var, if known.
  std::optional<std::uint64_t> upper(const ArithArg& a, const std::string& var, const Bounds& ubs) const {
    if (!a.numeral && a.name != var) {
      auto it = ubs.find(a.name);
      if (it != ubs.end()) return it->second;
    }
    return known(a, var, ubs);
  }

  static void conjuncts(const ArithPtr& g, std::vector<ArithPtr>& out) {
    if (g->kind == ArithKind::kAnd) {
      conjuncts(g->lhs, out);
      conjuncts(g->rhs, out);
    } else {
      out.push_back(g);
    }
  }

  // An upper bound on var implied by the conjunction g. Existential
  // conjuncts contribute through bounds on their own witnesses.
  std::optional<std::uint64_t> pinned(const std::string& var, const ArithPtr& g, const Bounds& ubs = {}) const {
    std::vector<ArithPtr> list;
    conjuncts(g, list);
    std::optional<std::uint64_t> best;
    auto offer = [&](std::optional<std::uint64_t> b) {
      if (b) best = best ? std::min(*best, *b) : *b;
    };
    auto is_var = [&](const ArithArg& a) { return !a.numeral && a.name == var; };
    auto sum = [](std::optional<std::uint64_t> l, std::optional<std::uint64_t> r) -> std::optional<std::uint64_t> {
      if (l && r) return *l + *r;
      return std::nullopt;
    };
    for (const auto& a : list) {
      const auto& args = a->args;
      switch (a->kind) {
        case ArithKind::kEq:
          for (int i = 0; i < 2; ++i) {
            if (is_var(args[i])) offer(upper(args[1 - i], var, ubs));
          }
          break;
        case ArithKind::kZero:
          if (is_var(args[0])) offer(0);
          break;
        case ArithKind::kS:
          if (is_var(args[0])) offer(upper(args[1], var, ubs));
          if (is_var(args[1])) offer(sum(upper(args[0], var, ubs), 1));
          break;
        case ArithKind::kPlus:
          if (is_var(args[2])) offer(sum(upper(args[0], var, ubs), upper(args[1], var, ubs)));
          for (int i = 0; i < 2; ++i) {
            if (is_var(args[i])) offer(upper(args[2], var, ubs));
          }
          break;
        case ArithKind::kTimes:
          if (is_var(args[2])) {
            auto l = upper(args[0], var, ubs);
            auto r = upper(args[1], var, ubs);
            if (l && r) offer(*l * *r);
          }
          for (int i = 0; i < 2; ++i) {
            if (!is_var(args[i])) continue;
            auto other = known(args[1 - i], var, ubs);
            if (other && *other != 0) offer(upper(args[2], var, ubs));
          }
          break;
        case ArithKind::kEx: {
          if (a->var == var) break;
          auto witness = pinned(a->var, a->lhs, ubs);
          if (!witness) break;
          Bounds inner = ubs;
          inner[a->var] = *witness;
          offer(pinned(var, a->lhs, inner));
          break;
        }
        default:
          break;
      }
    }
    return best;
  }

  Truth range(const ArithPtr& f, std::uint64_t bound, bool all, bool exact) {
    auto saved = first_.find(f->var) != first_.end() ? std::optional(first_[f->var]) : std::nullopt;
    Truth acc = all ? Truth::kTrue : Truth::kFalse;
    for (std::uint64_t x = 0; x <= bound; ++x) {
      first_[f->var] = x;
      Truth v = eval(f->lhs);
      acc = all ? t_and(acc, v) : t_or(acc, v);
      if (acc == (all ? Truth::kFalse : Truth::kTrue)) break;
    }
    if (saved) {
      first_[f->var] = *saved;
    } else {
      first_.erase(f->var);
    }
    if (!exact && acc == (all ? Truth::kTrue : Truth::kFalse)) return Truth::kUnknown;
    return acc;
  }

  Truth relations(const ArithPtr& f) {
    if (cfg_.mode == OracleMode::kBoundedExact) {
      throw Error("unbounded relation quantifier over " + f->var + " in exact mode");
    }
    std::vector<std::vector<std::uint64_t>> tuples;
    std::size_t total = 1;
    for (int i = 0; i < f->arity; ++i) total *= cfg_.ceiling + 1;
    if (total > 20) throw Error("cost guard: relation quantifier over " + std::to_string(total) + " tuples");
    for (std::size_t n = 0; n < total; ++n) {
      std::vector<std::uint64_t> t;
      std::size_t r = n;
      for (int i = 0; i < f->arity; ++i) {
        t.push_back(r % (cfg_.ceiling + 1));
        r /= cfg_.ceiling + 1;
      }
      tuples.push_back(t);
    }
    bool all = f->kind == ArithKind::kAllSecond;
    auto saved = second_.find(f->var) != second_.end() ? std::optional(second_[f->var]) : std::nullopt;
    Truth acc = all ? Truth::kTrue : Truth::kFalse;
    for (std::uint64_t mask = 0; mask < (1ULL << total); ++mask) {
      auto& rel = second_[f->var];
      rel.clear();
      for (std::size_t i = 0; i < total; ++i) {
        if (mask >> i & 1) rel.insert(tuples[i]);
      }
      acc = all ? t_and(acc, eval(f->lhs)) : t_or(acc, eval(f->lhs));
      if (acc == (all ? Truth::kFalse : Truth::kTrue)) break;
    }
    if (saved) {
      second_[f->var] = *saved;
    } else {
      second_.erase(f->var);
    }
    if (acc == (all ? Truth::kTrue : Truth::kFalse)) return Truth::kUnknown;
    return acc;
  }

  const OracleConfig& cfg_;
  std::map<std::string, std::uint64_t> first_;
  std::map<std::string, std::set<std::vector<std::uint64_t>>> second_;
};

}  // namespace

Verdict eval_arith(const ArithPtr& f, const ArithEnv& env, const OracleConfig& cfg) {
  Arith a(env, cfg);
  Truth t = a.eval(f);
  return {t, t != Truth::kUnknown};
}

namespace {

// ---- plain second-order interpreter ----

struct BruteRel {
  int arity = 1;
  const ElementSet* base = nullptr;  // quantified relations: bitmask over base^arity
  std::uint64_t mask = 0;
  std::set<Tuple> listed;  // relations supplied by the environment

  bool contains(const Tuple& t) const {
    if (static_cast<int>(t.size()) != arity) return false;
    if (!base) return listed.count(t) > 0;
    std::size_t bit = 0;
    std::size_t scale = 1;
    for (Element e : t) {
      auto it = std::lower_bound(base->begin(), base->end(), e);
      if (it == base->end() || *it != e) return false;
      bit += static_cast<std::size_t>(it - base->begin()) * scale;
      scale *= base->size();
    }
    return mask >> bit & 1;
  }

  std::vector<Tuple> tuples() const {
    if (!base) return {listed.begin(), listed.end()};
    std::vector<Tuple> out;
    std::size_t total = 1;
    for (int i = 0; i < arity; ++i) total *= base->size();
    for (std::size_t bit = 0; bit < total; ++bit) {
      if (!(mask >> bit & 1)) continue;
      Tuple t;
      std::size_t r = bit;
      for (int i = 0; i < arity; ++i) {
        t.push_back((*base)[r % base->size()]);
        r /= base->size();
      }
      out.push_back(std::move(t));
    }
    return out;
  }
};

class Brute {
 public:
  explicit Brute(const FiniteModel& m) : m_(m) {
    for (Element e : m.domain_union()) domains_.insert(e);
  }

  std::vector<std::pair<std::string, Element>> first;
  std::vector<std::pair<std::string, BruteRel>> second;

  RawResult eval(std::size_t w, const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::kEq:
        return {term(f->lhs_term) == term(f->rhs_term), false};
      case FormulaKind::kApp: {
        Tuple t;
        for (const auto& a : f->args) t.push_back(term(a));
        return {member(f->set, t), false};
      }
      case FormulaKind::kNot: {
        RawResult r = eval(w, f->lhs);
        return {!r.value, r.boundary};
      }
      case FormulaKind::kAnd:
      case FormulaKind::kOr:
      case FormulaKind::kImplies:
      case FormulaKind::kIff: {
        RawResult l = eval(w, f->lhs);
        if (f->kind == FormulaKind::kAnd && !l.value) return l;
        if (f->kind == FormulaKind::kOr && l.value) return l;
        if (f->kind == FormulaKind::kImplies && !l.value) return {true, l.boundary};
        RawResult r = eval(w, f->rhs);
        bool v = f->kind == FormulaKind::kIff ? l.value == r.value : r.value;
        return {v, l.boundary || r.boundary};
      }
      case FormulaKind::kBox: {
        RawResult out{true, false};
        for (std::size_t s : m_.successors(w)) {
          if (m_.in_truncation(w) && !m_.in_truncation(s)) continue;
          RawResult r = eval(s, f->lhs);
          out.boundary = out.boundary || r.boundary;
          if (!r.value) return {false, out.boundary};
        }
        return out;
      }
      case FormulaKind::kDia: {
        RawResult out{false, false};
        for (std::size_t s : m_.successors(w)) {
          RawResult r = eval(s, f->lhs);
          out.boundary = out.boundary || r.boundary;
          if (r.value) return {true, out.boundary};
        }
        return {false, out.boundary || m_.open};
      }
      case FormulaKind::kAllFirst:
      case FormulaKind::kExFirst: {
        bool want = f->kind == FormulaKind::kExFirst;
        RawResult out{!want, false};
        for (Element e : m_.dom[w]) {
          first.emplace_back(f->var, e);
          RawResult r = eval(w, f->lhs);
          first.pop_back();
          out.boundary = out.boundary || r.boundary;
          if (r.value == want) return {want, out.boundary};
        }
        return out;
      }
      case FormulaKind::kAllSecond:
      case FormulaKind::kExSecond: {
        bool want = f->kind == FormulaKind::kExSecond;
        std::size_t total = 1;
        for (int i = 0; i < f->arity; ++i) total *= m_.dom[w].size();
        if (total > 16) {
          throw Error("cost guard: brute enumeration of " + std::to_string(total) + "-tuple relations over " +
                      std::to_string(m_.dom[w].size()) + " elements");
        }
        RawResult out{!want, false};
        BruteRel rel;
        rel.arity = f->arity;
        rel.base = &m_.dom[w];
        for (std::uint64_t mask = 0; mask < (1ULL << total); ++mask) {
          rel.mask = mask;
          second.emplace_back(f->var, rel);
          RawResult r = eval(w, f->lhs);
          second.pop_back();
          out.boundary = out.boundary || r.boundary;
          if (r.value == want) return {want, out.boundary};
        }
        return out;
      }
    }
    throw Error("unknown formula kind");
  }

 private:
  Element term(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::kVar:
        for (auto it = first.rbegin(); it != first.rend(); ++it) {
          if (it->first == t->name) return it->second;
        }
        throw Error("no value for variable " + t->name);
      case TermKind::kZero:
        return m_.octo({});
      case TermKind::kCard: {
        std::set<Element> ext = extension(t->set);
        for (Element e : ext) {
          if (!domains_.count(e)) throw Error("cardinality of a set that is not contained in the domains");
        }
        return m_.octo(ElementSet(ext.begin(), ext.end()));
      }
    }
    return 0;
  }

  const BruteRel& rel(const std::string& name) const {
    for (auto it = second.rbegin(); it != second.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    throw Error("no value for relation variable " + name);
  }

  bool member(const SetPtr& s, const Tuple& t) {
    switch (s->kind) {
      case SetKind::kVar:
        return rel(s->name).contains(t);
      default:
        return extension(s).count(t.at(0)) > 0;
    }
  }

  std::set<Element> extension(const SetPtr& s) {
    std::set<Element> out;
    switch (s->kind) {
      case SetKind::kVar:
        for (const auto& t : rel(s->name).tuples()) out.insert(t.at(0));
        return out;
      case SetKind::kEmpty:
        return out;
      case SetKind::kUnion: {
        out = extension(s->lhs);
        auto r = extension(s->rhs);
        out.insert(r.begin(), r.end());
        return out;
      }
      case SetKind::kMinus:
        out = extension(s->lhs);
        out.erase(term(s->term));
        return out;
      case SetKind::kPlus1:
        out = extension(s->lhs);
        out.insert(term(s->term));
        return out;
      case SetKind::kSect: {
        Element x = term(s->term);
        for (const auto& t : rel(s->lhs->name).tuples()) {
          if (t[0] == x) out.insert(t[1]);
        }
        return out;
      }
      case SetKind::kBigUSect: {
        auto over = extension(s->rhs);
        for (const auto& t : rel(s->lhs->name).tuples()) {
          if (over.count(t[0])) out.insert(t[1]);
        }
        return out;
      }
    }
    return out;
  }

  const FiniteModel& m_;
  std::set<Element> domains_;
};

}  // namespace

Verdict brute_second_order(const FiniteModel& m, std::size_t w, const FormulaPtr& f, const Env& env) {
  Brute b(m);
  for (const auto& [name, value] : env.first) b.first.emplace_back(name, value);
  for (const auto& [name, tuples] : env.second) {
    BruteRel r;
    r.arity = tuples.empty() ? free_vars(f).second.count(name) ? free_vars(f).second.at(name) : 1
                             : static_cast<int>(tuples.front().size());
    r.listed = std::set<Tuple>(tuples.begin(), tuples.end());
    b.second.emplace_back(name, std::move(r));
  }
  RawResult r = b.eval(w, f);
  bool faithful = !m.open || m.horizon_rank(w) >= demand(f);
  Truth v = (!faithful && r.boundary) ? Truth::kUnknown : (r.value ? Truth::kTrue : Truth::kFalse);
  return {v, faithful};
}

std::string to_string(Codec c) {
  switch (c) {
    case Codec::kLiteralPair:
      return "literal-pair";
    case Codec::kProductPair:
      return "product-pair";
    case Codec::kLiteralSeq:
      return "literal-seq";
    case Codec::kProductSeq:
      return "product-seq";
  }
  return "?";
}

ScanReport injectivity_scan(Codec codec, std::uint64_t bound, std::size_t max_length) {
  std::vector<std::vector<std::uint64_t>> inputs;
  if (codec == Codec::kLiteralPair || codec == Codec::kProductPair) {
    for (std::uint64_t x = 0; x < bound; ++x) {
      for (std::uint64_t y = 0; y < bound; ++y) inputs.push_back({x, y});
    }
  } else {
    std::vector<std::uint64_t> cur;
    std::function<void(std::uint64_t)> grow = [&](std::uint64_t from) {
      inputs.push_back(cur);
      if (cur.size() == max_length) return;
      for (std::uint64_t v = from; v <= bound; ++v) {
        cur.push_back(v);
        grow(v + 1);
        cur.pop_back();
      }
    };
    grow(0);
  }
  ScanReport rep;
  rep.codec = codec;
  rep.bound = bound;
  std::map<BigNat, std::vector<std::uint64_t>> seen;
  for (const auto& in : inputs) {
    BigNat code;
    switch (codec) {
      case Codec::kLiteralPair:
        code = literal_pair_code(in[0], in[1]);
        break;
      case Codec::kProductPair:
        code = encode_pair(in[0], in[1]);
        break;
      case Codec::kLiteralSeq:
        code = literal_seq_code(in);
        break;
      case Codec::kProductSeq:
        code = encode_seq(in);
        break;
    }
    ++rep.checked;
    auto [it, fresh] = seen.emplace(code, in);
    if (!fresh) rep.collisions.push_back({it->second, in, code});
  }
  std::stable_sort(rep.collisions.begin(), rep.collisions.end(),
                   [](const Collision& a, const Collision& b) { return a.code < b.code; });
  return rep;
}

std::string to_json(const ScanReport& r) {
  nlohmann::ordered_json j;
  j["codec"] = to_string(r.codec);
  j["bound"] = r.bound;
  j["checked"] = r.checked;
  j["injective"] = r.injective();
  j["collisions"] = nlohmann::ordered_json::array();
  for (const auto& c : r.collisions) {
    j["collisions"].push_back({{"first", c.first}, {"second", c.second}, {"code", to_decimal(c.code)}});
  }
  return j.dump(2);
}

}  // namespace pimodel
