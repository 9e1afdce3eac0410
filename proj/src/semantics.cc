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

#include "pimodel/semantics.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <unordered_map>

#include <boost/container_hash/hash.hpp>
#include <nlohmann/json.hpp>

#include "pimodel/classify.hpp"
#include "pimodel/shapes.hpp"

namespace pimodel {

std::string to_string(Truth t) {
  switch (t) {
    case Truth::kFalse:
      return "false";
    case Truth::kTrue:
      return "true";
    case Truth::kUnknown:
      return "unknown";
  }
  return "?";
}

namespace {

// A relation over the dense element universe; bit sum_i idx_i * U^i.
struct Rel {
  int arity = 1;
  std::vector<std::uint64_t> bits;

  bool test(std::size_t i) const { return bits[i >> 6] >> (i & 63) & 1; }
  void set(std::size_t i) { bits[i >> 6] |= 1ULL << (i & 63); }
  void reset(std::size_t i) { bits[i >> 6] &= ~(1ULL << (i & 63)); }
  void flip(std::size_t i) { bits[i >> 6] ^= 1ULL << (i & 63); }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : bits) n += std::popcount(w);
    return n;
  }
};

enum class Op : std::uint8_t {
  kEq, kApp, kNot, kAnd, kOr, kImplies, kIff, kBox, kDia,
  kAll1, kEx1, kAll2, kEx2, kSucc, kPlus, kTimes, kClosure,
};

struct TermC {
  TermKind kind = TermKind::kVar;
  int slot = -1;  // kVar
  int set = -1;   // kCard
};

struct SetC {
  SetKind kind = SetKind::kVar;
  int slot = -1;  // kVar
  int arity = 1;
  int lhs = -1;
  int rhs = -1;
  int term = -1;
};

struct Node {
  Op op = Op::kEq;
  int a = -1;
  int b = -1;
  int slot = -1;
  int arity = 0;
  std::vector<int> terms;
  int set = -1;
  // Memoized nodes.
  int canon = -1;
  std::vector<int> key_first;
  std::vector<int> key_second;
  // Closures: a = step, b = start.
  int x_slot = -1;
  int y_slot = -1;
  int z_slot = -1;
  int target = -1;
};

struct Program {
  std::vector<Node> nodes;
  std::vector<TermC> terms;
  std::vector<SetC> sets;
  int root = -1;
  int first_slots = 0;
  int second_slots = 0;
  std::vector<int> second_arity;
  std::map<std::string, int> free_first;
  std::map<std::string, int> free_second;
};

using Key = std::vector<std::uint64_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const { return boost::hash_range(k.begin(), k.end()); }
};

// Rendering with bound variables replaced by binding depth; free variable
// names are recorded in order of first occurrence.
class Canon {
 public:
  std::string out;
  std::vector<std::string> free_first;
  std::vector<std::string> free_second;

  void formula(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::kEq:
        out += "(=";
        term(f->lhs_term);
        term(f->rhs_term);
        out += ")";
        return;
      case FormulaKind::kApp:
        out += "(@";
        set(f->set);
        for (const auto& a : f->args) term(a);
        out += ")";
        return;
      default:
        break;
    }
    out += "(" + std::to_string(static_cast<int>(f->kind));
    if (f->is_quantifier()) {
      auto& scope = f->is_second_order_quantifier() ? second_ : first_;
      scope[f->var].push_back(depth_++);
      out += ":" + std::to_string(f->arity);
      formula(f->lhs);
      scope[f->var].pop_back();
      --depth_;
    } else {
      formula(f->lhs);
      if (f->rhs) formula(f->rhs);
    }
    out += ")";
  }

 private:
  static void note(std::vector<std::string>& list, const std::string& n) {
    if (std::find(list.begin(), list.end(), n) == list.end()) list.push_back(n);
  }

  void term(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::kVar: {
        auto it = first_.find(t->name);
        if (it != first_.end() && !it->second.empty()) {
          out += " b" + std::to_string(it->second.back());
        } else {
          note(free_first, t->name);
          out += " f" + t->name;
        }
        return;
      }
      case TermKind::kZero:
        out += " 0";
        return;
      case TermKind::kCard:
        out += " (#";
        set(t->set);
        out += ")";
        return;
    }
  }

  void set(const SetPtr& s) {
    switch (s->kind) {
      case SetKind::kVar: {
        auto it = second_.find(s->name);
        if (it != second_.end() && !it->second.empty()) {
          out += " B" + std::to_string(it->second.back());
        } else {
          note(free_second, s->name);
          out += " F" + s->name;
        }
        return;
      }
      case SetKind::kEmpty:
        out += " {}";
        return;
      default:
        out += " (s" + std::to_string(static_cast<int>(s->kind));
        if (s->lhs) set(s->lhs);
        if (s->rhs) set(s->rhs);
        if (s->term) term(s->term);
        out += ")";
        return;
    }
  }

  std::map<std::string, std::vector<int>> first_;
  std::map<std::string, std::vector<int>> second_;
  int depth_ = 0;
};

}  // namespace

struct Evaluator::Impl {
  const FiniteModel& m;
  EvalOptions opts;
  bool fast;

  std::size_t universe_size = 0;
  std::vector<Element> elems;
  std::unordered_map<Element, std::size_t> index;
  std::vector<int> direct;  // index for small elements, -1 when absent
  std::vector<std::vector<std::size_t>> dom_idx;
  std::vector<std::vector<std::size_t>> box_range;
  std::vector<std::vector<std::size_t>> dia_range;
  std::vector<std::size_t> reach;
  Rel dom_union;
  std::unordered_map<Element, std::vector<std::size_t>> inverse;  // value -> k with a_k = value

  std::unordered_map<const Formula*, std::unique_ptr<Program>> programs;
  std::vector<FormulaPtr> keep;
  std::unordered_map<std::string, int> canon_ids;
  std::unordered_map<Key, RawResult, KeyHash> memo;
  std::unordered_map<Key, std::pair<Rel, bool>, KeyHash> closures;
  std::map<std::pair<std::size_t, int>, std::vector<std::size_t>> positions;

  Program* prog = nullptr;
  std::vector<Element> fv;
  std::vector<Rel> sv;

  Impl(const FiniteModel& model, EvalOptions o) : m(model), opts(o) {
    fast = opts.fast_paths && m.octo_table.empty();
    elems = m.universe();
    universe_size = elems.size();
    for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = i;
    direct.assign(elems.empty() ? 0 : std::min<Element>(elems.back() + 1, 4096), -1);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (elems[i] < direct.size()) direct[elems[i]] = static_cast<int>(i);
    }
    dom_union = empty_rel(1);
    for (Element e : m.domain_union()) dom_union.set(index.at(e));
    dom_idx.resize(m.size());
    box_range.resize(m.size());
    dia_range.resize(m.size());
    reach.assign(m.size(), 0);
    for (std::size_t w = 0; w < m.size(); ++w) {
      for (Element e : m.dom[w]) dom_idx[w].push_back(index.at(e));
      for (std::size_t s : m.successors(w)) {
        dia_range[w].push_back(s);
        if (!m.in_truncation(w) || m.in_truncation(s)) box_range[w].push_back(s);
        reach[w] = std::max(reach[w], m.dom[s].size());
      }
    }
    for (std::size_t k = 0; k < m.numbering.size(); ++k) inverse[m.numbering[k]].push_back(k);
  }

  Rel empty_rel(int arity) const {
    Rel r;
    r.arity = arity;
    std::size_t n = 1;
    for (int i = 0; i < arity; ++i) n *= universe_size;
    r.bits.assign((n + 63) / 64 + (n == 0 ? 1 : 0), 0);
    return r;
  }

  Element numbering(std::size_t k) const { return m.a(k); }
  bool has_numbering(std::size_t k) const { return k < m.numbering.size(); }

  // ---- compilation ----

  struct Scope {
    std::map<std::string, std::vector<int>> first;
    std::map<std::string, std::vector<int>> second;
  };

  int first_slot(Scope& sc, const std::string& name) {
    auto it = sc.first.find(name);
    if (it != sc.first.end() && !it->second.empty()) return it->second.back();
    auto f = prog->free_first.find(name);
    if (f != prog->free_first.end()) return f->second;
    int slot = prog->first_slots++;
    prog->free_first[name] = slot;
    return slot;
  }

  int second_slot(Scope& sc, const std::string& name, int arity) {
    auto it = sc.second.find(name);
    if (it != sc.second.end() && !it->second.empty()) return it->second.back();
    auto f = prog->free_second.find(name);
    if (f != prog->free_second.end()) return f->second;
    int slot = new_second(arity);
    prog->free_second[name] = slot;
    return slot;
  }

  int new_second(int arity) {
    int slot = prog->second_slots++;
    prog->second_arity.push_back(arity);
    return slot;
  }

  int compile_term(const TermPtr& t, Scope& sc) {
    TermC c;
    c.kind = t->kind;
    if (t->kind == TermKind::kVar) c.slot = first_slot(sc, t->name);
    if (t->kind == TermKind::kCard) c.set = compile_set(t->set, sc);
    prog->terms.push_back(c);
    return static_cast<int>(prog->terms.size()) - 1;
  }

  int compile_set(const SetPtr& s, Scope& sc) {
    SetC c;
    c.kind = s->kind;
    c.arity = s->result_arity();
    if (s->kind == SetKind::kVar) c.slot = second_slot(sc, s->name, s->arity);
    if (s->lhs) c.lhs = compile_set(s->lhs, sc);
    if (s->rhs) c.rhs = compile_set(s->rhs, sc);
    if (s->term) c.term = compile_term(s->term, sc);
    prog->sets.push_back(c);
    return static_cast<int>(prog->sets.size()) - 1;
  }

  int push(Node n) {
    prog->nodes.push_back(std::move(n));
    return static_cast<int>(prog->nodes.size()) - 1;
  }

  void set_key(Node& n, const FormulaPtr& f, Scope& sc) {
    Canon c;
    c.formula(f);
    auto [it, fresh] = canon_ids.try_emplace(c.out, static_cast<int>(canon_ids.size()));
    (void)fresh;
    n.canon = it->second;
    for (const auto& name : c.free_first) n.key_first.push_back(first_slot(sc, name));
    auto fv = free_vars(f);
    for (const auto& name : c.free_second) n.key_second.push_back(second_slot(sc, name, fv.second.at(name)));
  }

  int compile(const FormulaPtr& f, Scope& sc) {
    Node n;
    switch (f->kind) {
      case FormulaKind::kEq:
        n.op = Op::kEq;
        n.terms = {compile_term(f->lhs_term, sc), compile_term(f->rhs_term, sc)};
        return push(std::move(n));
      case FormulaKind::kApp:
        n.op = Op::kApp;
        n.set = compile_set(f->set, sc);
        for (const auto& a : f->args) n.terms.push_back(compile_term(a, sc));
        return push(std::move(n));
      case FormulaKind::kNot:
        n.op = Op::kNot;
        n.a = compile(f->lhs, sc);
        return push(std::move(n));
      case FormulaKind::kAnd:
      case FormulaKind::kOr:
      case FormulaKind::kImplies:
      case FormulaKind::kIff:
        n.op = f->kind == FormulaKind::kAnd       ? Op::kAnd
               : f->kind == FormulaKind::kOr      ? Op::kOr
               : f->kind == FormulaKind::kImplies ? Op::kImplies
                                                  : Op::kIff;
        n.a = compile(f->lhs, sc);
        n.b = compile(f->rhs, sc);
        return push(std::move(n));
      case FormulaKind::kBox:
        n.op = Op::kBox;
        n.a = compile(f->lhs, sc);
        set_key(n, f, sc);
        return push(std::move(n));
      case FormulaKind::kDia:
        if (fast) {
          auto s = match_successor(f);
          if (!s) s = match_successor_alt(f);
          if (s) {
            n.op = Op::kSucc;
            n.terms = {compile_term(s->first, sc), compile_term(s->second, sc)};
            return push(std::move(n));
          }
          auto p = match_plus(f);
          bool is_times = false;
          if (!p) {
            p = match_times(f);
            is_times = p.has_value();
          }
          if (p) {
            n.op = is_times ? Op::kTimes : Op::kPlus;
            n.terms = {compile_term(p->a, sc), compile_term(p->b, sc), compile_term(p->c, sc)};
            return push(std::move(n));
          }
        }
        n.op = Op::kDia;
        n.a = compile(f->lhs, sc);
        set_key(n, f, sc);
        return push(std::move(n));
      case FormulaKind::kAllFirst:
      case FormulaKind::kExFirst:
        n.op = f->kind == FormulaKind::kAllFirst ? Op::kAll1 : Op::kEx1;
        n.slot = prog->first_slots++;
        sc.first[f->var].push_back(n.slot);
        n.a = compile(f->lhs, sc);
        sc.first[f->var].pop_back();
        return push(std::move(n));
      case FormulaKind::kAllSecond:
        if (fast) {
          if (auto c = match_closure(f)) return compile_closure(*c, sc);
        }
        [[fallthrough]];
      case FormulaKind::kExSecond:
        n.op = f->kind == FormulaKind::kAllSecond ? Op::kAll2 : Op::kEx2;
        n.arity = f->arity;
        n.slot = new_second(f->arity);
        sc.second[f->var].push_back(n.slot);
        n.a = compile(f->lhs, sc);
        sc.second[f->var].pop_back();
        return push(std::move(n));
    }
    throw Error("unknown formula kind");
  }

  int compile_closure(const ClosureMatch& c, Scope& sc) {
    Node n;
    n.op = Op::kClosure;
    n.x_slot = prog->first_slots++;
    n.y_slot = prog->first_slots++;
    n.z_slot = prog->first_slots++;
    sc.first[c.step_from].push_back(n.x_slot);
    sc.first[c.step_to].push_back(n.y_slot);
    n.a = compile(c.step, sc);
    sc.first[c.step_to].pop_back();
    sc.first[c.step_from].pop_back();
    sc.first[c.start_var].push_back(n.z_slot);
    n.b = compile(c.start, sc);
    sc.first[c.start_var].pop_back();
    n.target = compile_term(c.target, sc);
    auto shape = And(ForallFirst(c.step_from, ForallFirst(c.step_to, c.step)), ForallFirst(c.start_var, c.start));
    set_key(n, shape, sc);
    return push(std::move(n));
  }

  Program& program_for(const FormulaPtr& f) {
    auto it = programs.find(f.get());
    if (it != programs.end()) return *it->second;
    auto p = std::make_unique<Program>();
    Program* saved = prog;
    prog = p.get();
    Scope sc;
    p->root = compile(f, sc);
    prog = saved;
    keep.push_back(f);
    return *programs.emplace(f.get(), std::move(p)).first->second;
  }

  // ---- evaluation ----

  std::optional<std::size_t> idx(Element e) const {
    if (e < direct.size()) {
      if (direct[e] < 0) return std::nullopt;
      return static_cast<std::size_t>(direct[e]);
    }
    auto it = index.find(e);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::size_t tuple_bit(const std::vector<std::size_t>& t) const {
    std::size_t bit = 0;
    std::size_t scale = 1;
    for (std::size_t i : t) {
      bit += i * scale;
      scale *= universe_size;
    }
    return bit;
  }

  Element term(int t) {
    const TermC& c = prog->terms[t];
    switch (c.kind) {
      case TermKind::kVar:
        return fv[c.slot];
      case TermKind::kZero:
        return m.octo({});
      case TermKind::kCard:
        return card(c.set);
    }
    return 0;
  }

  Element card(int s) {
    Rel r = set_value(s);
    for (std::size_t i = 0; i < r.bits.size(); ++i) {
      if (r.bits[i] & ~dom_union.bits[i]) throw Error("cardinality of a set that is not contained in the domains");
    }
    if (m.octo_table.empty()) return m.a(r.count());
    ElementSet members;
    for (std::size_t i = 0; i < universe_size; ++i) {
      if (r.test(i)) members.push_back(elems[i]);
    }
    std::sort(members.begin(), members.end());
    return m.octo(members);
  }

  Rel set_value(int s) {
    const SetC& c = prog->sets[s];
    switch (c.kind) {
      case SetKind::kVar:
        return sv[c.slot];
      case SetKind::kEmpty:
        return empty_rel(1);
      case SetKind::kUnion: {
        Rel l = set_value(c.lhs);
        Rel r = set_value(c.rhs);
        for (std::size_t i = 0; i < l.bits.size(); ++i) l.bits[i] |= r.bits[i];
        return l;
      }
      case SetKind::kMinus: {
        Rel l = set_value(c.lhs);
        if (auto i = idx(term(c.term))) l.reset(*i);
        return l;
      }
      case SetKind::kPlus1: {
        Rel l = set_value(c.lhs);
        auto i = idx(term(c.term));
        if (!i) throw Error("cardinality of a set that is not contained in the domains");
        l.set(*i);
        return l;
      }
      case SetKind::kSect: {
        Rel out = empty_rel(1);
        auto x = idx(term(c.term));
        if (!x) return out;
        const Rel& p = sv_of(c.lhs);
        for (std::size_t y = 0; y < universe_size; ++y) {
          if (p.test(*x + y * universe_size)) out.set(y);
        }
        return out;
      }
      case SetKind::kBigUSect: {
        Rel out = empty_rel(1);
        const Rel& p = sv_of(c.lhs);
        Rel over = set_value(c.rhs);
        for (std::size_t x = 0; x < universe_size; ++x) {
          if (!over.test(x)) continue;
          for (std::size_t y = 0; y < universe_size; ++y) {
            if (p.test(x + y * universe_size)) out.set(y);
          }
        }
        return out;
      }
    }
    throw Error("unknown set expression");
  }

  const Rel& sv_of(int s) const {
    const SetC& c = prog->sets[s];
    if (c.kind != SetKind::kVar) throw Error("relation operand must be a variable");
    return sv[c.slot];
  }

  bool member(int s, const std::vector<Element>& t) {
    const SetC& c = prog->sets[s];
    switch (c.kind) {
      case SetKind::kVar: {
        std::vector<std::size_t> ix;
        for (Element e : t) {
          auto i = idx(e);
          if (!i) return false;
          ix.push_back(*i);
        }
        return sv[c.slot].test(tuple_bit(ix));
      }
      case SetKind::kEmpty:
        return false;
      case SetKind::kUnion:
        return member(c.lhs, t) || member(c.rhs, t);
      case SetKind::kMinus:
        return t[0] != term(c.term) && member(c.lhs, t);
      case SetKind::kPlus1:
        return t[0] == term(c.term) || member(c.lhs, t);
      case SetKind::kSect:
        return member(c.lhs, {term(c.term), t[0]});
      case SetKind::kBigUSect: {
        auto y = idx(t[0]);
        if (!y) return false;
        const Rel& p = sv_of(c.lhs);
        for (std::size_t x = 0; x < universe_size; ++x) {
          if (p.test(x + *y * universe_size) && member(c.rhs, {elems[x]})) return true;
        }
        return false;
      }
    }
    return false;
  }

  Key key_of(const Node& n, std::size_t w) const {
    Key k{static_cast<std::uint64_t>(n.canon), w};
    for (int s : n.key_first) k.push_back(fv[s]);
    for (int s : n.key_second) k.insert(k.end(), sv[s].bits.begin(), sv[s].bits.end());
    return k;
  }

  const std::vector<std::size_t>& tuple_positions(std::size_t w, int arity) {
    auto key = std::make_pair(w, arity);
    auto it = positions.find(key);
    if (it != positions.end()) return it->second;
    std::vector<std::size_t> out;
    const auto& d = dom_idx[w];
    std::size_t total = 1;
    for (int i = 0; i < arity; ++i) total *= d.size();
    std::vector<std::size_t> digits(arity, 0);
    for (std::size_t n = 0; n < total; ++n) {
      std::vector<std::size_t> t;
      for (int i = 0; i < arity; ++i) t.push_back(d[digits[i]]);
      out.push_back(tuple_bit(t));
      for (int i = 0; i < arity; ++i) {
        if (++digits[i] < d.size()) break;
        digits[i] = 0;
      }
    }
    return positions.emplace(key, std::move(out)).first->second;
  }

  bool succ_fast(Element x, Element y, std::size_t w) const {
    auto it = inverse.find(y);
    if (it == inverse.end()) return false;
    for (std::size_t k : it->second) {
      if (k >= 1 && k <= reach[w] && m.numbering[k - 1] == x) return true;
    }
    return false;
  }

  bool plus_fast(Element a, Element b, Element c, std::size_t w) const {
    auto ia = inverse.find(a);
    auto ib = inverse.find(b);
    if (ia == inverse.end() || ib == inverse.end()) return false;
    for (std::size_t i : ia->second) {
      for (std::size_t j : ib->second) {
        if (i + j <= reach[w] && has_numbering(i + j) && m.numbering[i + j] == c) return true;
      }
    }
    return false;
  }

  bool times_fast(Element a, Element b, Element c, std::size_t w) const {
    if (!m.numbering.empty() && b == m.numbering[0] && c == m.numbering[0]) return true;
    auto ia = inverse.find(a);
    auto ib = inverse.find(b);
    if (ia == inverse.end() || ib == inverse.end()) return false;
    for (std::size_t j : ib->second) {
      if (j == 0 || j > reach[w]) continue;
      for (std::size_t i : ia->second) {
        if (i * j <= reach[w] && has_numbering(i * j) && m.numbering[i * j] == c) return true;
      }
    }
    return false;
  }

  RawResult shape(bool value) const { return {value, m.open && !value}; }

  RawResult ev(int id, std::size_t w) {
    const Node& n = prog->nodes[id];
    switch (n.op) {
      case Op::kEq:
        return {term(n.terms[0]) == term(n.terms[1]), false};
      case Op::kApp: {
        const SetC& sc = prog->sets[n.set];
        if (sc.kind == SetKind::kVar) {
          std::size_t bit = 0;
          std::size_t scale = 1;
          for (int a : n.terms) {
            auto i = idx(term(a));
            if (!i) return {false, false};
            bit += *i * scale;
            scale *= universe_size;
          }
          return {sv[sc.slot].test(bit), false};
        }
        std::vector<Element> t;
        for (int a : n.terms) t.push_back(term(a));
        return {member(n.set, t), false};
      }
      case Op::kNot: {
        RawResult r = ev(n.a, w);
        return {!r.value, r.boundary};
      }
      case Op::kAnd:
      case Op::kOr:
      case Op::kImplies: {
        RawResult l = ev(n.a, w);
        bool lv = n.op == Op::kImplies ? !l.value : l.value;
        if (n.op == Op::kAnd ? !lv : lv) return {lv, l.boundary};
        RawResult r = ev(n.b, w);
        return {r.value, l.boundary || r.boundary};
      }
      case Op::kIff: {
        RawResult l = ev(n.a, w);
        RawResult r = ev(n.b, w);
        return {l.value == r.value, l.boundary || r.boundary};
      }
      case Op::kBox:
      case Op::kDia: {
        Key k = key_of(n, w);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        bool want = n.op == Op::kDia;
        RawResult out{!want, false};
        for (std::size_t s : n.op == Op::kBox ? box_range[w] : dia_range[w]) {
          RawResult r = ev(n.a, s);
          out.boundary = out.boundary || r.boundary;
          if (r.value == want) {
            out.value = want;
            break;
          }
        }
        if (n.op == Op::kDia && !out.value && m.open) out.boundary = true;
        memo.emplace(std::move(k), out);
        return out;
      }
      case Op::kAll1:
      case Op::kEx1: {
        bool want = n.op == Op::kEx1;
        RawResult out{!want, false};
        for (Element e : m.dom[w]) {
          fv[n.slot] = e;
          RawResult r = ev(n.a, w);
          out.boundary = out.boundary || r.boundary;
          if (r.value == want) {
            out.value = want;
            break;
          }
        }
        return out;
      }
      case Op::kAll2:
      case Op::kEx2: {
        bool want = n.op == Op::kEx2;
        const auto& pos = tuple_positions(w, n.arity);
        if (pos.size() > static_cast<std::size_t>(opts.max_bits)) {
          throw Error("cost guard: second-order quantifier over 2^" + std::to_string(pos.size()) +
                      " relations exceeds the limit 2^" + std::to_string(opts.max_bits));
        }
        Rel& rel = sv[n.slot];
        rel = empty_rel(n.arity);
        RawResult out{!want, false};
        std::uint64_t total = 1ULL << pos.size();
        for (std::uint64_t i = 0; i < total; ++i) {
          if (i > 0) rel.flip(pos[std::countr_zero(i)]);
          RawResult r = ev(n.a, w);
          out.boundary = out.boundary || r.boundary;
          if (r.value == want) {
            out.value = want;
            break;
          }
        }
        return out;
      }
      case Op::kSucc:
        return shape(succ_fast(term(n.terms[0]), term(n.terms[1]), w));
      case Op::kPlus:
        return shape(plus_fast(term(n.terms[0]), term(n.terms[1]), term(n.terms[2]), w));
      case Op::kTimes:
        return shape(times_fast(term(n.terms[0]), term(n.terms[1]), term(n.terms[2]), w));
      case Op::kClosure: {
        const auto& [set, boundary] = closure(n, w);
        auto t = idx(term(n.target));
        return {t && set.test(*t), boundary};
      }
    }
    throw Error("unknown node");
  }

  const std::pair<Rel, bool>& closure(const Node& n, std::size_t w) {
    Key k = key_of(n, w);
    auto it = closures.find(k);
    if (it != closures.end()) return it->second;
    Rel set = empty_rel(1);
    bool boundary = false;
    std::vector<std::size_t> work;
    for (std::size_t z : dom_idx[w]) {
      fv[n.z_slot] = elems[z];
      RawResult r = ev(n.b, w);
      boundary = boundary || r.boundary;
      if (r.value) {
        set.set(z);
        work.push_back(z);
      }
    }
    while (!work.empty()) {
      std::size_t x = work.back();
      work.pop_back();
      for (std::size_t y : dom_idx[w]) {
        if (set.test(y)) continue;
        fv[n.x_slot] = elems[x];
        fv[n.y_slot] = elems[y];
        RawResult r = ev(n.a, w);
        boundary = boundary || r.boundary;
        if (r.value) {
          set.set(y);
          work.push_back(y);
        }
      }
    }
    return closures.emplace(std::move(k), std::make_pair(std::move(set), boundary)).first->second;
  }

  RawResult run(std::size_t w, const FormulaPtr& f, const Env& env) {
    if (w >= m.size()) throw Error("world index out of range");
    Program& p = program_for(f);
    prog = &p;
    fv.assign(p.first_slots, 0);
    sv.assign(p.second_slots, Rel{});
    for (int s = 0; s < p.second_slots; ++s) sv[s] = empty_rel(p.second_arity[s]);
    for (const auto& [name, slot] : p.free_first) {
      auto it = env.first.find(name);
      if (it == env.first.end()) throw Error("no value for free variable " + name);
      fv[slot] = it->second;
    }
    for (const auto& [name, slot] : p.free_second) {
      auto it = env.second.find(name);
      if (it == env.second.end()) throw Error("no value for free relation variable " + name);
      for (const Tuple& t : it->second) {
        if (static_cast<int>(t.size()) != p.second_arity[slot]) throw Error("arity mismatch for " + name);
        std::vector<std::size_t> ix;
        for (Element e : t) {
          auto i = idx(e);
          if (!i) throw Error("relation " + name + " mentions an element outside every domain");
          ix.push_back(*i);
        }
        sv[slot].set(tuple_bit(ix));
      }
    }
    return ev(p.root, w);
  }
};

Evaluator::Evaluator(const FiniteModel& m, EvalOptions opts)
    : model_(m), impl_(std::make_unique<Impl>(m, opts)) {}

Evaluator::~Evaluator() = default;

RawResult Evaluator::raw(std::size_t w, const FormulaPtr& f, const Env& env) { return impl_->run(w, f, env); }

namespace {

bool faithful_at(const FiniteModel& m, std::size_t w, int demand) {
  return !m.open || m.horizon_rank(w) >= demand;
}

Truth settle(const RawResult& r, bool faithful) {
  if (!faithful && r.boundary) return Truth::kUnknown;
  return r.value ? Truth::kTrue : Truth::kFalse;
}

std::vector<std::size_t> truncation_successors(const FiniteModel& m, std::size_t w) {
  std::vector<std::size_t> out;
  for (std::size_t s : m.successors(w)) {
    if (!m.in_truncation(w) || m.in_truncation(s)) out.push_back(s);
  }
  return out;
}

// Calls fn on every assignment of vars to elements of dom.
void for_each_assignment(const std::vector<std::string>& vars, const ElementSet& dom,
                         const std::function<bool(const std::map<std::string, Element>&)>& fn) {
  std::map<std::string, Element> env;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == vars.size()) return fn(env);
    for (Element e : dom) {
      env[vars[i]] = e;
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  rec(0);
}

// Follows universal structure down to the place where f fails.
void explain(Evaluator& ev, std::size_t w, const FormulaPtr& f, Env& env, Witness& out, int budget) {
  if (budget == 0) return;
  const FiniteModel& m = ev.model();
  switch (f->kind) {
    case FormulaKind::kBox:
      for (std::size_t s : truncation_successors(m, w)) {
        if (!ev.holds(s, f->lhs, env)) {
          out.world = m.world_ids[s];
          explain(ev, s, f->lhs, env, out, budget - 1);
          return;
        }
      }
      return;
    case FormulaKind::kAllFirst:
      for (Element e : m.dom[w]) {
        Env inner = env;
        inner.first[f->var] = e;
        if (!ev.holds(w, f->lhs, inner)) {
          env = std::move(inner);
          out.env[f->var] = e;
          explain(ev, w, f->lhs, env, out, budget - 1);
          return;
        }
      }
      return;
    case FormulaKind::kImplies:
      explain(ev, w, f->rhs, env, out, budget - 1);
      return;
    case FormulaKind::kAnd:
      explain(ev, w, ev.holds(w, f->lhs, env) ? f->rhs : f->lhs, env, out, budget - 1);
      return;
    default:
      out.note = render(f);
      return;
  }
}

Truth combine(Truth acc, Truth v) {
  if (acc == Truth::kFalse || v == Truth::kFalse) return Truth::kFalse;
  if (acc == Truth::kUnknown || v == Truth::kUnknown) return Truth::kUnknown;
  return Truth::kTrue;
}

bool passes(const SuiteReport& r) {
  for (const auto& w : r.per_world) {
    if (w.faithful && w.value != Truth::kTrue) return false;
  }
  return true;
}

}  // namespace

Verdict Evaluator::eval(std::size_t w, const FormulaPtr& f, const Env& env) {
  RawResult r = raw(w, f, env);
  bool faithful = faithful_at(model_, w, demand(f));
  return {settle(r, faithful), faithful};
}

Verdict eval(const FiniteModel& m, std::size_t w, const Env& env, const FormulaPtr& f) {
  Evaluator ev(m);
  return ev.eval(w, f, env);
}

bool holds_N(const FiniteModel& m, std::size_t w, Element x) {
  NameSupply names({"x"});
  Evaluator ev(m);
  return ev.holds(w, natural(Var("x"), names), Env{{{"x", x}}, {}});
}

ElementSet naturals_at(const FiniteModel& m, std::size_t w) {
  NameSupply names({"x"});
  auto f = natural(Var("x"), names);
  Evaluator ev(m);
  ElementSet out;
  for (Element e : m.dom.at(w)) {
    if (ev.holds(w, f, Env{{{"x", e}}, {}})) out.push_back(e);
  }
  return out;
}

ElementSet naturals_expected(const FiniteModel& m, std::size_t w) {
  const ElementSet& d = m.dom.at(w);
  ElementSet out;
  for (std::size_t k = 0; k < m.numbering.size(); ++k) {
    Element v = m.numbering[k];
    if (!std::binary_search(d.begin(), d.end(), v)) break;
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ancestral_fast(const FiniteModel& m, std::size_t w, const std::vector<std::pair<Element, Element>>& rel,
                    Element a, Element b, bool weak) {
  if (weak && a == b) return true;
  const ElementSet& d = m.dom.at(w);
  auto in_dom = [&](Element e) { return std::binary_search(d.begin(), d.end(), e); };
  std::set<Element> seen;
  std::vector<Element> work;
  for (const auto& [x, y] : rel) {
    if (x == a && in_dom(y) && seen.insert(y).second) work.push_back(y);
  }
  while (!work.empty()) {
    Element x = work.back();
    work.pop_back();
    for (const auto& [p, q] : rel) {
      if (p == x && in_dom(q) && seen.insert(q).second) work.push_back(q);
    }
  }
  return seen.count(b) > 0;
}

SuiteReport check_valid(const FiniteModel& m, const FormulaPtr& f, const CheckOptions& opts) {
  Evaluator ev(m, opts.eval);
  return check_valid(ev, f, opts);
}

SuiteReport check_valid(Evaluator& ev, const FormulaPtr& f, const CheckOptions& opts) {
  const FiniteModel& m = ev.model();
  SuiteReport rep;
  rep.formula = render(f);
  int need = demand(f);
  for (std::size_t w = 0; w < m.truncated; ++w) {
    if (opts.max_domain != 0 && m.dom[w].size() > opts.max_domain) continue;
    WorldVerdict wv;
    wv.world = m.world_ids[w];
    wv.faithful = faithful_at(m, w, need);
    wv.value = Truth::kTrue;
    for_each_assignment(opts.free_first, m.dom[w], [&](const std::map<std::string, Element>& assignment) {
      Env env{assignment, {}};
      Truth v = settle(ev.raw(w, f, env), wv.faithful);
      wv.value = combine(wv.value, v);
      if (v != Truth::kFalse) return true;
      Witness wit;
      wit.env = assignment;
      explain(ev, w, f, env, wit, 64);
      wv.witness = std::move(wit);
      return false;
    });
    rep.per_world.push_back(std::move(wv));
  }
  rep.pass = passes(rep);
  return rep;
}

SuiteReport check_stability(const FiniteModel& m, const FormulaPtr& f, const std::vector<std::string>& vars) {
  Evaluator ev(m);
  return check_stability(ev, f, vars);
}

SuiteReport check_stability(Evaluator& ev, const FormulaPtr& f, const std::vector<std::string>& vars) {
  const FiniteModel& m = ev.model();
  SuiteReport rep;
  rep.formula = render(f);
  int need = demand(f);
  for (std::size_t w = 0; w < m.truncated; ++w) {
    WorldVerdict wv;
    wv.world = m.world_ids[w];
    wv.faithful = faithful_at(m, w, need);
    for (std::size_t s : truncation_successors(m, w)) wv.faithful = wv.faithful && faithful_at(m, s, need);
    wv.value = Truth::kTrue;
    for_each_assignment(vars, m.dom[w], [&](const std::map<std::string, Element>& assignment) {
      Env env{assignment, {}};
      Truth here = settle(ev.raw(w, f, env), faithful_at(m, w, need));
      if (here == Truth::kFalse) return true;
      for (std::size_t s : truncation_successors(m, w)) {
        bool ok_s = faithful_at(m, s, need);
        Truth there = settle(ev.raw(s, f, env), ok_s);
        if (here == Truth::kTrue && there == Truth::kFalse) {
          wv.value = Truth::kFalse;
          wv.faithful = faithful_at(m, w, need) && ok_s;
          wv.witness = Witness{m.world_ids[s], assignment, "true here but false at the accessible world"};
          return false;
        }
        if (there == Truth::kUnknown || here == Truth::kUnknown) wv.value = combine(wv.value, Truth::kUnknown);
      }
      return true;
    });
    rep.per_world.push_back(std::move(wv));
  }
  rep.pass = passes(rep);
  return rep;
}

std::string to_json(const SuiteReport& r) {
  nlohmann::ordered_json j;
  if (!r.name.empty()) j["name"] = r.name;
  j["formula"] = r.formula;
  j["per_world"] = nlohmann::ordered_json::array();
  for (const auto& w : r.per_world) {
    nlohmann::ordered_json e;
    e["world"] = to_decimal(w.world);
    e["value"] = to_string(w.value);
    e["faithful"] = w.faithful;
    if (w.witness) {
      nlohmann::ordered_json wit;
      if (w.witness->world) wit["world"] = to_decimal(*w.witness->world);
      wit["env"] = nlohmann::ordered_json::object();
      for (const auto& [k, v] : w.witness->env) wit["env"][k] = v;
      if (!w.witness->note.empty()) wit["note"] = w.witness->note;
      e["witness"] = wit;
    }
    j["per_world"].push_back(e);
  }
  j["pass"] = r.pass;
  return j.dump(2);
}

}  // namespace pimodel
