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

#include "pimodel/arithmetize.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <string_view>
#include <functional>
#include <unordered_map>

#include <boost/container_hash/hash.hpp>

#include "pimodel/classify.hpp"

namespace pimodel {

namespace {

CArg name(std::string n) { return CArg{false, std::move(n), 0}; }
CArg lit(std::uint64_t v) { return CArg{true, "", v}; }

CPtr atom(CKind k, std::vector<CArg> args, int arity = 0) {
  auto f = std::make_shared<CFormula>();
  f->kind = k;
  f->args = std::move(args);
  f->arity = arity;
  return f;
}

CPtr unary(CKind k, CPtr a) {
  auto f = std::make_shared<CFormula>();
  f->kind = k;
  f->lhs = std::move(a);
  return f;
}

CPtr binary(CKind k, CPtr a, CPtr b) {
  auto f = std::make_shared<CFormula>();
  f->kind = k;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

CPtr quant(CKind k, std::string v, CPtr body) {
  auto f = std::make_shared<CFormula>();
  f->kind = k;
  f->var = std::move(v);
  f->lhs = std::move(body);
  return f;
}

CPtr cand(CPtr a, CPtr b) { return binary(CKind::kAnd, std::move(a), std::move(b)); }
CPtr cimp(CPtr a, CPtr b) { return binary(CKind::kImplies, std::move(a), std::move(b)); }

class Arithmetizer {
 public:
  explicit Arithmetizer(std::set<std::string> reserved) : names_(std::move(reserved)) {}

  CPtr run(const FormulaPtr& f, const std::string& w) {
    switch (f->kind) {
      case FormulaKind::kEq:
        return equation(f->lhs_term, f->rhs_term);
      case FormulaKind::kApp:
        return application(f, w);
      case FormulaKind::kNot:
        return unary(CKind::kNot, run(f->lhs, w));
      case FormulaKind::kAnd:
        return cand(run(f->lhs, w), run(f->rhs, w));
      case FormulaKind::kOr:
        return binary(CKind::kOr, run(f->lhs, w), run(f->rhs, w));
      case FormulaKind::kImplies:
        return cimp(run(f->lhs, w), run(f->rhs, w));
      case FormulaKind::kIff:
        return binary(CKind::kIff, run(f->lhs, w), run(f->rhs, w));
      case FormulaKind::kBox: {
        std::string s = names_.fresh("s");
        return quant(CKind::kAll, s,
                     cimp(atom(CKind::kWorld, {name(s)}), cimp(atom(CKind::kAcc, {name(w), name(s)}), run(f->lhs, s))));
      }
      case FormulaKind::kDia: {
        std::string s = names_.fresh("s");
        return quant(CKind::kEx, s,
                     cand(atom(CKind::kWorld, {name(s)}), cand(atom(CKind::kAcc, {name(w), name(s)}), run(f->lhs, s))));
      }
      case FormulaKind::kAllFirst:
        return quant(CKind::kAll, f->var, cimp(in_domain(f->var, w), run(f->lhs, w)));
      case FormulaKind::kExFirst:
        return quant(CKind::kEx, f->var, cand(in_domain(f->var, w), run(f->lhs, w)));
      case FormulaKind::kAllSecond:
      case FormulaKind::kExSecond:
        return relation_quantifier(f, w);
    }
    throw Error("unknown formula kind");
  }

 private:
  // Ex Y (D_M(w, Y) & Eu (x = [Y]_u)).
  CPtr in_domain(const std::string& x, const std::string& w) {
    std::string y = names_.fresh("Y");
    std::string u = names_.fresh("u");
    return quant(CKind::kEx, y,
                 cand(atom(CKind::kDom, {name(w), name(y)}),
                      quant(CKind::kEx, u, atom(CKind::kElemAt, {name(x), name(y), name(u)}))));
  }

  // Set argument of #_M: a variable or the empty sequence code.
  static CArg set_arg(const TermPtr& t) {
    if (t->kind == TermKind::kZero) return lit(1);
    if (t->set->kind != SetKind::kVar) throw Error("composite set left after expansion: " + render(t));
    return name(t->set->name);
  }

  CPtr equation(const TermPtr& l, const TermPtr& r) {
    bool lv = l->kind == TermKind::kVar;
    bool rv = r->kind == TermKind::kVar;
    if (lv && rv) return atom(CKind::kEq, {name(l->name), name(r->name)});
    if (lv) return atom(CKind::kCard, {set_arg(r), name(l->name)});
    if (rv) return atom(CKind::kCard, {set_arg(l), name(r->name)});
    std::string v = names_.fresh("v");
    return quant(CKind::kEx, v, cand(atom(CKind::kCard, {set_arg(l), name(v)}), atom(CKind::kCard, {set_arg(r), name(v)})));
  }

  CPtr application(const FormulaPtr& f, const std::string& w) {
    if (f->set->kind != SetKind::kVar) throw Error("composite set left after expansion: " + render(f));
    std::vector<std::pair<std::string, CArg>> defs;
    std::vector<CArg> args;
    for (const auto& t : f->args) {
      if (t->kind == TermKind::kVar) {
        args.push_back(name(t->name));
      } else {
        std::string v = names_.fresh("v");
        defs.emplace_back(v, set_arg(t));
        args.push_back(name(v));
      }
    }
    CPtr out;
    if (f->set->arity == 1) {
      std::string u = names_.fresh("u");
      out = quant(CKind::kEx, u, atom(CKind::kElemAt, {args[0], name(f->set->name), name(u)}));
    } else {
      args.insert(args.begin(), name(f->set->name));
      out = atom(CKind::kTupleIn, args);
    }
    (void)w;
    for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
      out = quant(CKind::kEx, it->first, cand(atom(CKind::kCard, {it->second, name(it->first)}), out));
    }
    return out;
  }

  CPtr relation_quantifier(const FormulaPtr& f, const std::string& w) {
    bool all = f->kind == FormulaKind::kAllSecond;
    std::string x = names_.fresh("X");
    CPtr guard;
    if (f->arity == 1) {
      guard = cand(atom(CKind::kSeq, {name(f->var)}),
                   quant(CKind::kEx, x, cand(atom(CKind::kDom, {name(w), name(x)}), atom(CKind::kSub, {name(f->var), name(x)}))));
    } else {
      guard = cand(atom(CKind::kNSeq, {name(f->var)}, f->arity),
                   quant(CKind::kEx, x,
                         cand(atom(CKind::kDom, {name(w), name(x)}), atom(CKind::kWithin, {name(f->var), name(x)}, f->arity))));
    }
    // Ex H (Az (H z <-> psi) & rest): H is fixed by psi.
    const FormulaPtr& b = f->lhs;
    if (!all && f->arity == 1 && b->kind == FormulaKind::kAnd && b->lhs->kind == FormulaKind::kAllFirst &&
        b->lhs->lhs->kind == FormulaKind::kIff) {
      const FormulaPtr& iff = b->lhs->lhs;
      const std::string& z = b->lhs->var;
      bool shape = iff->lhs->kind == FormulaKind::kApp && iff->lhs->set->kind == SetKind::kVar &&
                   iff->lhs->set->name == f->var && iff->lhs->args.size() == 1 &&
                   iff->lhs->args[0]->kind == TermKind::kVar && iff->lhs->args[0]->name == z &&
                   !free_vars(iff->rhs).second.count(f->var);
      if (shape) {
        CPtr zguard = in_domain(z, w);
        CPtr def = run(iff->rhs, w);
        CPtr member = run(iff->lhs, w);
        CPtr rest = run(b->rhs, w);
        CPtr body = cand(quant(CKind::kAll, z, cimp(zguard, binary(CKind::kIff, member, def))), rest);
        auto q = std::make_shared<CFormula>();
        q->kind = CKind::kEx;
        q->var = f->var;
        q->lhs = cand(guard, body);
        q->defined = true;
        q->def_var = z;
        q->def_guard = zguard;
        q->def_body = def;
        return q;
      }
    }
    CPtr body = run(f->lhs, w);
    return quant(all ? CKind::kAll : CKind::kEx, f->var, all ? cimp(guard, body) : cand(guard, body));
  }

  NameSupply names_;
};

std::string arg_str(const CArg& a) { return a.literal ? std::to_string(a.value) : a.name; }

void render_to(const CPtr& f, std::string& out) {
  auto args = [&](const char* head) {
    out += "(";
    out += head;
    for (const auto& a : f->args) out += " " + arg_str(a);
    out += ")";
  };
  switch (f->kind) {
    case CKind::kEq:
      return args("=");
    case CKind::kCard:
      return args("#M");
    case CKind::kElemAt:
      return args("at");
    case CKind::kWorld:
      return args("W");
    case CKind::kAcc:
      return args("R");
    case CKind::kDom:
      return args("D");
    case CKind::kSeq:
      return args("Seq");
    case CKind::kNSeq:
      out += "(nSeq " + std::to_string(f->arity) + " " + arg_str(f->args[0]) + ")";
      return;
    case CKind::kSub:
      return args("sb");
    case CKind::kTupleIn:
      return args("in");
    case CKind::kWithin:
      return args("within");
    case CKind::kNot:
      out += "(not ";
      render_to(f->lhs, out);
      out += ")";
      return;
    case CKind::kAnd:
    case CKind::kOr:
    case CKind::kImplies:
    case CKind::kIff:
      out += f->kind == CKind::kAnd ? "(and " : f->kind == CKind::kOr ? "(or " : f->kind == CKind::kImplies ? "(-> " : "(<-> ";
      render_to(f->lhs, out);
      out += " ";
      render_to(f->rhs, out);
      out += ")";
      return;
    case CKind::kAll:
    case CKind::kEx:
      out += (f->kind == CKind::kAll ? "(all " : "(ex ") + f->var + " ";
      render_to(f->lhs, out);
      out += ")";
      return;
  }
}

void collect_free(const CPtr& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (!f) return;
  for (const auto& a : f->args) {
    if (!a.literal && !bound.count(a.name)) out.insert(a.name);
  }
  if (f->kind == CKind::kAll || f->kind == CKind::kEx) {
    bool fresh = bound.insert(f->var).second;
    collect_free(f->lhs, bound, out);
    if (fresh) bound.erase(f->var);
    return;
  }
  collect_free(f->lhs, bound, out);
  collect_free(f->rhs, bound, out);
}

}  // namespace

CPtr arithmetize(const FormulaPtr& f) {
  FormulaPtr g = expand_set_shorthand(f);
  auto reserved = all_names(g);
  if (reserved.count("w")) throw Error("variable name w is reserved for the world parameter");
  reserved.insert("w");
  Arithmetizer a(reserved);
  return a.run(g, "w");
}

std::string render(const CPtr& f) {
  std::string out;
  render_to(f, out);
  return out;
}

std::set<std::string> free_vars(const CPtr& f) {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

namespace {

struct Val {
  enum Kind : std::uint8_t { kNum, kSet, kRel } kind = kNum;
  std::uint64_t num = 0;
  std::uint64_t bits = 0;  // kSet, kRel over universe indices
  int arity = 1;
  // A relation whose tuples are decided on first read during a search.
  bool partial = false;
};

Val num(std::uint64_t n) { return Val{Val::kNum, n, 0, 1}; }
Val set_val(std::uint64_t bits) { return Val{Val::kSet, 0, bits, 1}; }
Val rel_val(std::uint64_t bits, int arity) { return Val{Val::kRel, 0, bits, arity}; }

// Candidate values of a quantified variable.
struct Cands {
  std::vector<Val> list;
  // All subsets of `base` (arity 1) or all relations over base^arity.
  bool lazy = false;
  std::uint64_t base = 0;
  int arity = 1;
};

}  // namespace

struct CodedEvaluator::Impl {
  std::size_t worlds = 0;
  std::vector<std::vector<char>> acc;
  std::vector<std::uint64_t> dom;  // bitmask per world
  std::vector<Element> elems;
  std::map<std::uint64_t, Element> numbering;
  std::map<std::uint64_t, Element> octo;  // set bitmask -> value
  std::vector<std::pair<std::string_view, Val>> env;
  std::deque<std::string> env_names;

  // Lazily decided relation bits of the relation currently searched.
  struct Branch {
    bool active = false;
    std::uint64_t full = 0;
    std::uint64_t assigned = 0;
    std::uint64_t values = 0;
    std::vector<int> decisions;
  } br;

  bool read_bit(std::size_t b) {
    if (b >= 64 || !(br.full >> b & 1)) return false;
    if (br.assigned >> b & 1) return br.values >> b & 1;
    br.assigned |= 1ULL << b;
    br.decisions.push_back(static_cast<int>(b));
    return false;
  }

  std::uint64_t read_mask(std::uint64_t m) {
    for (std::size_t b = 0; b < 64; ++b) {
      if (m >> b & 1) read_bit(b);
    }
    return br.values & m;
  }

  Val resolve(Val v) {
    if (v.partial) {
      v.bits = read_mask(~0ULL);
      v.partial = false;
    }
    return v;
  }
  std::vector<CPtr> keep;  // memo keys hold node addresses
  std::unordered_map<const CFormula*, std::set<std::string>> free_cache;
  std::unordered_map<std::vector<std::uint64_t>, bool, boost::hash<std::vector<std::uint64_t>>> memo;

  explicit Impl(const CodedModel& c) {
    worlds = c.worlds.size();
    for (std::size_t i = 0; i < worlds; ++i) {
      if (c.worlds[i].factored() || c.worlds[i].value() != i) throw Error("malformed world code " + c.worlds[i].str());
    }
    acc.assign(worlds, std::vector<char>(worlds, 0));
    for (const auto& code : c.access) {
      auto [i, j] = decode_pair(code);
      if (i >= worlds || j >= worlds) throw Error("malformed accessibility code " + code.str());
      acc[i.convert_to<std::size_t>()][j.convert_to<std::size_t>()] = 1;
    }
    std::vector<ElementSet> sets(worlds);
    std::set<Element> all;
    for (const auto& code : c.domains) {
      auto [w, seq] = decode_pair(code);
      if (w >= worlds || !is_seq_code(seq)) throw Error("malformed domain code " + code.str());
      sets[w.convert_to<std::size_t>()] = decode_seq(seq);
      for (Element e : sets[w.convert_to<std::size_t>()]) all.insert(e);
    }
    std::vector<std::pair<ElementSet, Element>> overrides;
    for (const auto& code : c.octo_table) {
      auto [seq, v] = decode_pair(code);
      if (!is_seq_code(seq)) throw Error("malformed octothorpe code " + code.str());
      overrides.emplace_back(decode_seq(seq), v.convert_to<Element>());
    }
    elems.assign(all.begin(), all.end());
    if (elems.size() > 8) throw Error("coded evaluation supports at most 8 domain elements");
    dom.assign(worlds, 0);
    for (std::size_t w = 0; w < worlds; ++w) dom[w] = mask_of(sets[w]);
    for (const auto& code : c.numbering) {
      auto [n, v] = decode_pair(code);
      numbering[n.convert_to<std::uint64_t>()] = v.convert_to<Element>();
    }
    for (const auto& [s, v] : overrides) octo[mask_of(s)] = v;
  }

  std::size_t index_of(Element e) const {
    auto it = std::lower_bound(elems.begin(), elems.end(), e);
    if (it == elems.end() || *it != e) return elems.size();
    return static_cast<std::size_t>(it - elems.begin());
  }

  std::uint64_t mask_of(const ElementSet& s) const {
    std::uint64_t m = 0;
    for (Element e : s) {
      std::size_t i = index_of(e);
      if (i == elems.size()) throw Error("element outside the coded domains");
      m |= 1ULL << i;
    }
    return m;
  }

  std::vector<Element> members(std::uint64_t bits) const {
    std::vector<Element> out;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (bits >> i & 1) out.push_back(elems[i]);
    }
    return out;
  }

  // ---- values ----

  const Val* lookup(std::string_view n) const {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      if (it->first == n) return &it->second;
    }
    return nullptr;
  }

  std::optional<Val> maybe(const CArg& a) {
    if (a.literal) return num(a.value);
    if (const Val* v = lookup(a.name)) return resolve(*v);
    return std::nullopt;
  }

  Val get_raw(const CArg& a) const {
    if (a.literal) return num(a.value);
    if (const Val* v = lookup(a.name)) return *v;
    throw Error("no value for " + a.name);
  }

  Val get(const CArg& a) { return resolve(get_raw(a)); }

  BigNat code(const Val& v) const {
    switch (v.kind) {
      case Val::kNum:
        return v.num;
      case Val::kSet:
        return encode_seq(members(v.bits));
      case Val::kRel: {
        std::vector<BigNat> tuples;
        for (std::size_t b = 0; b < 64; ++b) {
          if (v.bits >> b & 1) tuples.push_back(encode_tuple(tuple_of(b, v.arity)));
        }
        std::sort(tuples.begin(), tuples.end());
        BigNat out = 1;
        for (std::size_t i = 0; i < tuples.size(); ++i) out *= boost::multiprecision::pow(BigNat(prime(i)), static_cast<unsigned>(tuples[i] + 1));
        return out;
      }
    }
    return 0;
  }

  std::vector<std::uint64_t> tuple_of(std::size_t bit, int arity) const {
    std::vector<std::uint64_t> t;
    for (int i = 0; i < arity; ++i) {
      t.push_back(elems[bit % elems.size()]);
      bit /= elems.size();
    }
    return t;
  }

  // Sets written as numbers are read as sequence codes.
  std::optional<std::uint64_t> as_set(const Val& v) const {
    if (v.kind == Val::kSet) return v.bits;
    if (v.kind == Val::kRel) return std::nullopt;
    if (!is_seq_code(v.num)) return std::nullopt;
    std::uint64_t m = 0;
    for (Element e : decode_seq(v.num)) {
      std::size_t i = index_of(e);
      if (i == elems.size()) return std::nullopt;
      m |= 1ULL << i;
    }
    return m;
  }

  bool equal(const Val& a, const Val& b) const {
    if (a.kind == b.kind && a.kind == Val::kNum) return a.num == b.num;
    if (a.kind == b.kind && a.kind != Val::kNum) return a.bits == b.bits && a.arity == b.arity;
    return code(a) == code(b);
  }

  std::optional<Element> card_value(std::uint64_t bits) const {
    auto o = octo.find(bits);
    if (o != octo.end()) return o->second;
    auto it = numbering.find(static_cast<std::uint64_t>(std::popcount(bits)));
    if (it == numbering.end()) return std::nullopt;
    return it->second;
  }

  std::size_t rel_bit(const std::vector<Val>& t) const {
    std::size_t bit = 0;
    std::size_t scale = 1;
    for (const Val& v : t) {
      if (v.kind != Val::kNum) return 64;
      std::size_t i = index_of(v.num);
      if (i == elems.size()) return 64;
      bit += i * scale;
      scale *= elems.size();
    }
    return bit;
  }

  std::uint64_t rel_space(std::uint64_t base, int arity) const {
    std::size_t total = 1;
    for (int i = 0; i < arity; ++i) total *= elems.size();
    if (total > 64) throw Error("coded evaluation supports relations over at most 64 tuples");
    std::uint64_t out = 0;
    for (std::size_t b = 0; b < total; ++b) {
      std::size_t r = b;
      bool ok = true;
      for (int i = 0; i < arity; ++i) {
        ok = ok && (base >> (r % elems.size()) & 1);
        r /= elems.size();
      }
      if (ok) out |= 1ULL << b;
    }
    return out;
  }

  // ---- atoms ----

  bool atom(const CFormula& f) {
    const auto& a = f.args;
    switch (f.kind) {
      case CKind::kEq:
        return equal(get(a[0]), get(a[1]));
      case CKind::kCard: {
        auto s = as_set(get(a[0]));
        Val x = get(a[1]);
        if (!s || x.kind != Val::kNum) return false;
        auto v = card_value(*s);
        return v && *v == x.num;
      }
      case CKind::kElemAt: {
        Val x = get(a[0]);
        auto s = as_set(get(a[1]));
        Val u = get(a[2]);
        if (!s || x.kind != Val::kNum || u.kind != Val::kNum) return false;
        auto m = members(*s);
        return u.num < m.size() && m[u.num] == x.num;
      }
      case CKind::kWorld: {
        Val s = get(a[0]);
        return s.kind == Val::kNum && s.num < worlds;
      }
      case CKind::kAcc: {
        Val w = get(a[0]);
        Val s = get(a[1]);
        return w.kind == Val::kNum && s.kind == Val::kNum && w.num < worlds && s.num < worlds && acc[w.num][s.num];
      }
      case CKind::kDom: {
        Val w = get(a[0]);
        auto s = as_set(get(a[1]));
        return w.kind == Val::kNum && w.num < worlds && s && *s == dom[w.num];
      }
      case CKind::kSeq:
        return as_set(get(a[0])).has_value();
      case CKind::kNSeq: {
        Val p = get_raw(a[0]);
        return p.kind == Val::kRel && p.arity == f.arity;
      }
      case CKind::kSub: {
        auto y = as_set(get(a[0]));
        auto x = as_set(get(a[1]));
        return y && x && (*y & ~*x) == 0;
      }
      case CKind::kTupleIn: {
        Val p = get_raw(a[0]);
        std::vector<Val> t;
        for (std::size_t i = 1; i < a.size(); ++i) t.push_back(get(a[i]));
        if (p.kind != Val::kRel || p.arity != static_cast<int>(t.size())) return false;
        std::size_t bit = rel_bit(t);
        if (p.partial) return read_bit(bit);
        return bit < 64 && (p.bits >> bit & 1);
      }
      case CKind::kWithin: {
        Val p = get_raw(a[0]);
        auto x = as_set(get(a[1]));
        if (p.kind != Val::kRel || !x) return false;
        if (p.partial) return read_mask(br.full & ~rel_space(*x, p.arity)) == 0;
        return (p.bits & ~rel_space(*x, p.arity)) == 0;
      }
      default:
        break;
    }
    throw Error("not an atom");
  }

  // ---- quantifiers ----

  const std::set<std::string>& free_of(const CFormula* f) {
    auto it = free_cache.find(f);
    if (it != free_cache.end()) return it->second;
    std::set<std::string> bound;
    std::set<std::string> out;
    std::shared_ptr<const CFormula> alias(std::shared_ptr<const CFormula>{}, f);
    collect_free(alias, bound, out);
    return free_cache.emplace(f, std::move(out)).first->second;
  }

  bool mentions(const CPtr& f, const std::string& v) { return free_of(f.get()).count(v) > 0; }

  template <typename Fn>
  bool for_each(const Cands& c, Fn&& fn) {
    if (!c.lazy) {
      for (const Val& v : c.list) {
        if (!fn(v)) return false;
      }
      return true;
    }
    std::uint64_t full = c.arity == 0 ? c.base : rel_space(c.base, c.arity);
    std::uint64_t sub = 0;
    for (;;) {
      Val v = c.arity == 0 ? set_val(sub) : rel_val(sub, c.arity);
      if (!fn(v)) return false;
      if (sub == full) break;
      sub = (sub - full) & full;
    }
    return true;
  }

  std::optional<Cands> merge(std::vector<Cands> parts) {
    if (parts.size() == 1) return parts.front();
    Cands out;
    for (const auto& p : parts) {
      if (p.lazy && std::popcount(p.arity == 0 ? p.base : rel_space(p.base, p.arity)) > 16) {
        throw Error("coded evaluation: candidate union too large");
      }
      for_each(p, [&](const Val& v) {
        bool seen = false;
        for (const Val& o : out.list) seen = seen || (o.kind == v.kind && o.num == v.num && o.bits == v.bits);
        if (!seen) out.list.push_back(v);
        return true;
      });
    }
    return out;
  }

  static Cands one(Val v) {
    Cands c;
    c.list.push_back(v);
    return c;
  }

  bool is(const CArg& a, const std::string& v) const { return !a.literal && a.name == v; }

  // Values of v that can make g true, given the current environment.
  std::optional<Cands> candidates(const std::string& v, const CPtr& g) {
    const auto& a = g->args;
    switch (g->kind) {
      case CKind::kEq:
        for (int i = 0; i < 2; ++i) {
          if (is(a[i], v) && !is(a[1 - i], v)) {
            if (auto x = maybe(a[1 - i])) return one(*x);
          }
        }
        return std::nullopt;
      case CKind::kCard:
        if (is(a[1], v)) {
          auto y = maybe(a[0]);
          if (!y) return std::nullopt;
          auto s = as_set(*y);
          if (!s) return Cands{};
          auto c = card_value(*s);
          return c ? one(num(*c)) : Cands{};
        }
        return std::nullopt;
      case CKind::kElemAt: {
        auto y = maybe(a[1]);
        if (!y || is(a[1], v)) return std::nullopt;
        auto s = as_set(*y);
        if (!s) return Cands{};
        auto m = members(*s);
        Cands c;
        if (is(a[0], v)) {
          auto u = maybe(a[2]);
          if (u && !is(a[2], v)) {
            if (u->kind == Val::kNum && u->num < m.size()) c.list.push_back(num(m[u->num]));
            return c;
          }
          for (Element e : m) c.list.push_back(num(e));
          return c;
        }
        if (is(a[2], v)) {
          for (std::size_t i = 0; i < m.size(); ++i) c.list.push_back(num(i));
          return c;
        }
        return std::nullopt;
      }
      case CKind::kWorld:
        if (is(a[0], v)) {
          Cands c;
          for (std::size_t i = 0; i < worlds; ++i) c.list.push_back(num(i));
          return c;
        }
        return std::nullopt;
      case CKind::kAcc:
        if (is(a[1], v) && !is(a[0], v)) {
          auto w = maybe(a[0]);
          if (!w) return std::nullopt;
          Cands c;
          if (w->kind == Val::kNum && w->num < worlds) {
            for (std::size_t s = 0; s < worlds; ++s) {
              if (acc[w->num][s]) c.list.push_back(num(s));
            }
          }
          return c;
        }
        return std::nullopt;
      case CKind::kDom:
        if (is(a[1], v)) {
          auto w = maybe(a[0]);
          if (!w) return std::nullopt;
          if (w->kind != Val::kNum || w->num >= worlds) return Cands{};
          return one(set_val(dom[w->num]));
        }
        return std::nullopt;
      case CKind::kSub:
      case CKind::kWithin:
        if (is(a[0], v) && !is(a[1], v)) {
          auto x = maybe(a[1]);
          if (!x) return std::nullopt;
          auto s = as_set(*x);
          if (!s) return Cands{};
          Cands c;
          c.lazy = true;
          c.base = *s;
          c.arity = g->kind == CKind::kSub ? 0 : g->arity;
          return c;
        }
        return std::nullopt;
      case CKind::kAnd: {
        // Prefer the conjunct with the fewest candidates among the cheap ones.
        auto l = candidates(v, g->lhs);
        if (l) return l;
        return candidates(v, g->rhs);
      }
      case CKind::kOr: {
        auto l = candidates(v, g->lhs);
        auto r = candidates(v, g->rhs);
        if (!l || !r) return std::nullopt;
        return merge({*l, *r});
      }
      case CKind::kEx: {
        if (g->var == v) return std::nullopt;
        auto inner = candidates(g->var, g->lhs);
        if (!inner) return std::nullopt;
        std::vector<Cands> parts;
        bool ok = true;
        for_each(*inner, [&](const Val& x) {
          env.emplace_back(g->var, x);
          auto c = candidates(v, g->lhs);
          env.pop_back();
          if (!c) {
            ok = false;
            return false;
          }
          parts.push_back(std::move(*c));
          return true;
        });
        if (!ok) return std::nullopt;
        if (parts.empty()) return Cands{};
        return merge(std::move(parts));
      }
      default:
        return std::nullopt;
    }
  }

  std::optional<std::vector<std::uint64_t>> memo_key(const CFormula& f) {
    if (f.lhs->kind != CKind::kImplies && f.lhs->kind != CKind::kAnd) return std::nullopt;
    CPtr g = f.lhs->lhs;
    if (g->kind == CKind::kAnd) g = g->lhs;
    if (g->kind != CKind::kWorld && g->kind != CKind::kSeq && g->kind != CKind::kNSeq) return std::nullopt;
    std::vector<std::uint64_t> key{reinterpret_cast<std::uintptr_t>(&f)};
    for (const auto& n : free_of(&f)) {
      const Val* v = lookup(n);
      if (!v || v->partial) return std::nullopt;
      key.insert(key.end(), {v->kind, v->num, v->bits, static_cast<std::uint64_t>(v->arity)});
    }
    return key;
  }

  static void conjuncts(const CPtr& f, std::vector<CPtr>& out) {
    if (f->kind == CKind::kAnd) {
      conjuncts(f->lhs, out);
      conjuncts(f->rhs, out);
    } else {
      out.push_back(f);
    }
  }

  bool quantifier(const CFormula& f) {
    bool all = f.kind == CKind::kAll;
    auto key = memo_key(f);
    if (key) {
      auto it = memo.find(*key);
      if (it != memo.end()) return it->second;
    }
    bool result = all ? forall(f) : exists(f);
    if (key) memo.emplace(std::move(*key), result);
    return result;
  }

  // Calls fn on candidates until it returns false; false if stopped early.
  // Relations of arity two or more are decided bit by bit as they are read.
  template <typename Fn>
  bool search(const Cands& c, Fn&& fn) {
    if (!c.lazy || c.arity < 2 || br.active) return for_each(c, fn);
    br = Branch{true, rel_space(c.base, c.arity), 0, 0, {}};
    bool completed = true;
    for (;;) {
      Val v = rel_val(0, c.arity);
      v.partial = true;
      if (!fn(v)) {
        completed = false;
        break;
      }
      bool more = false;
      while (!br.decisions.empty()) {
        int b = br.decisions.back();
        if (!(br.values >> b & 1)) {
          br.values |= 1ULL << b;
          more = true;
          break;
        }
        br.values &= ~(1ULL << b);
        br.assigned &= ~(1ULL << b);
        br.decisions.pop_back();
      }
      if (!more) break;
    }
    br.active = false;
    return completed;
  }

  bool forall(const CFormula& f) {
    const CPtr& body = f.lhs;
    if (body->kind != CKind::kImplies) throw Error("universal over " + f.var + " has no guard");
    auto c = candidates(f.var, body->lhs);
    if (!c) throw Error("universal over " + f.var + " has no recognizable range");
    return search(*c, [&](const Val& x) {
      env.emplace_back(f.var, x);
      bool v = eval(body);
      env.pop_back();
      return v;
    });
  }

  bool exists(const CFormula& f) {
    std::vector<CPtr> parts;
    conjuncts(f.lhs, parts);
    std::vector<CPtr> dependent;
    for (const auto& p : parts) {
      if (mentions(p, f.var)) {
        dependent.push_back(p);
      } else if (!eval(p)) {
        return false;
      }
    }
    std::optional<Cands> c;
    if (f.defined) {
      auto zs = candidates(f.def_var, f.def_guard);
      if (!zs) throw Error("definition of " + f.var + " has no recognizable range");
      std::uint64_t bits = 0;
      bool inside = true;
      for_each(*zs, [&](const Val& z) {
        env.emplace_back(f.def_var, z);
        if (eval(f.def_body)) {
          std::size_t i = z.kind == Val::kNum ? index_of(z.num) : elems.size();
          if (i == elems.size()) {
            inside = false;
          } else {
            bits |= 1ULL << i;
          }
        }
        env.pop_back();
        return true;
      });
      c = inside ? one(set_val(bits)) : Cands{};
    } else {
      for (const auto& p : dependent) {
        c = candidates(f.var, p);
        if (c) break;
      }
    }
    if (!c) throw Error("existential over " + f.var + " has no recognizable range");
    bool found = false;
    search(*c, [&](const Val& x) {
      env.emplace_back(f.var, x);
      bool ok = true;
      for (const auto& p : dependent) {
        if (!eval(p)) {
          ok = false;
          break;
        }
      }
      env.pop_back();
      found = ok;
      return !ok;
    });
    return found;
  }

  bool eval(const CPtr& f) {
    switch (f->kind) {
      case CKind::kNot:
        return !eval(f->lhs);
      case CKind::kAnd:
        return eval(f->lhs) && eval(f->rhs);
      case CKind::kOr:
        return eval(f->lhs) || eval(f->rhs);
      case CKind::kImplies:
        return !eval(f->lhs) || eval(f->rhs);
      case CKind::kIff:
        return eval(f->lhs) == eval(f->rhs);
      case CKind::kAll:
      case CKind::kEx:
        return quantifier(*f);
      default:
        return atom(*f);
    }
  }
};

CodedEvaluator::CodedEvaluator(const CodedModel& c) : impl_(std::make_unique<Impl>(c)) {}

CodedEvaluator::~CodedEvaluator() = default;

bool CodedEvaluator::holds(const CPtr& f, std::size_t world, const std::map<std::string, Element>& env) {
  if (world >= impl_->worlds) throw Error("world index out of range");
  impl_->keep.push_back(f);
  impl_->env.clear();
  impl_->env_names.clear();
  impl_->env.emplace_back("w", num(world));
  for (const auto& [n, v] : env) impl_->env.emplace_back(impl_->env_names.emplace_back(n), num(v));
  return impl_->eval(f);
}

}  // namespace pimodel
