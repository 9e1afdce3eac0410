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

#include "pimodel/formula.hpp"

#include <sstream>
#include <utility>

#include "pimodel/shapes.hpp"

namespace pimodel {

TermPtr Var(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::kVar;
  t->name = std::move(name);
  return t;
}

TermPtr Zero() {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::kZero;
  return t;
}

TermPtr Card(SetPtr set) {
  if (set->result_arity() != 1) throw Error("card applied to a relation of arity " + std::to_string(set->result_arity()));
  if (set->kind == SetKind::kEmpty) return Zero();
  auto t = std::make_shared<Term>();
  t->kind = TermKind::kCard;
  t->set = std::move(set);
  return t;
}

namespace {

void require_arity(const SetPtr& s, int arity, const char* op) {
  if (s->result_arity() != arity) {
    throw Error(std::string(op) + ": operand " + render(s) + " has arity " +
                std::to_string(s->result_arity()) + ", expected " + std::to_string(arity));
  }
}

std::shared_ptr<SetExpr> make_set(SetKind kind) {
  auto s = std::make_shared<SetExpr>();
  s->kind = kind;
  return s;
}

std::shared_ptr<Formula> make(FormulaKind kind) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  return f;
}

FormulaPtr binary(FormulaKind kind, FormulaPtr l, FormulaPtr r) {
  auto f = make(kind);
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

FormulaPtr quant(FormulaKind kind, std::string v, int arity, FormulaPtr body) {
  auto f = make(kind);
  f->var = std::move(v);
  f->arity = arity;
  f->lhs = std::move(body);
  return f;
}

}  // namespace

SetPtr SetVar(std::string name, int arity) {
  if (arity < 1) throw Error("second-order variable " + name + " needs positive arity");
  auto s = make_set(SetKind::kVar);
  s->name = std::move(name);
  s->arity = arity;
  return s;
}

SetPtr EmptySet() { return make_set(SetKind::kEmpty); }

SetPtr UnionOf(SetPtr l, SetPtr r) {
  require_arity(l, 1, "union");
  require_arity(r, 1, "union");
  auto s = make_set(SetKind::kUnion);
  s->lhs = std::move(l);
  s->rhs = std::move(r);
  return s;
}

SetPtr MinusOne(SetPtr s, TermPtr u) {
  require_arity(s, 1, "minus");
  auto e = make_set(SetKind::kMinus);
  e->lhs = std::move(s);
  e->term = std::move(u);
  return e;
}

SetPtr PlusOne(SetPtr s, TermPtr u) {
  require_arity(s, 1, "plus1");
  auto e = make_set(SetKind::kPlus1);
  e->lhs = std::move(s);
  e->term = std::move(u);
  return e;
}

SetPtr Section(SetPtr p, TermPtr x) {
  require_arity(p, 2, "sect");
  auto e = make_set(SetKind::kSect);
  e->lhs = std::move(p);
  e->term = std::move(x);
  return e;
}

SetPtr BigUnionSection(SetPtr p, SetPtr over) {
  require_arity(p, 2, "bigusect");
  require_arity(over, 1, "bigusect");
  auto e = make_set(SetKind::kBigUSect);
  e->lhs = std::move(p);
  e->rhs = std::move(over);
  return e;
}

FormulaPtr Eq(TermPtr l, TermPtr r) {
  auto f = make(FormulaKind::kEq);
  f->lhs_term = std::move(l);
  f->rhs_term = std::move(r);
  return f;
}

FormulaPtr App(SetPtr s, std::vector<TermPtr> args) {
  if (static_cast<int>(args.size()) != s->result_arity()) {
    throw Error("arity mismatch: " + render(s) + " has arity " + std::to_string(s->result_arity()) +
                " but is applied to " + std::to_string(args.size()) + " argument(s)");
  }
  auto f = make(FormulaKind::kApp);
  f->set = std::move(s);
  f->args = std::move(args);
  return f;
}

FormulaPtr Not(FormulaPtr g) {
  auto f = make(FormulaKind::kNot);
  f->lhs = std::move(g);
  return f;
}

FormulaPtr And(FormulaPtr l, FormulaPtr r) { return binary(FormulaKind::kAnd, std::move(l), std::move(r)); }
FormulaPtr Or(FormulaPtr l, FormulaPtr r) { return binary(FormulaKind::kOr, std::move(l), std::move(r)); }
FormulaPtr Implies(FormulaPtr l, FormulaPtr r) { return binary(FormulaKind::kImplies, std::move(l), std::move(r)); }
FormulaPtr Iff(FormulaPtr l, FormulaPtr r) { return binary(FormulaKind::kIff, std::move(l), std::move(r)); }

FormulaPtr Box(FormulaPtr g) {
  auto f = make(FormulaKind::kBox);
  f->lhs = std::move(g);
  return f;
}

FormulaPtr Dia(FormulaPtr g) {
  auto f = make(FormulaKind::kDia);
  f->lhs = std::move(g);
  return f;
}

FormulaPtr ForallFirst(std::string v, FormulaPtr f) { return quant(FormulaKind::kAllFirst, std::move(v), 0, std::move(f)); }
FormulaPtr ExistsFirst(std::string v, FormulaPtr f) { return quant(FormulaKind::kExFirst, std::move(v), 0, std::move(f)); }

FormulaPtr ForallSecond(std::string v, int arity, FormulaPtr f) {
  if (arity < 1) throw Error("second-order quantifier needs positive arity");
  return quant(FormulaKind::kAllSecond, std::move(v), arity, std::move(f));
}

FormulaPtr ExistsSecond(std::string v, int arity, FormulaPtr f) {
  if (arity < 1) throw Error("second-order quantifier needs positive arity");
  return quant(FormulaKind::kExSecond, std::move(v), arity, std::move(f));
}

FormulaPtr AndAll(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw Error("AndAll of an empty list");
  FormulaPtr acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = And(*it, acc);
  return acc;
}

namespace {

class FreeCollector {
 public:
  FreeVars out;

  void term(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::kVar:
        if (!bound_first_.count(t->name)) out.first.insert(t->name);
        break;
      case TermKind::kZero:
        break;
      case TermKind::kCard:
        set(t->set);
        break;
    }
  }

  void set(const SetPtr& s) {
    switch (s->kind) {
      case SetKind::kVar:
        if (!bound_second_.count(s->name)) {
          auto [it, inserted] = out.second.emplace(s->name, s->arity);
          if (!inserted && it->second != s->arity) {
            throw Error("variable " + s->name + " used with arities " + std::to_string(it->second) +
                        " and " + std::to_string(s->arity));
          }
        }
        break;
      case SetKind::kEmpty:
        break;
      case SetKind::kUnion:
      case SetKind::kBigUSect:
        set(s->lhs);
        set(s->rhs);
        break;
      case SetKind::kMinus:
      case SetKind::kPlus1:
      case SetKind::kSect:
        set(s->lhs);
        term(s->term);
        break;
    }
  }

  void formula(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::kEq:
        term(f->lhs_term);
        term(f->rhs_term);
        break;
      case FormulaKind::kApp:
        set(f->set);
        for (const auto& a : f->args) term(a);
        break;
      case FormulaKind::kAllFirst:
      case FormulaKind::kExFirst:
        ++bound_first_[f->var];
        formula(f->lhs);
        if (--bound_first_[f->var] == 0) bound_first_.erase(f->var);
        break;
      case FormulaKind::kAllSecond:
      case FormulaKind::kExSecond:
        ++bound_second_[f->var];
        formula(f->lhs);
        if (--bound_second_[f->var] == 0) bound_second_.erase(f->var);
        break;
      default:
        formula(f->lhs);
        if (f->rhs) formula(f->rhs);
        break;
    }
  }

 private:
  std::map<std::string, int> bound_first_;
  std::map<std::string, int> bound_second_;
};

void names_in(const TermPtr& t, std::set<std::string>& out);

void names_in(const SetPtr& s, std::set<std::string>& out) {
  if (s->kind == SetKind::kVar) out.insert(s->name);
  if (s->lhs) names_in(s->lhs, out);
  if (s->rhs) names_in(s->rhs, out);
  if (s->term) names_in(s->term, out);
}

void names_in(const TermPtr& t, std::set<std::string>& out) {
  if (t->kind == TermKind::kVar) out.insert(t->name);
  if (t->set) names_in(t->set, out);
}

void names_in(const FormulaPtr& f, std::set<std::string>& out) {
  if (f->lhs_term) names_in(f->lhs_term, out);
  if (f->rhs_term) names_in(f->rhs_term, out);
  if (f->set) names_in(f->set, out);
  for (const auto& a : f->args) names_in(a, out);
  if (f->is_quantifier()) out.insert(f->var);
  if (f->lhs) names_in(f->lhs, out);
  if (f->rhs) names_in(f->rhs, out);
}

}  // namespace

FreeVars free_vars(const FormulaPtr& f) {
  FreeCollector c;
  c.formula(f);
  return c.out;
}

FreeVars free_vars(const TermPtr& t) {
  FreeCollector c;
  c.term(t);
  return c.out;
}

FreeVars free_vars(const SetPtr& s) {
  FreeCollector c;
  c.set(s);
  return c.out;
}

std::set<std::string> all_names(const FormulaPtr& f) {
  std::set<std::string> out;
  names_in(f, out);
  return out;
}

std::string NameSupply::fresh(std::string_view base, const std::set<std::string>& avoid) {
  std::string stem(base);
  if (auto dot = stem.find('.'); dot != std::string::npos) stem.resize(dot);
  for (;;) {
    std::string name = stem + "." + std::to_string(next_++);
    if (!avoid.count(name) && !reserved_.count(name)) return name;
  }
}

namespace {

class AlphaComparer {
 public:
  bool term(const TermPtr& a, const TermPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case TermKind::kVar:
        return same_name(first_l_, a->name, first_r_, b->name);
      case TermKind::kZero:
        return true;
      case TermKind::kCard:
        return set(a->set, b->set);
    }
    return false;
  }

  bool set(const SetPtr& a, const SetPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case SetKind::kVar:
        return a->arity == b->arity && same_name(second_l_, a->name, second_r_, b->name);
      case SetKind::kEmpty:
        return true;
      case SetKind::kUnion:
      case SetKind::kBigUSect:
        return set(a->lhs, b->lhs) && set(a->rhs, b->rhs);
      case SetKind::kMinus:
      case SetKind::kPlus1:
      case SetKind::kSect:
        return set(a->lhs, b->lhs) && term(a->term, b->term);
    }
    return false;
  }

  bool formula(const FormulaPtr& f, const FormulaPtr& g) {
    if (f->kind != g->kind) return false;
    switch (f->kind) {
      case FormulaKind::kEq:
        return term(f->lhs_term, g->lhs_term) && term(f->rhs_term, g->rhs_term);
      case FormulaKind::kApp:
        if (!set(f->set, g->set) || f->args.size() != g->args.size()) return false;
        for (std::size_t i = 0; i < f->args.size(); ++i) {
          if (!term(f->args[i], g->args[i])) return false;
        }
        return true;
      case FormulaKind::kAllFirst:
      case FormulaKind::kExFirst:
        return bound(first_l_, first_r_, f, g);
      case FormulaKind::kAllSecond:
      case FormulaKind::kExSecond:
        return f->arity == g->arity && bound(second_l_, second_r_, f, g);
      default:
        if (!formula(f->lhs, g->lhs)) return false;
        return !f->rhs || formula(f->rhs, g->rhs);
    }
  }

 private:
  using Scope = std::map<std::string, std::vector<int>>;

  static bool same_name(const Scope& l, const std::string& a, const Scope& r, const std::string& b) {
    auto il = l.find(a);
    auto ir = r.find(b);
    bool bl = il != l.end() && !il->second.empty();
    bool br = ir != r.end() && !ir->second.empty();
    if (bl != br) return false;
    if (!bl) return a == b;
    return il->second.back() == ir->second.back();
  }

  bool bound(Scope& l, Scope& r, const FormulaPtr& f, const FormulaPtr& g) {
    int id = next_id_++;
    l[f->var].push_back(id);
    r[g->var].push_back(id);
    bool ok = formula(f->lhs, g->lhs);
    l[f->var].pop_back();
    r[g->var].pop_back();
    return ok;
  }

  Scope first_l_, first_r_, second_l_, second_r_;
  int next_id_ = 0;
};

struct Subst {
  std::map<std::string, TermPtr> first;
  std::map<std::string, std::string> second;
  std::set<std::string> range_names;  // names free in the substituted values
  std::set<std::string> avoid;
  NameSupply* names;
};

TermPtr subst_apply(const TermPtr& t, const Subst& s);

SetPtr subst_apply(const SetPtr& e, const Subst& s) {
  switch (e->kind) {
    case SetKind::kVar: {
      auto it = s.second.find(e->name);
      return it == s.second.end() ? e : SetVar(it->second, e->arity);
    }
    case SetKind::kEmpty:
      return e;
    case SetKind::kUnion:
      return UnionOf(subst_apply(e->lhs, s), subst_apply(e->rhs, s));
    case SetKind::kBigUSect:
      return BigUnionSection(subst_apply(e->lhs, s), subst_apply(e->rhs, s));
    case SetKind::kMinus:
      return MinusOne(subst_apply(e->lhs, s), subst_apply(e->term, s));
    case SetKind::kPlus1:
      return PlusOne(subst_apply(e->lhs, s), subst_apply(e->term, s));
    case SetKind::kSect:
      return Section(subst_apply(e->lhs, s), subst_apply(e->term, s));
  }
  return e;
}

TermPtr subst_apply(const TermPtr& t, const Subst& s) {
  switch (t->kind) {
    case TermKind::kVar: {
      auto it = s.first.find(t->name);
      return it == s.first.end() ? t : it->second;
    }
    case TermKind::kZero:
      return t;
    case TermKind::kCard:
      return Card(subst_apply(t->set, s));
  }
  return t;
}

FormulaPtr subst_apply(const FormulaPtr& f, const Subst& s) {
  if (s.first.empty() && s.second.empty()) return f;
  switch (f->kind) {
    case FormulaKind::kEq:
      return Eq(subst_apply(f->lhs_term, s), subst_apply(f->rhs_term, s));
    case FormulaKind::kApp: {
      std::vector<TermPtr> args;
      for (const auto& a : f->args) args.push_back(subst_apply(a, s));
      return App(subst_apply(f->set, s), std::move(args));
    }
    case FormulaKind::kNot:
      return Not(subst_apply(f->lhs, s));
    case FormulaKind::kBox:
      return Box(subst_apply(f->lhs, s));
    case FormulaKind::kDia:
      return Dia(subst_apply(f->lhs, s));
    case FormulaKind::kAnd:
      return And(subst_apply(f->lhs, s), subst_apply(f->rhs, s));
    case FormulaKind::kOr:
      return Or(subst_apply(f->lhs, s), subst_apply(f->rhs, s));
    case FormulaKind::kImplies:
      return Implies(subst_apply(f->lhs, s), subst_apply(f->rhs, s));
    case FormulaKind::kIff:
      return Iff(subst_apply(f->lhs, s), subst_apply(f->rhs, s));
    default:
      break;
  }
  // Quantifiers.
  Subst inner = s;
  bool second = f->is_second_order_quantifier();
  if (second) {
    inner.second.erase(f->var);
  } else {
    inner.first.erase(f->var);
  }
  std::string var = f->var;
  if (inner.range_names.count(var)) {
    std::string fresh = s.names->fresh(var, s.avoid);
    inner.avoid.insert(fresh);
    if (second) {
      inner.second[var] = fresh;
    } else {
      inner.first[var] = Var(fresh);
    }
    var = fresh;
  }
  FormulaPtr body = subst_apply(f->lhs, inner);
  return quant(f->kind, var, f->arity, body);
}

}  // namespace

bool alpha_equal(const FormulaPtr& f, const FormulaPtr& g) {
  AlphaComparer c;
  return c.formula(f, g);
}

bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  AlphaComparer c;
  return c.term(a, b);
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& t) {
  NameSupply names;
  Subst s;
  s.first[var] = t;
  FreeVars fv = free_vars(t);
  s.range_names = fv.first;
  for (const auto& [n, a] : fv.second) s.range_names.insert(n);
  s.avoid = all_names(f);
  s.avoid.insert(s.range_names.begin(), s.range_names.end());
  s.avoid.insert(var);
  s.names = &names;
  return subst_apply(f, s);
}

std::size_t size(const FormulaPtr& f) {
  std::size_t n = 1;
  if (f->lhs) n += size(f->lhs);
  if (f->rhs) n += size(f->rhs);
  return n;
}

std::string render(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::kVar:
      return t->name;
    case TermKind::kZero:
      return "zero";
    case TermKind::kCard:
      return "(card " + render(t->set) + ")";
  }
  return "?";
}

std::string render(const SetPtr& s) {
  switch (s->kind) {
    case SetKind::kVar:
      return s->name;
    case SetKind::kEmpty:
      return "empty";
    case SetKind::kUnion:
      return "(union " + render(s->lhs) + " " + render(s->rhs) + ")";
    case SetKind::kMinus:
      return "(minus " + render(s->lhs) + " " + render(s->term) + ")";
    case SetKind::kPlus1:
      return "(plus1 " + render(s->lhs) + " " + render(s->term) + ")";
    case SetKind::kSect:
      return "(sect " + render(s->lhs) + " " + render(s->term) + ")";
    case SetKind::kBigUSect:
      return "(bigusect " + render(s->lhs) + " " + render(s->rhs) + ")";
  }
  return "?";
}

namespace {

void render_into(const FormulaPtr& f, std::ostringstream& out) {
  if (f->kind == FormulaKind::kAnd) {
    if (auto t = match_natural(f)) {
      out << "(N " << render(*t) << ")";
      return;
    }
  } else if (f->kind == FormulaKind::kBox) {
    if (auto g = match_all_n(f)) {
      out << "(allN " << g->var << " ";
      render_into(g->body, out);
      out << ")";
      return;
    }
  } else if (f->kind == FormulaKind::kDia) {
    if (auto g = match_ex_n(f)) {
      out << "(exN " << g->var << " ";
      render_into(g->body, out);
      out << ")";
      return;
    }
  }
  switch (f->kind) {
    case FormulaKind::kEq:
      out << "(= " << render(f->lhs_term) << " " << render(f->rhs_term) << ")";
      return;
    case FormulaKind::kApp:
      out << "(app " << render(f->set);
      for (const auto& a : f->args) out << " " << render(a);
      out << ")";
      return;
    case FormulaKind::kNot:
      out << "(not ";
      break;
    case FormulaKind::kAnd:
      out << "(and ";
      break;
    case FormulaKind::kOr:
      out << "(or ";
      break;
    case FormulaKind::kImplies:
      out << "(-> ";
      break;
    case FormulaKind::kIff:
      out << "(<-> ";
      break;
    case FormulaKind::kBox:
      out << "(box ";
      break;
    case FormulaKind::kDia:
      out << "(dia ";
      break;
    case FormulaKind::kAllFirst:
      out << "(all " << f->var << " ";
      break;
    case FormulaKind::kExFirst:
      out << "(ex " << f->var << " ";
      break;
    case FormulaKind::kAllSecond:
      out << "(All " << f->var << " " << f->arity << " ";
      break;
    case FormulaKind::kExSecond:
      out << "(Ex " << f->var << " " << f->arity << " ";
      break;
  }
  render_into(f->lhs, out);
  if (f->rhs) {
    out << " ";
    render_into(f->rhs, out);
  }
  out << ")";
}

}  // namespace

std::string render(const FormulaPtr& f) {
  std::ostringstream out;
  render_into(f, out);
  return out.str();
}

}  // namespace pimodel
