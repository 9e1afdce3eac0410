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

#include "pimodel/classify.hpp"

#include <algorithm>

#include "pimodel/shapes.hpp"

namespace pimodel {

bool is_inductive_term(const TermPtr& t) { return t->kind != TermKind::kCard; }

bool is_inductive(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::kEq:
      return is_inductive_term(f->lhs_term) && is_inductive_term(f->rhs_term);
    case FormulaKind::kNot:
      return is_inductive(f->lhs);
    case FormulaKind::kAnd:
    case FormulaKind::kOr:
    case FormulaKind::kImplies:
    case FormulaKind::kIff:
      return is_inductive(f->lhs) && is_inductive(f->rhs);
    case FormulaKind::kBox:
      if (auto g = match_all_n(f)) return is_inductive(g->body);
      return false;
    case FormulaKind::kDia:
      if (auto g = match_ex_n(f)) return is_inductive(g->body);
      if (auto m = match_successor(f)) return is_inductive_term(m->first) && is_inductive_term(m->second);
      if (auto m = match_plus(f)) {
        return is_inductive_term(m->a) && is_inductive_term(m->b) && is_inductive_term(m->c);
      }
      if (auto m = match_times(f)) {
        return is_inductive_term(m->a) && is_inductive_term(m->b) && is_inductive_term(m->c);
      }
      return false;
    default:
      return false;
  }
}

namespace {

bool is_definition(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::kDia:
      return match_successor(f) || match_successor_alt(f) || match_plus(f) || match_times(f);
    case FormulaKind::kAnd:
      return match_natural(f).has_value();
    default:
      return false;
  }
}

int count_functions(const TermPtr& t);

int count_functions(const SetPtr& s) {
  int n = 0;
  if (s->lhs) n += count_functions(s->lhs);
  if (s->rhs) n += count_functions(s->rhs);
  if (s->term) n += count_functions(s->term);
  return n;
}

int count_functions(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::kVar:
      return 0;
    case TermKind::kZero:
      return 1;
    case TermKind::kCard:
      return 1 + count_functions(t->set);
  }
  return 0;
}

bool unnested(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::kEq:
      return count_functions(f->lhs_term) + count_functions(f->rhs_term) <= 1;
    case FormulaKind::kApp: {
      int n = count_functions(f->set);
      for (const auto& a : f->args) n += count_functions(a);
      return n <= 1;
    }
    default:
      return unnested(f->lhs) && (!f->rhs || unnested(f->rhs));
  }
}

}  // namespace

int demand(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::kEq:
    case FormulaKind::kApp:
      return 0;
    case FormulaKind::kAllSecond:
      if (auto c = match_closure(f)) return std::max(demand(c->step), demand(c->start));
      return demand(f->lhs);
    default:
      break;
  }
  if (is_definition(f)) return 0;
  int d = demand(f->lhs);
  if (f->rhs) d = std::max(d, demand(f->rhs));
  return f->kind == FormulaKind::kBox ? d + 1 : d;
}

int modal_depth(const FormulaPtr& f) {
  if (f->kind == FormulaKind::kEq || f->kind == FormulaKind::kApp) return 0;
  int d = modal_depth(f->lhs);
  if (f->rhs) d = std::max(d, modal_depth(f->rhs));
  return (f->kind == FormulaKind::kBox || f->kind == FormulaKind::kDia) ? d + 1 : d;
}

FormulaMeta classify(const FormulaPtr& f) {
  FormulaMeta m;
  m.is_inductive = is_inductive(f);
  m.is_unnested = unnested(f);
  m.demand = demand(f);
  m.modal_depth = modal_depth(f);
  return m;
}

namespace {

bool composite(const SetPtr& s) { return s->kind != SetKind::kVar; }

SetPtr find_composite(const TermPtr& t);

SetPtr find_composite(const SetPtr& s) {
  if (composite(s)) return s;
  return nullptr;
}

SetPtr find_composite(const TermPtr& t) {
  return t->kind == TermKind::kCard ? find_composite(t->set) : nullptr;
}

SetPtr find_composite_in_atom(const FormulaPtr& f) {
  if (f->kind == FormulaKind::kEq) {
    if (auto s = find_composite(f->lhs_term)) return s;
    return find_composite(f->rhs_term);
  }
  if (composite(f->set)) return f->set;
  for (const auto& a : f->args) {
    if (auto s = find_composite(a)) return s;
  }
  return nullptr;
}

TermPtr replace(const TermPtr& t, const SetPtr& target, const SetPtr& with) {
  if (t->kind == TermKind::kCard && t->set == target) return Card(with);
  return t;
}

FormulaPtr replace_in_atom(const FormulaPtr& f, const SetPtr& target, const SetPtr& with) {
  if (f->kind == FormulaKind::kEq) {
    return Eq(replace(f->lhs_term, target, with), replace(f->rhs_term, target, with));
  }
  std::vector<TermPtr> args;
  for (const auto& a : f->args) args.push_back(replace(a, target, with));
  return App(f->set == target ? with : f->set, std::move(args));
}

class Expander {
 public:
  explicit Expander(const FormulaPtr& root) : names_(all_names(root)) {}

  FormulaPtr formula(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::kEq:
      case FormulaKind::kApp:
        return atom(f);
      case FormulaKind::kNot:
        return Not(formula(f->lhs));
      case FormulaKind::kBox:
        return Box(formula(f->lhs));
      case FormulaKind::kDia:
        return Dia(formula(f->lhs));
      case FormulaKind::kAnd:
        return And(formula(f->lhs), formula(f->rhs));
      case FormulaKind::kOr:
        return Or(formula(f->lhs), formula(f->rhs));
      case FormulaKind::kImplies:
        return Implies(formula(f->lhs), formula(f->rhs));
      case FormulaKind::kIff:
        return Iff(formula(f->lhs), formula(f->rhs));
      case FormulaKind::kAllFirst:
        return ForallFirst(f->var, formula(f->lhs));
      case FormulaKind::kExFirst:
        return ExistsFirst(f->var, formula(f->lhs));
      case FormulaKind::kAllSecond:
        return ForallSecond(f->var, f->arity, formula(f->lhs));
      case FormulaKind::kExSecond:
        return ExistsSecond(f->var, f->arity, formula(f->lhs));
    }
    return f;
  }

 private:
  FormulaPtr atom(const FormulaPtr& f) {
    SetPtr target = find_composite_in_atom(f);
    if (!target) return f;
    FreeVars fv = free_vars(f);
    std::set<std::string> avoid = fv.first;
    for (const auto& [n, a] : fv.second) avoid.insert(n);
    std::string h = names_.fresh("H", avoid);
    std::string z = names_.fresh("z", avoid);
    FormulaPtr def = definition(target, Var(z));
    FormulaPtr body = replace_in_atom(f, target, SetVar(h));
    FormulaPtr defn = ForallFirst(z, Iff(App(SetVar(h), {Var(z)}), formula(def)));
    return ExistsSecond(h, 1, And(defn, atom(body)));
  }

  FormulaPtr definition(const SetPtr& s, const TermPtr& z) {
    switch (s->kind) {
      case SetKind::kEmpty:
        return Not(Eq(z, z));
      case SetKind::kUnion:
        return Or(App(s->lhs, {z}), App(s->rhs, {z}));
      case SetKind::kMinus:
        return And(App(s->lhs, {z}), Not(Eq(z, s->term)));
      case SetKind::kPlus1:
        return Or(App(s->lhs, {z}), Eq(z, s->term));
      case SetKind::kSect:
        return App(s->lhs, {s->term, z});
      case SetKind::kBigUSect: {
        FreeVars fv = free_vars(s);
        std::set<std::string> avoid = fv.first;
        for (const auto& [n, a] : fv.second) avoid.insert(n);
        avoid.insert(z->name);
        std::string x = names_.fresh("x", avoid);
        return ExistsFirst(x, And(App(s->rhs, {Var(x)}), App(s->lhs, {Var(x), z})));
      }
      case SetKind::kVar:
        break;
    }
    return App(s, {z});
  }

  NameSupply names_;
};

}  // namespace

FormulaPtr expand_set_shorthand(const FormulaPtr& f) {
  Expander e(f);
  return e.formula(f);
}

}  // namespace pimodel
