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

#include "pimodel/shapes.hpp"

#include <utility>

namespace pimodel {

namespace {

std::set<std::string> avoid_of(std::initializer_list<TermPtr> terms) {
  std::set<std::string> out;
  for (const auto& t : terms) {
    FreeVars fv = free_vars(t);
    out.insert(fv.first.begin(), fv.first.end());
    for (const auto& [n, a] : fv.second) out.insert(n);
  }
  return out;
}

TermPtr card_of(const std::string& set_var) { return Card(SetVar(set_var)); }

FormulaPtr in(const std::string& set_var, const TermPtr& t) { return App(SetVar(set_var), {t}); }

}  // namespace

FormulaPtr successor(TermPtr x, TermPtr y, NameSupply& names) {
  auto avoid = avoid_of({x, y});
  std::string g = names.fresh("G", avoid);
  std::string u = names.fresh("u", avoid);
  return Dia(ExistsSecond(g, 1, ExistsFirst(u, AndAll({
      in(g, Var(u)),
      Eq(y, card_of(g)),
      Eq(x, Card(MinusOne(SetVar(g), Var(u)))),
  }))));
}

FormulaPtr successor_alt(TermPtr x, TermPtr y, NameSupply& names) {
  auto avoid = avoid_of({x, y});
  std::string f = names.fresh("F", avoid);
  std::string u = names.fresh("u", avoid);
  return Dia(ExistsSecond(f, 1, ExistsFirst(u, AndAll({
      Not(in(f, Var(u))),
      Eq(x, card_of(f)),
      Eq(y, Card(PlusOne(SetVar(f), Var(u)))),
  }))));
}

FormulaPtr plus(TermPtr a, TermPtr b, TermPtr c, NameSupply& names) {
  auto avoid = avoid_of({a, b, c});
  std::string x = names.fresh("X", avoid);
  std::string y = names.fresh("Y", avoid);
  std::string z = names.fresh("z", avoid);
  return Dia(ExistsSecond(x, 1, ExistsSecond(y, 1, AndAll({
      Eq(a, card_of(x)),
      Eq(b, card_of(y)),
      Eq(c, Card(UnionOf(SetVar(x), SetVar(y)))),
      ForallFirst(z, Not(And(in(x, Var(z)), in(y, Var(z))))),
  }))));
}

FormulaPtr times(TermPtr a, TermPtr b, TermPtr c, NameSupply& names) {
  auto avoid = avoid_of({a, b, c});
  std::string xs = names.fresh("X", avoid);
  std::string p = names.fresh("P", avoid);
  std::string x = names.fresh("x", avoid);
  std::string y = names.fresh("y", avoid);
  std::string z = names.fresh("z", avoid);
  auto rel = SetVar(p, 2);
  auto pair = [&](const std::string& l, const std::string& r) { return App(rel, {Var(l), Var(r)}); };
  return Dia(ExistsSecond(xs, 1, ExistsSecond(p, 2, AndAll({
      Eq(card_of(xs), b),
      ForallFirst(x, Implies(in(xs, Var(x)), Eq(Card(Section(rel, Var(x))), a))),
      ForallFirst(x, ForallFirst(y, Implies(
          AndAll({in(xs, Var(x)), in(xs, Var(y)), Not(Eq(Var(x), Var(y)))}),
          ForallFirst(z, Not(And(pair(x, z), pair(y, z))))))),
      Eq(Card(BigUnionSection(rel, SetVar(xs))), c),
  }))));
}

FormulaPtr strong_ancestral(const RelationBuilder& phi, TermPtr a, TermPtr b, NameSupply& names) {
  auto avoid = avoid_of({a, b});
  std::string xs = names.fresh("X", avoid);
  std::string x = names.fresh("x", avoid);
  std::string y = names.fresh("y", avoid);
  std::string z = names.fresh("z", avoid);
  FormulaPtr closed = ForallFirst(x, ForallFirst(y, Implies(
      And(in(xs, Var(x)), phi(Var(x), Var(y), names)), in(xs, Var(y)))));
  FormulaPtr start = ForallFirst(z, Implies(phi(a, Var(z), names), in(xs, Var(z))));
  return ForallSecond(xs, 1, Implies(And(closed, start), in(xs, b)));
}

FormulaPtr weak_ancestral(const RelationBuilder& phi, TermPtr a, TermPtr b, NameSupply& names) {
  FormulaPtr strong = strong_ancestral(phi, a, b, names);
  return Or(strong, Eq(a, b));
}

FormulaPtr natural(TermPtr t, NameSupply& names) {
  RelationBuilder s = [](TermPtr l, TermPtr r, NameSupply& n) { return successor(l, r, n); };
  FormulaPtr anc = weak_ancestral(s, Zero(), t, names);
  std::string y = names.fresh("y", avoid_of({t}));
  return And(anc, ExistsFirst(y, Eq(Var(y), Zero())));
}

FormulaPtr all_n(const std::string& var, FormulaPtr body, NameSupply& names) {
  return Box(ForallFirst(var, Implies(natural(Var(var), names), std::move(body))));
}

FormulaPtr ex_n(const std::string& var, FormulaPtr body, NameSupply& names) {
  return Dia(ExistsFirst(var, And(natural(Var(var), names), std::move(body))));
}

namespace {

bool is(const FormulaPtr& f, FormulaKind k) { return f && f->kind == k; }

// Splits a right-nested conjunction into exactly n conjuncts.
bool conjuncts(const FormulaPtr& f, std::size_t n, std::vector<FormulaPtr>& out) {
  out.clear();
  FormulaPtr cur = f;
  while (out.size() + 1 < n) {
    if (!is(cur, FormulaKind::kAnd)) return false;
    out.push_back(cur->lhs);
    cur = cur->rhs;
  }
  out.push_back(cur);
  return true;
}

// Peels `<> E.. E..` and returns the matrix.
FormulaPtr dia_two_binders(const FormulaPtr& f, FormulaKind first, FormulaKind second) {
  if (!is(f, FormulaKind::kDia) || !is(f->lhs, first) || !is(f->lhs->lhs, second)) return nullptr;
  return f->lhs->lhs->lhs;
}

bool is_set_var_app(const FormulaPtr& f, const std::string& set, int arity) {
  return is(f, FormulaKind::kApp) && f->set->kind == SetKind::kVar && f->set->name == set &&
         f->set->arity == arity;
}

bool is_var(const TermPtr& t, const std::string& name) {
  return t->kind == TermKind::kVar && t->name == name;
}

bool mentions_second(const FormulaPtr& f, const std::string& name) {
  return free_vars(f).second.count(name) > 0;
}

}  // namespace

std::optional<BinaryMatch> match_successor(const FormulaPtr& f) {
  FormulaPtr m = dia_two_binders(f, FormulaKind::kExSecond, FormulaKind::kExFirst);
  std::vector<FormulaPtr> cs;
  if (!m || !conjuncts(m, 3, cs) || !is(cs[1], FormulaKind::kEq) || !is(cs[2], FormulaKind::kEq)) {
    return std::nullopt;
  }
  BinaryMatch out{cs[2]->lhs_term, cs[1]->lhs_term};
  NameSupply names;
  if (!alpha_equal(successor(out.first, out.second, names), f)) return std::nullopt;
  return out;
}

std::optional<BinaryMatch> match_successor_alt(const FormulaPtr& f) {
  FormulaPtr m = dia_two_binders(f, FormulaKind::kExSecond, FormulaKind::kExFirst);
  std::vector<FormulaPtr> cs;
  if (!m || !conjuncts(m, 3, cs) || !is(cs[1], FormulaKind::kEq) || !is(cs[2], FormulaKind::kEq)) {
    return std::nullopt;
  }
  BinaryMatch out{cs[1]->lhs_term, cs[2]->lhs_term};
  NameSupply names;
  if (!alpha_equal(successor_alt(out.first, out.second, names), f)) return std::nullopt;
  return out;
}

std::optional<TernaryMatch> match_plus(const FormulaPtr& f) {
  FormulaPtr m = dia_two_binders(f, FormulaKind::kExSecond, FormulaKind::kExSecond);
  std::vector<FormulaPtr> cs;
  if (!m || !conjuncts(m, 4, cs)) return std::nullopt;
  for (int i = 0; i < 3; ++i) {
    if (!is(cs[i], FormulaKind::kEq)) return std::nullopt;
  }
  TernaryMatch out{cs[0]->lhs_term, cs[1]->lhs_term, cs[2]->lhs_term};
  NameSupply names;
  if (!alpha_equal(plus(out.a, out.b, out.c, names), f)) return std::nullopt;
  return out;
}

std::optional<TernaryMatch> match_times(const FormulaPtr& f) {
  FormulaPtr m = dia_two_binders(f, FormulaKind::kExSecond, FormulaKind::kExSecond);
  std::vector<FormulaPtr> cs;
  if (!m || !conjuncts(m, 4, cs) || !is(cs[0], FormulaKind::kEq) || !is(cs[3], FormulaKind::kEq)) {
    return std::nullopt;
  }
  const FormulaPtr& sect = cs[1];
  if (!is(sect, FormulaKind::kAllFirst) || !is(sect->lhs, FormulaKind::kImplies) ||
      !is(sect->lhs->rhs, FormulaKind::kEq)) {
    return std::nullopt;
  }
  TernaryMatch out{sect->lhs->rhs->rhs_term, cs[0]->rhs_term, cs[3]->rhs_term};
  NameSupply names;
  if (!alpha_equal(times(out.a, out.b, out.c, names), f)) return std::nullopt;
  return out;
}

std::optional<ClosureMatch> match_closure(const FormulaPtr& f) {
  if (!is(f, FormulaKind::kAllSecond) || f->arity != 1) return std::nullopt;
  const std::string& xs = f->var;
  const FormulaPtr& imp = f->lhs;
  if (!is(imp, FormulaKind::kImplies) || !is(imp->lhs, FormulaKind::kAnd)) return std::nullopt;
  if (!is_set_var_app(imp->rhs, xs, 1)) return std::nullopt;
  const FormulaPtr& closed = imp->lhs->lhs;
  const FormulaPtr& start = imp->lhs->rhs;
  if (!is(closed, FormulaKind::kAllFirst) || !is(closed->lhs, FormulaKind::kAllFirst)) return std::nullopt;
  const std::string& x = closed->var;
  const std::string& y = closed->lhs->var;
  if (x == y) return std::nullopt;
  const FormulaPtr& step_imp = closed->lhs->lhs;
  if (!is(step_imp, FormulaKind::kImplies) || !is(step_imp->lhs, FormulaKind::kAnd)) return std::nullopt;
  if (!is_set_var_app(step_imp->lhs->lhs, xs, 1) || !is_var(step_imp->lhs->lhs->args[0], x)) return std::nullopt;
  if (!is_set_var_app(step_imp->rhs, xs, 1) || !is_var(step_imp->rhs->args[0], y)) return std::nullopt;
  if (!is(start, FormulaKind::kAllFirst) || !is(start->lhs, FormulaKind::kImplies)) return std::nullopt;
  const std::string& z = start->var;
  if (!is_set_var_app(start->lhs->rhs, xs, 1) || !is_var(start->lhs->rhs->args[0], z)) return std::nullopt;
  ClosureMatch out;
  out.set_var = xs;
  out.step_from = x;
  out.step_to = y;
  out.step = step_imp->lhs->rhs;
  out.start_var = z;
  out.start = start->lhs->lhs;
  out.target = imp->rhs->args[0];
  if (mentions_second(out.step, xs) || mentions_second(out.start, xs) ||
      free_vars(out.target).second.count(xs)) {
    return std::nullopt;
  }
  return out;
}

std::optional<TermPtr> match_natural(const FormulaPtr& f) {
  if (!is(f, FormulaKind::kAnd) || !is(f->lhs, FormulaKind::kOr) || !is(f->lhs->rhs, FormulaKind::kEq) ||
      !is(f->rhs, FormulaKind::kExFirst) || !is(f->lhs->lhs, FormulaKind::kAllSecond)) {
    return std::nullopt;
  }
  TermPtr t = f->lhs->rhs->rhs_term;
  NameSupply names;
  if (!alpha_equal(natural(t, names), f)) return std::nullopt;
  return t;
}

std::optional<GuardMatch> match_all_n(const FormulaPtr& f) {
  if (!is(f, FormulaKind::kBox) || !is(f->lhs, FormulaKind::kAllFirst) ||
      !is(f->lhs->lhs, FormulaKind::kImplies)) {
    return std::nullopt;
  }
  auto t = match_natural(f->lhs->lhs->lhs);
  if (!t || !is_var(*t, f->lhs->var)) return std::nullopt;
  return GuardMatch{f->lhs->var, f->lhs->lhs->rhs};
}

std::optional<GuardMatch> match_ex_n(const FormulaPtr& f) {
  if (!is(f, FormulaKind::kDia) || !is(f->lhs, FormulaKind::kExFirst) || !is(f->lhs->lhs, FormulaKind::kAnd)) {
    return std::nullopt;
  }
  auto t = match_natural(f->lhs->lhs->lhs);
  if (!t || !is_var(*t, f->lhs->var)) return std::nullopt;
  return GuardMatch{f->lhs->var, f->lhs->lhs->rhs};
}

}  // namespace pimodel
