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

#include "pimodel/translate.hpp"

#include <functional>

#include "pimodel/shapes.hpp"

namespace pimodel {

namespace {

class Fregean {
 public:
  explicit Fregean(NameSupply& names) : names_(names) {}

  bool second_order = false;

  FormulaPtr run(const ArithPtr& f) {
    switch (f->kind) {
      case ArithKind::kEq:
        return Eq(arg(f, 0), arg(f, 1));
      case ArithKind::kZero:
        return Eq(arg(f, 0), Zero());
      case ArithKind::kS:
        return successor(arg(f, 0), arg(f, 1), names_);
      case ArithKind::kPlus:
        return plus(arg(f, 0), arg(f, 1), arg(f, 2), names_);
      case ArithKind::kTimes:
        return times(arg(f, 0), arg(f, 1), arg(f, 2), names_);
      case ArithKind::kApp: {
        std::vector<TermPtr> args;
        for (std::size_t i = 0; i < f->args.size(); ++i) args.push_back(arg(f, i));
        return App(SetVar(f->set_name, f->arity), std::move(args));
      }
      case ArithKind::kNot:
        return Not(run(f->lhs));
      case ArithKind::kAnd:
        return And(run(f->lhs), run(f->rhs));
      case ArithKind::kOr:
        return Or(run(f->lhs), run(f->rhs));
      case ArithKind::kImplies:
        return Implies(run(f->lhs), run(f->rhs));
      case ArithKind::kIff:
        return Iff(run(f->lhs), run(f->rhs));
      case ArithKind::kAll:
        return all_n(f->var, run(f->lhs), names_);
      case ArithKind::kEx:
        return ex_n(f->var, run(f->lhs), names_);
      case ArithKind::kAllSecond:
      case ArithKind::kExSecond: {
        second_order = true;
        FormulaPtr body = run(f->lhs);
        FormulaPtr guard = relation_guard(f->var, f->arity);
        if (f->kind == ArithKind::kAllSecond) return Box(ForallSecond(f->var, f->arity, Implies(guard, body)));
        return Dia(ExistsSecond(f->var, f->arity, And(guard, body)));
      }
      case ArithKind::kAllLe:
      case ArithKind::kExLe:
        throw Error("translation needs unnested input; bounded quantifier over " + f->var);
    }
    throw Error("unknown arithmetic formula");
  }

 private:
  static TermPtr arg(const ArithPtr& f, std::size_t i) {
    const ArithArg& a = f->args.at(i);
    if (a.numeral) throw Error("translation needs unnested input; numeral " + std::to_string(a.value));
    return Var(a.name);
  }

  // Ax1..xn(X x1..xn -> N x1 & ... & N xn).
  FormulaPtr relation_guard(const std::string& set, int arity) {
    std::vector<std::string> vars;
    std::vector<TermPtr> args;
    for (int i = 0; i < arity; ++i) {
      vars.push_back(names_.fresh("x"));
      args.push_back(Var(vars.back()));
    }
    std::vector<FormulaPtr> nat;
    for (const auto& a : args) nat.push_back(natural(a, names_));
    FormulaPtr out = Implies(App(SetVar(set, arity), args), AndAll(nat));
    for (int i = arity - 1; i >= 0; --i) out = ForallFirst(vars[i], out);
    return out;
  }

  NameSupply& names_;
};

std::set<std::string> arith_names(const ArithPtr& f, std::set<std::string> acc = {}) {
  if (!f) return acc;
  for (const auto& a : f->args) {
    if (!a.numeral) acc.insert(a.name);
  }
  if (!f->set_name.empty()) acc.insert(f->set_name);
  if (!f->var.empty()) acc.insert(f->var);
  acc = arith_names(f->lhs, std::move(acc));
  return arith_names(f->rhs, std::move(acc));
}

FormulaPtr rebuild(const FormulaPtr& f, const std::function<FormulaPtr(const FormulaPtr&)>& leaf) {
  if (auto r = leaf(f)) return r;
  switch (f->kind) {
    case FormulaKind::kEq:
    case FormulaKind::kApp:
      return f;
    case FormulaKind::kNot:
      return Not(rebuild(f->lhs, leaf));
    case FormulaKind::kAnd:
      return And(rebuild(f->lhs, leaf), rebuild(f->rhs, leaf));
    case FormulaKind::kOr:
      return Or(rebuild(f->lhs, leaf), rebuild(f->rhs, leaf));
    case FormulaKind::kImplies:
      return Implies(rebuild(f->lhs, leaf), rebuild(f->rhs, leaf));
    case FormulaKind::kIff:
      return Iff(rebuild(f->lhs, leaf), rebuild(f->rhs, leaf));
    case FormulaKind::kBox:
      return Box(rebuild(f->lhs, leaf));
    case FormulaKind::kDia:
      return Dia(rebuild(f->lhs, leaf));
    case FormulaKind::kAllFirst:
      return ForallFirst(f->var, rebuild(f->lhs, leaf));
    case FormulaKind::kExFirst:
      return ExistsFirst(f->var, rebuild(f->lhs, leaf));
    case FormulaKind::kAllSecond:
      return ForallSecond(f->var, f->arity, rebuild(f->lhs, leaf));
    case FormulaKind::kExSecond:
      return ExistsSecond(f->var, f->arity, rebuild(f->lhs, leaf));
  }
  return f;
}

}  // namespace

TranslationOutput fregean(const ArithPtr& f) {
  if (!is_unnested(f)) throw Error("translation needs unnested input: " + render(f));
  NameSupply names(arith_names(f));
  Fregean tr(names);
  TranslationOutput out;
  out.formula = tr.run(f);
  out.beyond_first_order = tr.second_order;
  NameSupply dom_names({"x"});
  out.domain_formula = natural(Var("x"), dom_names);
  FreeVars fv = free_vars(f);
  for (const auto& v : fv.first) out.free_var_map[v] = v;
  for (const auto& [v, arity] : fv.second) out.free_var_map[v] = v;
  return out;
}

FormulaPtr with_successor_alt(const FormulaPtr& f) {
  NameSupply names(all_names(f));
  return rebuild(f, [&](const FormulaPtr& g) -> FormulaPtr {
    if (auto m = match_successor(g)) return successor_alt(m->first, m->second, names);
    return nullptr;
  });
}

FormulaPtr sigma(std::uint64_t n, const std::string& var) {
  NameSupply names({var});
  std::function<FormulaPtr(std::uint64_t, const std::string&)> build = [&](std::uint64_t k, const std::string& v) {
    if (k == 0) return Eq(Var(v), Zero());
    std::string y = names.fresh("y");
    return ex_n(y, And(build(k - 1, y), successor(Var(y), Var(v), names)), names);
  };
  return build(n, var);
}

FormulaPtr all_n_many(const std::vector<std::string>& vars, FormulaPtr body, NameSupply& names) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    body = ForallFirst(*it, Implies(natural(Var(*it), names), body));
  }
  return Box(body);
}

std::vector<NamedFormula> axiom_suite() {
  NameSupply ns({"x", "y", "z", "z'", "n", "x0", "x1", "y0", "y1"});
  auto v = [](const char* name) { return Var(name); };
  auto S = [&](TermPtr a, TermPtr b) { return successor(std::move(a), std::move(b), ns); };
  auto P = [&](TermPtr a, TermPtr b, TermPtr c) { return plus(std::move(a), std::move(b), std::move(c), ns); };
  auto T = [&](TermPtr a, TermPtr b, TermPtr c) { return times(std::move(a), std::move(b), std::move(c), ns); };
  std::vector<NamedFormula> out;
  out.push_back({"S1", all_n_many({"x", "y", "z"},
                                  Implies(And(S(v("x"), v("y")), S(v("x"), v("z"))), Eq(v("y"), v("z"))), ns)});
  out.push_back({"S2", all_n("x", ex_n("y", S(v("x"), v("y")), ns), ns)});
  out.push_back({"A1", all_n_many({"x", "y", "z", "z'"},
                                  Implies(And(P(v("x"), v("y"), v("z")), P(v("x"), v("y"), v("z'"))),
                                          Eq(v("z"), v("z'"))),
                                  ns)});
  out.push_back({"A2", all_n_many({"x", "y"}, ex_n("z", P(v("x"), v("y"), v("z")), ns), ns)});
  out.push_back({"M1", all_n_many({"x", "y", "z", "z'"},
                                  Implies(And(T(v("x"), v("y"), v("z")), T(v("x"), v("y"), v("z'"))),
                                          Eq(v("z"), v("z'"))),
                                  ns)});
  out.push_back({"M2", all_n_many({"x", "y"}, ex_n("z", T(v("x"), v("y"), v("z")), ns), ns)});
  out.push_back({"Z1", ex_n("x",
                            And(Eq(v("x"), Zero()),
                                Box(ForallFirst("y", Implies(Eq(v("y"), Zero()), Eq(v("y"), v("x")))))),
                            ns)});
  out.push_back({"Q1", Not(ex_n("x", S(v("x"), Zero()), ns))});
  out.push_back({"Q2", all_n_many({"x", "y", "z"},
                                  Implies(And(S(v("x"), v("z")), S(v("y"), v("z"))), Eq(v("x"), v("y"))), ns)});
  out.push_back({"Q3", all_n("x", P(v("x"), Zero(), v("x")), ns)});
  out.push_back({"Q4", all_n_many({"n", "x0", "x1", "y0", "y1", "z"},
                                  Implies(AndAll({S(v("x0"), v("x1")), S(v("y0"), v("y1")),
                                                  P(v("n"), v("x0"), v("y0")), P(v("n"), v("x1"), v("z"))}),
                                          Eq(v("y1"), v("z"))),
                                  ns)});
  out.push_back({"Q5", all_n("x", T(v("x"), Zero(), Zero()), ns)});
  out.push_back({"Q6", all_n_many({"n", "x0", "x1", "y0", "y1", "z"},
                                  Implies(AndAll({S(v("x0"), v("x1")), P(v("n"), v("y0"), v("y1")),
                                                  T(v("n"), v("x0"), v("y0")), T(v("n"), v("x1"), v("z"))}),
                                          Eq(v("y1"), v("z"))),
                                  ns)});
  return out;
}

FormulaPtr induction_instance(const FormulaPtr& phi, const std::string& var) {
  if (!free_vars(phi).first.count(var)) throw Error("induction variable " + var + " is not free in the formula");
  NameSupply names(all_names(phi));
  std::string x = names.fresh("x");
  std::string y = names.fresh("y");
  FormulaPtr at_zero = substitute(phi, var, Zero());
  FormulaPtr at_x = substitute(phi, var, Var(x));
  FormulaPtr at_y = substitute(phi, var, Var(y));
  FormulaPtr step = all_n_many({x, y}, Implies(And(at_x, successor(Var(x), Var(y), names)), at_y), names);
  std::string x2 = names.fresh("x");
  return Implies(And(at_zero, step), all_n(x2, substitute(phi, var, Var(x2)), names));
}

}  // namespace pimodel
