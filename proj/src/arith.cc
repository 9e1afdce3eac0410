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

#include "pimodel/arith.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace pimodel {

ArithArg AVar(std::string name) {
  ArithArg a;
  a.name = std::move(name);
  return a;
}

ArithArg ANum(std::uint64_t value) {
  ArithArg a;
  a.numeral = true;
  a.value = value;
  return a;
}

namespace {

std::shared_ptr<ArithFormula> make(ArithKind k) {
  auto f = std::make_shared<ArithFormula>();
  f->kind = k;
  return f;
}

ArithPtr atom(ArithKind k, std::vector<ArithArg> args) {
  auto f = make(k);
  f->args = std::move(args);
  return f;
}

ArithPtr binary(ArithKind k, ArithPtr l, ArithPtr r) {
  auto f = make(k);
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

ArithPtr quant(ArithKind k, std::string v, ArithPtr body, int arity = 0, std::uint64_t bound = 0) {
  auto f = make(k);
  f->var = std::move(v);
  f->lhs = std::move(body);
  f->arity = arity;
  f->bound = bound;
  return f;
}

}  // namespace

ArithPtr AEq(ArithArg a, ArithArg b) { return atom(ArithKind::kEq, {std::move(a), std::move(b)}); }
ArithPtr AZero(ArithArg a) { return atom(ArithKind::kZero, {std::move(a)}); }
ArithPtr AS(ArithArg a, ArithArg b) { return atom(ArithKind::kS, {std::move(a), std::move(b)}); }
ArithPtr APlus(ArithArg a, ArithArg b, ArithArg c) {
  return atom(ArithKind::kPlus, {std::move(a), std::move(b), std::move(c)});
}
ArithPtr ATimes(ArithArg a, ArithArg b, ArithArg c) {
  return atom(ArithKind::kTimes, {std::move(a), std::move(b), std::move(c)});
}

ArithPtr AApp(std::string set, std::vector<ArithArg> args) {
  if (args.empty()) throw Error("application of " + set + " needs arguments");
  auto f = make(ArithKind::kApp);
  f->set_name = std::move(set);
  f->arity = static_cast<int>(args.size());
  f->args = std::move(args);
  return f;
}

ArithPtr ANot(ArithPtr g) {
  auto f = make(ArithKind::kNot);
  f->lhs = std::move(g);
  return f;
}

ArithPtr AAnd(ArithPtr l, ArithPtr r) { return binary(ArithKind::kAnd, std::move(l), std::move(r)); }
ArithPtr AOr(ArithPtr l, ArithPtr r) { return binary(ArithKind::kOr, std::move(l), std::move(r)); }
ArithPtr AImplies(ArithPtr l, ArithPtr r) { return binary(ArithKind::kImplies, std::move(l), std::move(r)); }
ArithPtr AIff(ArithPtr l, ArithPtr r) { return binary(ArithKind::kIff, std::move(l), std::move(r)); }
ArithPtr AAll(std::string v, ArithPtr f) { return quant(ArithKind::kAll, std::move(v), std::move(f)); }
ArithPtr AEx(std::string v, ArithPtr f) { return quant(ArithKind::kEx, std::move(v), std::move(f)); }
ArithPtr AAllLe(std::string v, std::uint64_t bound, ArithPtr f) {
  return quant(ArithKind::kAllLe, std::move(v), std::move(f), 0, bound);
}
ArithPtr AExLe(std::string v, std::uint64_t bound, ArithPtr f) {
  return quant(ArithKind::kExLe, std::move(v), std::move(f), 0, bound);
}
ArithPtr AAllSecond(std::string v, int arity, ArithPtr f) {
  if (arity < 1) throw Error("second-order quantifier needs positive arity");
  return quant(ArithKind::kAllSecond, std::move(v), std::move(f), arity);
}
ArithPtr AExSecond(std::string v, int arity, ArithPtr f) {
  if (arity < 1) throw Error("second-order quantifier needs positive arity");
  return quant(ArithKind::kExSecond, std::move(v), std::move(f), arity);
}

namespace {

const std::map<std::string, std::pair<ArithKind, std::size_t>>& atom_heads() {
  static const std::map<std::string, std::pair<ArithKind, std::size_t>> heads = {
      {"=", {ArithKind::kEq, 2}},       {"zero", {ArithKind::kZero, 1}},
      {"S", {ArithKind::kS, 2}},        {"plus", {ArithKind::kPlus, 3}},
      {"times", {ArithKind::kTimes, 3}},
  };
  return heads;
}

const char* kRelationalHint =
    "the arithmetic language is relational: write (S x y) for y = x+1, (plus x y z) for "
    "x+y = z, (times x y z) for x*y = z, with variables or numerals as arguments";

bool is_numeral(const std::string& s) {
  if (s.empty() || s.size() > 9) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool is_ident(const std::string& s) {
  if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_' && c != '.' && c != '\'') return false;
  }
  return true;
}

void collect(const Sexp& s, std::set<std::string>& out) {
  if (s.is_atom) {
    out.insert(s.atom);
  } else {
    for (const auto& i : s.items) collect(i, out);
  }
}

class ArithParser {
 public:
  explicit ArithParser(const Sexp& root) {
    std::set<std::string> reserved;
    collect(root, reserved);
    names_ = NameSupply(std::move(reserved));
  }

  ArithPtr formula(const Sexp& s) {
    if (s.is_atom || s.items.empty() || !s.items[0].is_atom) fail_at(s, "expected an arithmetic formula");
    const std::string& head = s.items[0].atom;
    std::size_t n = s.items.size();
    if (auto it = atom_heads().find(head); it != atom_heads().end()) {
      auto [kind, want] = it->second;
      if (n - 1 != want) {
        fail_at(s, "'" + head + "' takes " + std::to_string(want) + " argument(s), got " +
                       std::to_string(n - 1) + "; " + kRelationalHint);
      }
      std::vector<ArithArg> args;
      for (std::size_t i = 1; i < n; ++i) args.push_back(arg(s.items[i]));
      return atom(kind, std::move(args));
    }
    if (head == "app") {
      if (n < 3) fail_at(s, "app needs a set variable and at least one argument");
      const std::string& name = ident(s.items[1]);
      int arity = static_cast<int>(n - 2);
      std::string actual = name;
      auto it = second_.find(name);
      if (it != second_.end() && !it->second.empty()) {
        auto [act, declared] = it->second.back();
        if (declared != arity) {
          fail_at(s, "arity mismatch: " + name + " is declared with arity " + std::to_string(declared));
        }
        actual = act;
      } else {
        auto [fit, inserted] = free_arity_.emplace(name, arity);
        if (!inserted && fit->second != arity) fail_at(s, "arity mismatch for free variable " + name);
      }
      std::vector<ArithArg> args;
      for (std::size_t i = 2; i < n; ++i) args.push_back(arg(s.items[i]));
      return AApp(actual, std::move(args));
    }
    if (head == "not") {
      expect(s, 2);
      return ANot(formula(s.items[1]));
    }
    if (head == "and" || head == "or") {
      if (n < 3) fail_at(s, head + " needs at least two operands");
      ArithPtr acc = formula(s.items[n - 1]);
      for (std::size_t i = n - 1; i-- > 1;) {
        ArithPtr l = formula(s.items[i]);
        acc = head == "and" ? AAnd(l, acc) : AOr(l, acc);
      }
      return acc;
    }
    if (head == "->" || head == "<->") {
      expect(s, 3);
      ArithPtr l = formula(s.items[1]);
      ArithPtr r = formula(s.items[2]);
      return head == "->" ? AImplies(l, r) : AIff(l, r);
    }
    if (head == "all" || head == "ex") {
      expect(s, 3);
      std::string v = bind(s.items[1]);
      ArithPtr body = formula(s.items[2]);
      first_[s.items[1].atom].pop_back();
      return head == "all" ? AAll(v, body) : AEx(v, body);
    }
    if (head == "allle" || head == "exle") {
      expect(s, 4);
      if (!s.items[2].is_atom || !is_numeral(s.items[2].atom)) fail_at(s.items[2], "expected a numeral bound");
      std::uint64_t b = std::stoull(s.items[2].atom);
      std::string v = bind(s.items[1]);
      ArithPtr body = formula(s.items[3]);
      first_[s.items[1].atom].pop_back();
      return head == "allle" ? AAllLe(v, b, body) : AExLe(v, b, body);
    }
    if (head == "All" || head == "Ex") {
      expect(s, 4);
      if (!s.items[2].is_atom || !is_numeral(s.items[2].atom) || std::stoi(s.items[2].atom) < 1) {
        fail_at(s.items[2], "expected a positive arity");
      }
      int arity = std::stoi(s.items[2].atom);
      const std::string& name = ident(s.items[1]);
      std::string actual = taken(name) ? names_.fresh(name) : name;
      second_[name].push_back({actual, arity});
      ArithPtr body = formula(s.items[3]);
      second_[name].pop_back();
      return head == "All" ? AAllSecond(actual, arity, body) : AExSecond(actual, arity, body);
    }
    if (head == "box" || head == "dia") fail_at(s, "modal operators are not part of the arithmetic language");
    fail_at(s.items[0], "unknown arithmetic head '" + head + "'");
  }

 private:
  static void expect(const Sexp& s, std::size_t n) {
    if (s.items.size() != n) {
      fail_at(s, "'" + s.items[0].atom + "' takes " + std::to_string(n - 1) + " operand(s)");
    }
  }

  static const std::string& ident(const Sexp& s) {
    if (!s.is_atom || !is_ident(s.atom)) fail_at(s, "expected an identifier");
    return s.atom;
  }

  bool taken(const std::string& name) {
    auto a = first_.find(name);
    auto b = second_.find(name);
    return (a != first_.end() && !a->second.empty()) || (b != second_.end() && !b->second.empty());
  }

  std::string bind(const Sexp& s) {
    const std::string& name = ident(s);
    std::string actual = taken(name) ? names_.fresh(name) : name;
    first_[name].push_back(actual);
    return actual;
  }

  ArithArg arg(const Sexp& s) {
    if (!s.is_atom) fail_at(s, std::string("functional terms are not allowed; ") + kRelationalHint);
    if (is_numeral(s.atom)) return ANum(std::stoull(s.atom));
    const std::string& name = ident(s);
    auto it = first_.find(name);
    if (it != first_.end() && !it->second.empty()) return AVar(it->second.back());
    return AVar(name);
  }

  NameSupply names_;
  std::map<std::string, std::vector<std::string>> first_;
  std::map<std::string, std::vector<std::pair<std::string, int>>> second_;
  std::map<std::string, int> free_arity_;
};

std::string render_arg(const ArithArg& a) { return a.numeral ? std::to_string(a.value) : a.name; }

void render_into(const ArithPtr& f, std::ostringstream& out) {
  static const char* atom_names[] = {"=", "zero", "S", "plus", "times"};
  if (f->kind == ArithKind::kApp) {
    out << "(app " << f->set_name;
    for (const auto& a : f->args) out << " " << render_arg(a);
    out << ")";
    return;
  }
  if (f->is_atom()) {
    out << "(" << atom_names[static_cast<int>(f->kind)];
    for (const auto& a : f->args) out << " " << render_arg(a);
    out << ")";
    return;
  }
  switch (f->kind) {
    case ArithKind::kNot: out << "(not "; break;
    case ArithKind::kAnd: out << "(and "; break;
    case ArithKind::kOr: out << "(or "; break;
    case ArithKind::kImplies: out << "(-> "; break;
    case ArithKind::kIff: out << "(<-> "; break;
    case ArithKind::kAll: out << "(all " << f->var << " "; break;
    case ArithKind::kEx: out << "(ex " << f->var << " "; break;
    case ArithKind::kAllLe: out << "(allle " << f->var << " " << f->bound << " "; break;
    case ArithKind::kExLe: out << "(exle " << f->var << " " << f->bound << " "; break;
    case ArithKind::kAllSecond: out << "(All " << f->var << " " << f->arity << " "; break;
    case ArithKind::kExSecond: out << "(Ex " << f->var << " " << f->arity << " "; break;
    default: break;
  }
  render_into(f->lhs, out);
  if (f->rhs) {
    out << " ";
    render_into(f->rhs, out);
  }
  out << ")";
}

}  // namespace

ArithPtr parse_arith(const Sexp& node) {
  ArithParser p(node);
  return p.formula(node);
}

ArithPtr parse_arith(std::string_view text) { return parse_arith(read_sexp(text)); }

std::string render(const ArithPtr& f) {
  std::ostringstream out;
  render_into(f, out);
  return out.str();
}

namespace {

void collect_free(const ArithPtr& f, std::map<std::string, int>& bound_first,
                  std::map<std::string, int>& bound_second, FreeVars& out) {
  if (f->kind == ArithKind::kApp) {
    if (!bound_second.count(f->set_name)) out.second.emplace(f->set_name, f->arity);
  }
  if (f->is_atom()) {
    for (const auto& a : f->args) {
      if (!a.numeral && !bound_first.count(a.name)) out.first.insert(a.name);
    }
    return;
  }
  bool first = f->kind == ArithKind::kAll || f->kind == ArithKind::kEx || f->kind == ArithKind::kAllLe ||
               f->kind == ArithKind::kExLe;
  bool second = f->kind == ArithKind::kAllSecond || f->kind == ArithKind::kExSecond;
  if (first) ++bound_first[f->var];
  if (second) ++bound_second[f->var];
  collect_free(f->lhs, bound_first, bound_second, out);
  if (f->rhs) collect_free(f->rhs, bound_first, bound_second, out);
  if (first && --bound_first[f->var] == 0) bound_first.erase(f->var);
  if (second && --bound_second[f->var] == 0) bound_second.erase(f->var);
}

void all_arith_names(const ArithPtr& f, std::set<std::string>& out) {
  if (f->kind == ArithKind::kApp) out.insert(f->set_name);
  for (const auto& a : f->args) {
    if (!a.numeral) out.insert(a.name);
  }
  if (!f->var.empty()) out.insert(f->var);
  if (f->lhs) all_arith_names(f->lhs, out);
  if (f->rhs) all_arith_names(f->rhs, out);
}

class ArithAlpha {
 public:
  bool eq(const ArithPtr& f, const ArithPtr& g) {
    if (f->kind != g->kind || f->args.size() != g->args.size() || f->bound != g->bound || f->arity != g->arity) {
      return false;
    }
    if (f->kind == ArithKind::kApp && !same(second_l_, f->set_name, second_r_, g->set_name)) return false;
    if (f->is_atom()) {
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        const auto& a = f->args[i];
        const auto& b = g->args[i];
        if (a.numeral != b.numeral) return false;
        if (a.numeral ? a.value != b.value : !same(first_l_, a.name, first_r_, b.name)) return false;
      }
      return true;
    }
    bool second = f->kind == ArithKind::kAllSecond || f->kind == ArithKind::kExSecond;
    if (!f->var.empty()) {
      auto& l = second ? second_l_ : first_l_;
      auto& r = second ? second_r_ : first_r_;
      int id = next_++;
      l[f->var].push_back(id);
      r[g->var].push_back(id);
      bool ok = eq(f->lhs, g->lhs);
      l[f->var].pop_back();
      r[g->var].pop_back();
      return ok;
    }
    return eq(f->lhs, g->lhs) && (!f->rhs || eq(f->rhs, g->rhs));
  }

 private:
  using Scope = std::map<std::string, std::vector<int>>;
  static bool same(const Scope& l, const std::string& a, const Scope& r, const std::string& b) {
    auto il = l.find(a);
    auto ir = r.find(b);
    bool bl = il != l.end() && !il->second.empty();
    bool br = ir != r.end() && !ir->second.empty();
    if (bl != br) return false;
    return bl ? il->second.back() == ir->second.back() : a == b;
  }
  Scope first_l_, first_r_, second_l_, second_r_;
  int next_ = 0;
};

ArithPtr less_equal(const std::string& x, std::uint64_t n, NameSupply& names, const std::set<std::string>& avoid) {
  std::string m = names.fresh("m", avoid);
  std::string d = names.fresh("d", avoid);
  return AEx(m, AAnd(tau(n, m, names), AEx(d, APlus(AVar(x), AVar(d), AVar(m)))));
}

ArithPtr unnest_atom(const ArithPtr& f, NameSupply& names, const std::set<std::string>& avoid) {
  bool any = false;
  for (const auto& a : f->args) any = any || a.numeral;
  if (!any) return f;
  if (f->kind == ArithKind::kEq) {
    const ArithArg& a = f->args[0];
    const ArithArg& b = f->args[1];
    if (a.numeral && !b.numeral) return tau(a.value, b.name, names);
    if (!a.numeral && b.numeral) return tau(b.value, a.name, names);
    std::string v = names.fresh("v", avoid);
    return AEx(v, AAnd(tau(a.value, v, names), tau(b.value, v, names)));
  }
  auto rewritten = std::make_shared<ArithFormula>(*f);
  std::vector<std::pair<std::string, std::uint64_t>> introduced;
  for (auto& a : rewritten->args) {
    if (!a.numeral) continue;
    std::string v = names.fresh("v", avoid);
    introduced.push_back({v, a.value});
    a = AVar(v);
  }
  ArithPtr acc = rewritten;
  for (auto it = introduced.rbegin(); it != introduced.rend(); ++it) {
    acc = AEx(it->first, AAnd(tau(it->second, it->first, names), acc));
  }
  return acc;
}

ArithPtr unnest_rec(const ArithPtr& f, NameSupply& names, const std::set<std::string>& avoid) {
  if (f->is_atom()) return unnest_atom(f, names, avoid);
  switch (f->kind) {
    case ArithKind::kNot:
      return ANot(unnest_rec(f->lhs, names, avoid));
    case ArithKind::kAnd:
    case ArithKind::kOr:
    case ArithKind::kImplies:
    case ArithKind::kIff:
      return binary(f->kind, unnest_rec(f->lhs, names, avoid), unnest_rec(f->rhs, names, avoid));
    case ArithKind::kAll:
      return AAll(f->var, unnest_rec(f->lhs, names, avoid));
    case ArithKind::kEx:
      return AEx(f->var, unnest_rec(f->lhs, names, avoid));
    case ArithKind::kAllLe:
      return AAll(f->var, AImplies(less_equal(f->var, f->bound, names, avoid), unnest_rec(f->lhs, names, avoid)));
    case ArithKind::kExLe:
      return AEx(f->var, AAnd(less_equal(f->var, f->bound, names, avoid), unnest_rec(f->lhs, names, avoid)));
    case ArithKind::kAllSecond:
      return AAllSecond(f->var, f->arity, unnest_rec(f->lhs, names, avoid));
    case ArithKind::kExSecond:
      return AExSecond(f->var, f->arity, unnest_rec(f->lhs, names, avoid));
    default:
      return f;
  }
}

}  // namespace

FreeVars free_vars(const ArithPtr& f) {
  std::map<std::string, int> bf, bs;
  FreeVars out;
  collect_free(f, bf, bs, out);
  return out;
}

bool alpha_equal(const ArithPtr& f, const ArithPtr& g) {
  ArithAlpha a;
  return a.eq(f, g);
}

bool has_second_order(const ArithPtr& f) {
  if (f->kind == ArithKind::kApp || f->kind == ArithKind::kAllSecond || f->kind == ArithKind::kExSecond) {
    return true;
  }
  return (f->lhs && has_second_order(f->lhs)) || (f->rhs && has_second_order(f->rhs));
}

ArithPtr tau(std::uint64_t n, const std::string& var, NameSupply& names) {
  if (n == 0) return AZero(AVar(var));
  std::string y = names.fresh("y", {var});
  return AEx(y, AAnd(tau(n - 1, y, names), AS(AVar(y), AVar(var))));
}

ArithPtr tau(std::uint64_t n, const std::string& var) {
  NameSupply names;
  return tau(n, var, names);
}

bool is_unnested(const ArithPtr& f) {
  if (f->is_atom()) {
    for (const auto& a : f->args) {
      if (a.numeral) return false;
    }
    return true;
  }
  if (f->kind == ArithKind::kAllLe || f->kind == ArithKind::kExLe) return false;
  return is_unnested(f->lhs) && (!f->rhs || is_unnested(f->rhs));
}

ArithPtr unnest(const ArithPtr& f) {
  std::set<std::string> avoid;
  all_arith_names(f, avoid);
  NameSupply names(avoid);
  return unnest_rec(f, names, avoid);
}

}  // namespace pimodel
