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

#include "pimodel/parse.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "pimodel/shapes.hpp"

namespace pimodel {

std::string Sexp::where() const {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void fail_at(const Sexp& node, const std::string& message) {
  throw Error(node.where() + ": " + message);
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Sexp read_top() {
    skip();
    if (at_end()) throw Error(here() + ": empty input");
    Sexp s = read();
    skip();
    if (!at_end()) throw Error(here() + ": unexpected trailing input");
    return s;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  std::string here() const {
    return "line " + std::to_string(line_) + ", column " + std::to_string(col_);
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (!at_end()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (!at_end() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Sexp read() {
    Sexp s;
    s.line = line_;
    s.column = col_;
    char c = text_[pos_];
    if (c == ')') throw Error(here() + ": unexpected ')'");
    if (c == '(') {
      advance();
      for (;;) {
        skip();
        if (at_end()) throw Error(s.where() + ": unclosed '('");
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        s.items.push_back(read());
      }
      return s;
    }
    s.is_atom = true;
    while (!at_end()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
      s.atom.push_back(d);
      advance();
    }
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  unsigned char c0 = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(c0) && s[0] != '_') return false;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_' && c != '.' && c != '\'') return false;
  }
  return true;
}

void collect_atoms(const Sexp& s, std::set<std::string>& out) {
  if (s.is_atom) {
    out.insert(s.atom);
    return;
  }
  for (const auto& i : s.items) collect_atoms(i, out);
}

class FormulaParser {
 public:
  explicit FormulaParser(const Sexp& root) : names_(reserved(root)) {}

  FormulaPtr formula(const Sexp& s) {
    if (s.is_atom || s.items.empty() || !s.items[0].is_atom) fail_at(s, "expected a formula");
    const std::string& head = s.items[0].atom;
    std::size_t n = s.items.size();
    if (head == "=") {
      arity_check(s, 3);
      return Eq(term(s.items[1]), term(s.items[2]));
    }
    if (head == "app") {
      if (n < 3) fail_at(s, "app needs a set expression and at least one argument");
      SetPtr set = set_expr(s.items[1], static_cast<int>(n - 2));
      std::vector<TermPtr> args;
      for (std::size_t i = 2; i < n; ++i) args.push_back(term(s.items[i]));
      return App(set, std::move(args));
    }
    if (head == "not" || head == "box" || head == "dia") {
      arity_check(s, 2);
      FormulaPtr body = formula(s.items[1]);
      if (head == "not") return Not(body);
      return head == "box" ? Box(body) : Dia(body);
    }
    if (head == "and" || head == "or") {
      if (n < 3) fail_at(s, head + " needs at least two operands");
      FormulaPtr acc = formula(s.items[n - 1]);
      for (std::size_t i = n - 1; i-- > 1;) {
        FormulaPtr l = formula(s.items[i]);
        acc = head == "and" ? And(l, acc) : Or(l, acc);
      }
      return acc;
    }
    if (head == "->" || head == "<->") {
      arity_check(s, 3);
      FormulaPtr l = formula(s.items[1]);
      FormulaPtr r = formula(s.items[2]);
      return head == "->" ? Implies(l, r) : Iff(l, r);
    }
    if (head == "all" || head == "ex" || head == "allN" || head == "exN") {
      arity_check(s, 3);
      std::string var = bind_first(s.items[1]);
      FormulaPtr body = formula(s.items[2]);
      unbind_first(s.items[1].atom);
      if (head == "all") return ForallFirst(var, body);
      if (head == "ex") return ExistsFirst(var, body);
      if (head == "allN") return all_n(var, body, names_);
      return ex_n(var, body, names_);
    }
    if (head == "All" || head == "Ex") {
      arity_check(s, 4);
      int arity = parse_arity(s.items[2]);
      std::string var = bind_second(s.items[1], arity);
      FormulaPtr body = formula(s.items[3]);
      unbind_second(s.items[1].atom);
      return head == "All" ? ForallSecond(var, arity, body) : ExistsSecond(var, arity, body);
    }
    if (head == "N") {
      arity_check(s, 2);
      return natural(term(s.items[1]), names_);
    }
    fail_at(s.items[0], "unknown formula head '" + head + "'");
  }

 private:
  static std::set<std::string> reserved(const Sexp& root) {
    std::set<std::string> out;
    collect_atoms(root, out);
    return out;
  }

  static void arity_check(const Sexp& s, std::size_t n) {
    if (s.items.size() != n) {
      fail_at(s, "'" + s.items[0].atom + "' takes " + std::to_string(n - 1) + " operand(s), got " +
                     std::to_string(s.items.size() - 1));
    }
  }

  static int parse_arity(const Sexp& s) {
    if (!s.is_atom || s.atom.empty() || s.atom.size() > 2) fail_at(s, "expected a positive arity");
    for (char c : s.atom) {
      if (!std::isdigit(static_cast<unsigned char>(c))) fail_at(s, "expected a positive arity");
    }
    int a = std::stoi(s.atom);
    if (a < 1) fail_at(s, "expected a positive arity");
    return a;
  }

  static const std::string& identifier(const Sexp& s) {
    if (!s.is_atom || !is_identifier(s.atom) || s.atom == "zero" || s.atom == "empty") {
      fail_at(s, "expected an identifier");
    }
    return s.atom;
  }

  std::string fresh_binder(const std::string& name) {
    bool taken = (first_.count(name) && !first_[name].empty()) || (second_.count(name) && !second_[name].empty());
    return taken ? names_.fresh(name) : name;
  }

  std::string bind_first(const Sexp& s) {
    const std::string& name = identifier(s);
    std::string actual = fresh_binder(name);
    first_[name].push_back(actual);
    return actual;
  }

  void unbind_first(const std::string& name) { first_[name].pop_back(); }

  std::string bind_second(const Sexp& s, int arity) {
    const std::string& name = identifier(s);
    std::string actual = fresh_binder(name);
    second_[name].push_back({actual, arity});
    return actual;
  }

  void unbind_second(const std::string& name) { second_[name].pop_back(); }

  TermPtr term(const Sexp& s) {
    if (s.is_atom) {
      if (s.atom == "zero") return Zero();
      const std::string& name = identifier(s);
      auto it = first_.find(name);
      if (it != first_.end() && !it->second.empty()) return Var(it->second.back());
      return Var(name);
    }
    if (s.items.size() == 2 && s.items[0].is_atom && s.items[0].atom == "card") {
      return Card(set_expr(s.items[1], 1));
    }
    fail_at(s, "expected a term");
  }

  SetPtr set_expr(const Sexp& s, int expected) {
    if (s.is_atom) {
      if (s.atom == "empty") {
        if (expected != 1) fail_at(s, "arity mismatch: empty has arity 1");
        return EmptySet();
      }
      const std::string& name = identifier(s);
      auto it = second_.find(name);
      if (it != second_.end() && !it->second.empty()) {
        const auto& [actual, arity] = it->second.back();
        if (arity != expected) {
          fail_at(s, "arity mismatch: " + name + " is declared with arity " + std::to_string(arity) +
                         " but used with arity " + std::to_string(expected));
        }
        return SetVar(actual, arity);
      }
      auto [fit, inserted] = free_arity_.emplace(name, expected);
      if (!inserted && fit->second != expected) {
        fail_at(s, "arity mismatch: free variable " + name + " first used with arity " +
                       std::to_string(fit->second) + " and now with arity " + std::to_string(expected));
      }
      return SetVar(name, expected);
    }
    if (s.items.size() != 3 || !s.items[0].is_atom) fail_at(s, "expected a set expression");
    const std::string& head = s.items[0].atom;
    if (expected != 1) fail_at(s, "arity mismatch: " + head + " denotes a set of arity 1");
    if (head == "union") return UnionOf(set_expr(s.items[1], 1), set_expr(s.items[2], 1));
    if (head == "minus") return MinusOne(set_expr(s.items[1], 1), term(s.items[2]));
    if (head == "plus1") return PlusOne(set_expr(s.items[1], 1), term(s.items[2]));
    if (head == "sect") return Section(set_expr(s.items[1], 2), term(s.items[2]));
    if (head == "bigusect") return BigUnionSection(set_expr(s.items[1], 2), set_expr(s.items[2], 1));
    fail_at(s.items[0], "unknown set expression head '" + head + "'");
  }

  NameSupply names_;
  std::map<std::string, std::vector<std::string>> first_;
  std::map<std::string, std::vector<std::pair<std::string, int>>> second_;
  std::map<std::string, int> free_arity_;
};

}  // namespace

Sexp read_sexp(std::string_view text) {
  Reader r(text);
  return r.read_top();
}

FormulaPtr parse_formula(const Sexp& node) {
  FormulaParser p(node);
  return p.formula(node);
}

FormulaPtr parse_formula(std::string_view text) { return parse_formula(read_sexp(text)); }

}  // namespace pimodel
