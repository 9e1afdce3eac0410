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

#include "pimodel/suite.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pimodel/arithmetize.hpp"
#include "pimodel/oracle.hpp"
#include "pimodel/shapes.hpp"
#include "pimodel/translate.hpp"

#ifndef PIMODEL_COMMIT
#define PIMODEL_COMMIT "unknown"
#endif

namespace pimodel {
namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kSuites = {
    "q-axioms",         "hume",  "lemmas-2x",           "stability", "induction-positive", "induction-counterexample",
    "translation-soundness", "codec", "equivalence-S-Sprime", "arithmetize-agreement"};

bool is_custom(const std::string& model) { return model.rfind("custom:", 0) == 0; }
bool is_subset(const std::string& model) { return model == "subset"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Largest horizon each suite accepts, for chain families and the subset family.
std::pair<std::uint64_t, std::uint64_t> horizon_guard(const std::string& suite) {
  if (suite == "arithmetize-agreement") return {4, 2};
  if (suite == "equivalence-S-Sprime") return {9, 4};
  if (suite == "codec") return {12, 6};
  return {10, 5};
}

std::string join_elements(const ElementSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

CheckResult from_report(std::string name, std::string statement, SuiteReport rep) {
  CheckResult c;
  c.name = std::move(name);
  c.statement = std::move(statement);
  rep.name = c.name;
  c.pass = rep.pass;
  c.report = std::move(rep);
  return c;
}

bool false_at_faithful_world(const SuiteReport& r) {
  for (const auto& w : r.per_world) {
    if (w.faithful && w.value == Truth::kFalse) return true;
  }
  return false;
}

std::string verdict_text(const Verdict& v) {
  return to_string(v.value) + (v.faithful ? "" : " (not faithful)");
}

// ---------------------------------------------------------------------------
// Suites.

std::vector<CheckResult> run_q_axioms(const FiniteModel& m) {
  Evaluator ev(m);
  std::vector<CheckResult> out;
  for (const auto& [name, f] : axiom_suite()) out.push_back(from_report(name, "", check_valid(ev, f)));
  return out;
}

std::vector<CheckResult> run_hume(const FiniteModel& m, std::size_t max_domain) {
  Evaluator ev(m);
  CheckOptions opts;
  opts.max_domain = max_domain;
  auto c = from_report("HP", "#X = #Y iff some relation is a bijection from X onto Y, at every world with at most " +
                                 std::to_string(max_domain) + " elements",
                       check_valid(ev, hume_principle(), opts));
  if (c.report->per_world.empty()) c.notes.push_back("no world of the model is small enough to check");
  return {c};
}

FormulaPtr successor_of(TermPtr a, TermPtr b, NameSupply& names) { return successor(a, b, names); }

// Holds_N at w only for elements of the domain of w, over every element of
// the model.
CheckResult naturals_exist(Evaluator& ev) {
  const FiniteModel& m = ev.model();
  NameSupply names({"x", "y"});
  FormulaPtr f = Implies(natural(Var("x"), names), ExistsFirst("y", Eq(Var("y"), Var("x"))));
  SuiteReport rep;
  rep.formula = render(f);
  ElementSet all = m.domain_union();
  for (std::size_t w = 0; w < m.truncated; ++w) {
    WorldVerdict wv;
    wv.world = m.world_ids[w];
    wv.value = Truth::kTrue;
    wv.faithful = true;
    for (Element e : all) {
      Verdict v = ev.eval(w, f, Env{{{"x", e}}, {}});
      wv.faithful = wv.faithful && v.faithful;
      if (v.value == Truth::kFalse) {
        wv.value = Truth::kFalse;
        wv.witness = Witness{std::nullopt, {{"x", e}}, "a number outside the domain of the world"};
        break;
      }
      if (v.value == Truth::kUnknown) wv.value = Truth::kUnknown;
    }
    rep.per_world.push_back(std::move(wv));
  }
  rep.pass = std::all_of(rep.per_world.begin(), rep.per_world.end(),
                         [](const WorldVerdict& w) { return !w.faithful || w.value == Truth::kTrue; });
  return from_report("N-exists", "a number at a world exists at that world, for every element of the model",
                     std::move(rep));
}

SuiteReport naturals_characterization(const FiniteModel& m) {
  SuiteReport rep;
  rep.formula = "I(N,w) = {a(0), ..., a(n-1)} for the least n with a(n) outside D(w)";
  for (std::size_t w = 0; w < m.truncated; ++w) {
    ElementSet got = naturals_at(m, w);
    ElementSet want = naturals_expected(m, w);
    WorldVerdict wv;
    wv.world = m.world_ids[w];
    wv.faithful = true;
    wv.value = got == want ? Truth::kTrue : Truth::kFalse;
    if (got != want) wv.witness = Witness{std::nullopt, {}, "N is " + join_elements(got) + ", expected " + join_elements(want)};
    rep.per_world.push_back(std::move(wv));
  }
  rep.pass = std::all_of(rep.per_world.begin(), rep.per_world.end(),
                         [](const WorldVerdict& w) { return w.value == Truth::kTrue; });
  return rep;
}

CheckResult subset_data_points() {
  const std::vector<std::pair<ModelFamily::World, ElementSet>> points = {
      {{2, 100}, {}}, {{0, 1, 3}, {0, 1}}, {{0, 1, 2, 3, 100}, {0, 1, 2, 3}}};
  TruncationSpec spec;
  spec.worlds = std::vector<ModelFamily::World>{};
  for (const auto& p : points) spec.worlds->push_back(p.first);
  FiniteModel m = truncate(subset_family(), spec);
  CheckResult c;
  c.name = "N-subset-points";
  c.statement = "N at the subset worlds {2,100}, {0,1,3} and {0,1,2,3,100}";
  c.pass = true;
  for (const auto& [world, want] : points) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.dom[i] == world) w = i;
    }
    ElementSet got = naturals_at(m, w);
    c.notes.push_back("N at " + join_elements(world) + " is " + join_elements(got));
    c.pass = c.pass && got == want;
  }
  return c;
}

std::vector<CheckResult> run_lemmas(const FiniteModel& m, const std::string& model) {
  Evaluator ev(m);
  std::vector<CheckResult> out;
  NameSupply names({"x", "y", "X"});
  TermPtr x = Var("x");
  TermPtr y = Var("y");

  FormulaPtr after_zero = Implies(ExistsFirst("x", Eq(x, Zero())),
                                  ForallFirst("y", Implies(successor(Zero(), y, names), natural(y, names))));
  out.push_back(from_report("N-after-zero", "if 0 exists, every successor of 0 is a number",
                            check_valid(ev, after_zero)));

  FormulaPtr closed = ForallFirst(
      "x", ForallFirst("y", Implies(And(natural(x, names), successor(x, y, names)), natural(y, names))));
  out.push_back(from_report("N-closed", "numbers are closed under successor", check_valid(ev, closed)));

  out.push_back(naturals_exist(ev));

  auto chr = from_report("N-characterization", "N at each world is the initial run of a(0), a(1), ... inside its domain",
                         naturals_characterization(m));
  out.push_back(std::move(chr));
  if (is_subset(model)) out.push_back(subset_data_points());

  out.push_back(from_report("S-stable", "S(x,y) -> []S(x,y)", check_stability(ev, successor(x, y, names), {"x", "y"})));
  out.push_back(from_report("S+-stable", "S+(x,y) -> []S+(x,y)",
                            check_stability(ev, strong_ancestral(successor_of, x, y, names), {"x", "y"})));
  out.push_back(from_report("S+=-stable", "S+=(x,y) -> []S+=(x,y)",
                            check_stability(ev, weak_ancestral(successor_of, x, y, names), {"x", "y"})));
  out.push_back(from_report("N-stable", "N(x) -> []N(x)", check_stability(ev, natural(x, names), {"x"})));

  FormulaPtr eventually = ForallSecond("X", 1, Dia(natural(Card(SetVar("X")), names)));
  out.push_back(from_report("card-eventually-N", "the cardinality of every set is a number at some accessible world",
                            check_valid(ev, eventually)));
  return out;
}

std::vector<CheckResult> run_stability(const FiniteModel& m, const std::string& model, std::uint64_t seed) {
  Evaluator ev(m);
  std::vector<CheckResult> out;
  auto corpus = inductive_corpus(seed, 24);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& f = corpus[i];
    std::set<std::string> free = free_vars(f).first;
    std::vector<std::string> vars(free.begin(), free.end());
    out.push_back(from_report("inductive-" + std::to_string(i), "inductive formula is stable",
                              check_stability(ev, f, vars)));
  }
  if (is_subset(model)) {
    NameSupply names({"x"});
    auto c = from_report("not-N-unstable", "not N(x) is not stable",
                         check_stability(ev, Not(natural(Var("x"), names)), {"x"}));
    c.expected_failure = true;
    c.pass = false_at_faithful_world(*c.report);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<CheckResult> run_induction_positive(const FiniteModel& m, std::uint64_t seed) {
  Evaluator ev(m);
  std::vector<CheckResult> out;
  auto corpus = inductive_corpus(seed, 24);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out.push_back(from_report("induction-" + std::to_string(i), "induction for " + render(corpus[i]),
                              check_valid(ev, induction_instance(corpus[i], "x"))));
  }
  return out;
}

std::vector<CheckResult> run_induction_counterexample(const FiniteModel& m) {
  Evaluator ev(m);
  FormulaPtr phi = ForallFirst("z", Eq(Var("z"), Var("x")));
  FormulaPtr inst = induction_instance(phi, "x");
  const std::size_t root = 0;
  Verdict whole = ev.eval(root, inst);
  Verdict ante = ev.eval(root, inst->lhs);
  Verdict cons = ev.eval(root, inst->rhs);
  SuiteReport cons_rep = check_valid(ev, inst->rhs);

  CheckResult c = from_report("induction-counterexample", "induction fails for phi(x) = forall z (z = x)",
                              check_valid(ev, inst));
  c.expected_failure = true;
  std::string at = " at world " + to_decimal(m.world_ids[root]);
  c.notes.push_back("instance " + verdict_text(whole) + at);
  c.notes.push_back("antecedent " + verdict_text(ante) + at);
  c.notes.push_back("consequent " + verdict_text(cons) + at);
  std::optional<BigNat> counter;
  if (!cons_rep.per_world.empty() && cons_rep.per_world[root].witness) counter = cons_rep.per_world[root].witness->world;
  if (counter) {
    std::size_t s = m.index_of(*counter);
    c.notes.push_back("counterexample world " + to_decimal(*counter) + " with domain " + join_elements(m.dom[s]));
  }
  c.pass = whole.faithful && whole.value == Truth::kFalse && ante.value == Truth::kTrue && ante.faithful &&
           cons.value == Truth::kFalse && cons.faithful && counter.has_value();
  return {c};
}

std::vector<CheckResult> run_translation_soundness(const FiniteModel& m, std::uint64_t seed) {
  Evaluator ev(m);
  std::vector<CheckResult> out;
  auto corpus = bounded_sentence_corpus(seed, 60);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    Verdict truth = eval_arith(corpus[i]);
    TranslationOutput tr = fregean(unnest(corpus[i]));
    CheckResult c = from_report("sentence-" + std::to_string(i), render(corpus[i]), check_valid(ev, tr.formula));
    c.notes.push_back("arithmetic value " + to_string(truth.value));
    if (truth.value == Truth::kTrue) {
      c.pass = c.report->pass;
    } else if (truth.value == Truth::kFalse) {
      c.pass = false_at_faithful_world(*c.report);
    } else {
      c.pass = false;
      c.notes.push_back("the oracle did not decide the sentence");
    }
    out.push_back(std::move(c));
  }
  return out;
}

bool has_collision(const ScanReport& r, std::vector<std::uint64_t> a, std::vector<std::uint64_t> b, int code) {
  for (const auto& col : r.collisions) {
    bool match = (col.first == a && col.second == b) || (col.first == b && col.second == a);
    if (match && col.code == code) return true;
  }
  return false;
}

std::string collision_text(const Collision& c) {
  auto tuple = [](const std::vector<std::uint64_t>& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s + ")";
  };
  return tuple(c.first) + " and " + tuple(c.second) + " both code to " + to_decimal(c.code);
}

CheckResult round_trip(const std::string& label, const FiniteModel& m) {
  CheckResult c;
  c.name = "round-trip " + label;
  c.statement = "decode(encode(m)) = m";
  CodedModel coded = encode_model(m);
  FiniteModel back = decode_model(coded);
  c.pass = to_json(back) == to_json(m) && encode_model(back) == coded;
  c.notes.push_back(std::to_string(m.size()) + " worlds");
  return c;
}

std::vector<CheckResult> run_codec(const FiniteModel& m, const std::string& model, std::uint64_t horizon) {
  std::vector<CheckResult> out;
  const std::uint64_t bound = 16;

  ScanReport literal = injectivity_scan(Codec::kLiteralPair, bound);
  CheckResult lit;
  lit.name = "literal-pair";
  lit.statement = "the literal pair code 2^x + 3^y is not injective";
  lit.expected_failure = true;
  lit.pass = !literal.injective() && has_collision(literal, {1, 2}, {3, 1}, 11);
  lit.notes.push_back(std::to_string(literal.collisions.size()) + " collisions among pairs below " +
                      std::to_string(bound));
  for (std::size_t i = 0; i < literal.collisions.size() && i < 4; ++i) lit.notes.push_back(collision_text(literal.collisions[i]));
  out.push_back(std::move(lit));

  for (Codec codec : {Codec::kProductPair, Codec::kProductSeq}) {
    ScanReport r = injectivity_scan(codec, bound);
    CheckResult c;
    c.name = to_string(codec);
    c.statement = "the code is injective below the bound";
    c.pass = r.injective();
    c.notes.push_back(std::to_string(r.checked) + " values checked");
    if (!r.injective()) c.notes.push_back(collision_text(r.collisions.front()));
    out.push_back(std::move(c));
  }

  ScanReport seq = injectivity_scan(Codec::kLiteralSeq, bound);
  CheckResult ls;
  ls.name = to_string(Codec::kLiteralSeq);
  ls.statement = "the literal sequence code, reported for comparison";
  ls.pass = true;
  ls.notes.push_back(seq.injective() ? std::string("no collision found")
                                     : collision_text(seq.collisions.front()));
  out.push_back(std::move(ls));

  out.push_back(round_trip(model + " horizon " + std::to_string(horizon), m));
  if (!is_custom(model)) {
    for (std::string fam : {"minimal", "subset", "swap:3,0"}) {
      std::uint64_t h = fam == "subset" ? 3 : 5;
      out.push_back(round_trip(fam + " horizon " + std::to_string(h), truncate(family_by_name(fam), {h, h * h + 1, {}})));
    }
  }
  return out;
}

std::vector<CheckResult> run_equivalence(const FiniteModel& m) {
  EvalOptions opts;
  opts.fast_paths = false;
  Evaluator ev(m, opts);
  NameSupply names({"x", "y"});
  FormulaPtr f = Iff(successor(Var("x"), Var("y"), names), successor_alt(Var("x"), Var("y"), names));
  CheckOptions copts;
  copts.eval = opts;
  copts.free_first = {"x", "y"};
  return {from_report("S-Sprime", "the two successor definitions agree on existing elements", check_valid(ev, f, copts))};
}

std::vector<CheckResult> run_arithmetize_agreement(const FiniteModel& m) {
  CodedModel coded = encode_model(m);
  CodedEvaluator ce(coded);
  Evaluator ev(m);
  std::vector<CheckResult> out;
  for (const auto& [name, f] : axiom_suite()) {
    CPtr cf = arithmetize(f);
    SuiteReport rep;
    rep.formula = render(cf);
    rep.pass = true;
    for (std::size_t w = 0; w < m.size(); ++w) {
      bool direct = ev.holds(w, f);
      bool via = ce.holds(cf, w);
      WorldVerdict wv;
      wv.world = m.world_ids[w];
      wv.faithful = true;
      wv.value = direct == via ? Truth::kTrue : Truth::kFalse;
      if (direct != via) {
        wv.witness = Witness{std::nullopt, {}, std::string("direct ") + (direct ? "true" : "false") + ", coded " +
                                                   (via ? "true" : "false")};
        rep.pass = false;
      }
      rep.per_world.push_back(std::move(wv));
    }
    out.push_back(from_report(name, "coded evaluation of the arithmetization agrees with direct evaluation",
                              std::move(rep)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpora.

class Picker {
 public:
  explicit Picker(std::uint64_t seed) : rng_(seed) {}
  std::size_t operator()(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  std::mt19937_64 rng_;
};

class InductiveGen {
 public:
  InductiveGen(std::uint64_t seed, NameSupply& names) : pick_(seed), names_(names) {}

  FormulaPtr formula(int depth, std::vector<std::string>& scope) {
    if (depth == 0 || pick_(3) == 0) return atom(scope);
    switch (pick_(6)) {
      case 0:
        return Not(formula(depth - 1, scope));
      case 1:
        return And(formula(depth - 1, scope), formula(depth - 1, scope));
      case 2:
        return Or(formula(depth - 1, scope), formula(depth - 1, scope));
      case 3:
        return Implies(formula(depth - 1, scope), formula(depth - 1, scope));
      default: {
        if (scope.size() >= kBound.size()) return atom(scope);
        bool all = pick_(2) == 0;
        std::string v = kBound[scope.size() - 1];
        scope.push_back(v);
        FormulaPtr body = formula(depth - 1, scope);
        scope.pop_back();
        return all ? all_n(v, body, names_) : ex_n(v, body, names_);
      }
    }
  }

 private:
  static inline const std::vector<std::string> kBound = {"y", "z", "u"};

  TermPtr term(const std::vector<std::string>& scope) {
    std::size_t k = pick_(scope.size() + 1);
    return k == 0 ? Zero() : Var(scope[k - 1]);
  }

  FormulaPtr atom(const std::vector<std::string>& scope) {
    switch (pick_(4)) {
      case 0:
        return Eq(term(scope), term(scope));
      case 1:
        return successor(term(scope), term(scope), names_);
      case 2:
        return plus(term(scope), term(scope), term(scope), names_);
      default:
        return times(term(scope), term(scope), term(scope), names_);
    }
  }

  Picker pick_;
  NameSupply& names_;
};

class SentenceGen {
 public:
  explicit SentenceGen(std::uint64_t seed) : pick_(seed) {}

  ArithPtr formula(int depth, std::vector<std::string>& scope) {
    if (depth == 0 || (!scope.empty() && pick_(3) == 0)) return atom(scope);
    std::size_t choice = scope.empty() ? 4 + pick_(2) : pick_(6);
    switch (choice) {
      case 0:
        return ANot(formula(depth - 1, scope));
      case 1:
        return AAnd(formula(depth - 1, scope), formula(depth - 1, scope));
      case 2:
        return AOr(formula(depth - 1, scope), formula(depth - 1, scope));
      case 3:
        return AImplies(formula(depth - 1, scope), formula(depth - 1, scope));
      default: {
        if (scope.size() >= kBound.size()) return atom(scope);
        std::string v = kBound[scope.size()];
        std::uint64_t bound = pick_(4);
        scope.push_back(v);
        ArithPtr body = formula(depth - 1, scope);
        scope.pop_back();
        return choice == 4 ? AAllLe(v, bound, body) : AExLe(v, bound, body);
      }
    }
  }

 private:
  static inline const std::vector<std::string> kBound = {"a", "b", "c"};

  ArithArg arg(const std::vector<std::string>& scope) {
    if (scope.empty() || pick_(4) == 0) return ANum(pick_(4));
    return AVar(scope[pick_(scope.size())]);
  }

  ArithPtr atom(const std::vector<std::string>& scope) {
    switch (pick_(5)) {
      case 0:
        return AEq(arg(scope), arg(scope));
      case 1:
        return AZero(arg(scope));
      case 2:
        return AS(arg(scope), arg(scope));
      case 3:
        return APlus(arg(scope), arg(scope), arg(scope));
      default:
        return ATimes(arg(scope), arg(scope), arg(scope));
    }
  }

  Picker pick_;
};

}  // namespace

const std::vector<std::string>& suite_names() { return kSuites; }

std::string commit_id() { return PIMODEL_COMMIT; }

std::uint64_t default_horizon(const std::string& suite, const std::string& model) {
  if (is_custom(model)) return 0;
  bool subset = is_subset(model);
  if (suite == "induction-counterexample") return subset ? 3 : 4;
  if (suite == "equivalence-S-Sprime") return subset ? 3 : 5;
  if (suite == "arithmetize-agreement") return subset ? 2 : 3;
  return subset ? 4 : 6;
}

FiniteModel build_model(const SuiteSpec& spec) {
  if (is_custom(spec.model)) return finite_model_from_json(read_file(spec.model.substr(7)));
  ModelFamily fam = family_by_name(spec.model);
  std::uint64_t h = spec.horizon.value_or(default_horizon(spec.suite, spec.model));
  auto [chain_max, subset_max] = horizon_guard(spec.suite);
  std::uint64_t limit = fam.is_chain() ? chain_max : subset_max;
  if (h > limit) {
    throw Error("cost guard: horizon " + std::to_string(h) + " exceeds the limit " + std::to_string(limit) +
                " for suite " + spec.suite + " on the " + spec.model + " family");
  }
  bool closed = spec.suite == "arithmetize-agreement";
  bool bare = closed || spec.suite == "equivalence-S-Sprime";
  std::uint64_t ext = spec.extension.value_or(bare ? 0 : h * h + 1);
  FiniteModel m = truncate(fam, {h, ext, {}});
  if (closed) m.open = false;
  return m;
}

RunReport run_suite(const SuiteSpec& spec) {
  RunReport rep;
  rep.suite = spec.suite;
  rep.model = spec.model;
  rep.seed = spec.seed;
  rep.commit = commit_id();
  try {
    if (std::find(kSuites.begin(), kSuites.end(), spec.suite) == kSuites.end()) {
      throw Error("unknown suite '" + spec.suite + "'");
    }
    if (!is_custom(spec.model)) rep.horizon = spec.horizon.value_or(default_horizon(spec.suite, spec.model));
    if (spec.suite == "hume") {
      rep.max_domain = spec.max_domain.value_or(4);
      if (*rep.max_domain == 0 || *rep.max_domain > 4) {
        throw Error("cost guard: the hume suite enumerates 2^(d*d) relations; max_domain " +
                    std::to_string(*rep.max_domain) + " is outside 1..4");
      }
    }
    FiniteModel m = build_model(spec);
    const std::string& s = spec.suite;
    if (s == "q-axioms") {
      rep.checks = run_q_axioms(m);
    } else if (s == "hume") {
      rep.checks = run_hume(m, *rep.max_domain);
    } else if (s == "lemmas-2x") {
      rep.checks = run_lemmas(m, spec.model);
    } else if (s == "stability") {
      rep.checks = run_stability(m, spec.model, spec.seed);
    } else if (s == "induction-positive") {
      rep.checks = run_induction_positive(m, spec.seed);
    } else if (s == "induction-counterexample") {
      rep.checks = run_induction_counterexample(m);
    } else if (s == "translation-soundness") {
      rep.checks = run_translation_soundness(m, spec.seed);
    } else if (s == "codec") {
      rep.checks = run_codec(m, spec.model, rep.horizon.value_or(0));
    } else if (s == "equivalence-S-Sprime") {
      rep.checks = run_equivalence(m);
    } else {
      rep.checks = run_arithmetize_agreement(m);
    }
  } catch (const Error& e) {
    rep.checks.clear();
    rep.pass = false;
    rep.exit_code = 2;
    rep.error = e.what();
    return rep;
  }
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckResult& c) { return c.pass; });
  rep.exit_code = rep.pass ? 0 : 1;
  return rep;
}

std::string describe(const std::string& suite) {
  if (suite == "q-axioms") {
    return "q-axioms: the thirteen modalized Robinson axioms S1, S2, A1, A2, M1, M2, Z1, Q1-Q6.\n"
           "Each must be true at every faithful world of the truncation.\n";
  }
  if (suite == "hume") {
    return "hume: #X = #Y holds exactly when some binary relation is a bijection from X onto Y.\n"
           "Checked at every world with at most max-domain elements, over all X, Y and all relations.\n";
  }
  if (suite == "lemmas-2x") {
    return "lemmas-2x: the basic facts about the number predicate N.\n"
           "  N-after-zero        if 0 exists, every successor of 0 is a number\n"
           "  N-closed            numbers are closed under successor\n"
           "  N-exists            a number at a world exists at that world\n"
           "  N-characterization  N at w is {a(0), ..., a(n-1)} for the least n with a(n) outside D(w)\n"
           "  N-subset-points     subset family only: N at {2,100}, {0,1,3}, {0,1,2,3,100}\n"
           "  S-stable, S+-stable, S+=-stable, N-stable\n"
           "                      successor, its strong and weak ancestral and N persist along accessibility\n"
           "  card-eventually-N   for every set X some accessible world has #X in N\n";
  }
  if (suite == "stability") {
    return "stability: every formula of a seeded corpus of inductive formulas satisfies phi -> []phi.\n"
           "On the subset family, not N(x) must be shown unstable.\n";
  }
  if (suite == "induction-positive") {
    return "induction-positive: the modalized induction schema\n"
           "  [phi(0) & []forall x,y in N (phi(x) & S(x,y) -> phi(y))] -> []forall x in N phi(x)\n"
           "for a seeded corpus of 24 inductive formulas phi(x).\n";
  }
  if (suite == "induction-counterexample") {
    return "induction-counterexample: the induction schema for phi(x) = forall z (z = x) fails at world 0 of\n"
           "the minimal model. The antecedent is true there, the consequent false, and world 1 with domain {0,1}\n"
           "is the counterexample. Succeeds when the failure is reproduced.\n";
  }
  if (suite == "translation-soundness") {
    return "translation-soundness: 60 seeded arithmetic sentences with bounded quantifiers are decided by the\n"
           "arithmetic oracle. True sentences must have Fregean translations true at every faithful world;\n"
           "false ones must be false at some faithful world.\n";
  }
  if (suite == "codec") {
    return "codec: the literal pair code 2^x + 3^y must collide ((1,2) and (3,1) both give 11); the product\n"
           "pair and sequence codes must be injective; coded models must decode to the original.\n";
  }
  if (suite == "equivalence-S-Sprime") {
    return "equivalence-S-Sprime: the two definitions of successor agree at every world for every pair of\n"
           "existing elements, evaluated without shortcuts.\n";
  }
  if (suite == "arithmetize-agreement") {
    return "arithmetize-agreement: each q-axiom, arithmetized and evaluated over the coded model, agrees with\n"
           "direct evaluation at every world of a closed truncation.\n";
  }
  throw Error("unknown suite '" + suite + "'");
}

std::string to_json(const RunReport& r) {
  Json j;
  Json meta;
  meta["suite"] = r.suite;
  meta["model"] = r.model;
  meta["horizon"] = r.horizon ? Json(*r.horizon) : Json(nullptr);
  if (r.max_domain) meta["max_domain"] = *r.max_domain;
  meta["commit"] = r.commit;
  meta["seed"] = r.seed;
  j["metadata"] = meta;
  j["checks"] = Json::array();
  for (const auto& c : r.checks) {
    Json e;
    e["name"] = c.name;
    if (!c.statement.empty()) e["statement"] = c.statement;
    e["expected_failure"] = c.expected_failure;
    e["pass"] = c.pass;
    if (!c.notes.empty()) e["notes"] = c.notes;
    if (c.report) e["report"] = Json::parse(to_json(*c.report));
    j["checks"].push_back(std::move(e));
  }
  j["pass"] = r.pass;
  j["exit_code"] = r.exit_code;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump(2);
}

std::string to_text(const RunReport& r) {
  std::ostringstream out;
  out << "suite " << r.suite << " on " << r.model;
  if (r.horizon) out << " horizon " << *r.horizon;
  out << "\n";
  if (!r.error.empty()) out << "error: " << r.error << "\n";
  std::size_t passed = 0;
  for (const auto& c : r.checks) {
    passed += c.pass;
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (c.expected_failure) out << " (expected failure)";
    if (c.report) {
      std::size_t faithful = 0;
      for (const auto& w : c.report->per_world) faithful += w.faithful;
      out << "  [" << faithful << "/" << c.report->per_world.size() << " worlds faithful]";
    }
    out << "\n";
    for (const auto& n : c.notes) out << "    " << n << "\n";
    if (!c.pass && c.report) {
      for (const auto& w : c.report->per_world) {
        if (!w.faithful || w.value == Truth::kTrue) continue;
        out << "    world " << to_decimal(w.world) << ": " << to_string(w.value);
        if (w.witness) {
          if (w.witness->world) out << " via world " << to_decimal(*w.witness->world);
          for (const auto& [k, v] : w.witness->env) out << " " << k << "=" << v;
          if (!w.witness->note.empty()) out << " (" << w.witness->note << ")";
        }
        out << "\n";
      }
    }
  }
  out << passed << "/" << r.checks.size() << " checks pass, exit " << r.exit_code << "\n";
  return out.str();
}

std::vector<FormulaPtr> inductive_corpus(std::uint64_t seed, std::size_t count) {
  NameSupply names({"x", "y", "z", "u"});
  InductiveGen gen(seed, names);
  std::vector<FormulaPtr> out;
  std::set<std::string> seen;
  for (int attempt = 0; out.size() < count && attempt < 100000; ++attempt) {
    std::vector<std::string> scope = {"x"};
    FormulaPtr f = gen.formula(3, scope);
    if (!free_vars(f).first.count("x")) continue;
    if (seen.insert(render(f)).second) out.push_back(f);
  }
  return out;
}

std::vector<ArithPtr> bounded_sentence_corpus(std::uint64_t seed, std::size_t count) {
  SentenceGen gen(seed);
  std::vector<ArithPtr> out;
  std::set<std::string> seen;
  for (int attempt = 0; out.size() < count && attempt < 100000; ++attempt) {
    std::vector<std::string> scope;
    ArithPtr f = gen.formula(3, scope);
    if (seen.insert(render(f)).second) out.push_back(f);
  }
  return out;
}

FormulaPtr hume_principle() {
  auto X = SetVar("X");
  auto Y = SetVar("Y");
  auto P = SetVar("P", 2);
  auto x = Var("x");
  auto y = Var("y");
  auto z = Var("z");
  FormulaPtr graph = ForallFirst("x", ForallFirst("y", Implies(App(P, {x, y}), And(App(X, {x}), App(Y, {y})))));
  FormulaPtr total = ForallFirst(
      "x", Implies(App(X, {x}),
                   ExistsFirst("y", And(App(P, {x, y}), ForallFirst("z", Implies(App(P, {x, z}), Eq(z, y)))))));
  FormulaPtr onto = ForallFirst(
      "y", Implies(App(Y, {y}),
                   ExistsFirst("x", And(App(P, {x, y}), ForallFirst("z", Implies(App(P, {z, y}), Eq(z, x)))))));
  FormulaPtr bijection = ExistsSecond("P", 2, And(graph, And(total, onto)));
  return ForallSecond("X", 1, ForallSecond("Y", 1, Iff(Eq(Card(X), Card(Y)), bijection)));
}

}  // namespace pimodel
