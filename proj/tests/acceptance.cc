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

// Acceptance run: one PASS/FAIL line per criterion. All outcomes are exact
// booleans; the only numeric limit is the runtime budget below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pimodel/arithmetize.hpp"
#include "pimodel/classify.hpp"
#include "pimodel/codec.hpp"
#include "pimodel/oracle.hpp"
#include "pimodel/semantics.hpp"
#include "pimodel/shapes.hpp"
#include "pimodel/suite.hpp"
#include "pimodel/translate.hpp"

namespace pimodel {
namespace {

constexpr double kAxiomBudgetSeconds = 300.0;
constexpr std::size_t kMinInductiveFormulas = 20;
constexpr std::size_t kMinSentences = 50;
constexpr std::size_t kSampledGraphs = 400;
constexpr int kHorizonGrowth = 3;
constexpr std::uint64_t kGrownSubsetBase = 5;

const std::vector<std::string> kFamilies = {"minimal", "subset", "swap:3,0"};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

RunReport run(const std::string& suite, const std::string& model, std::optional<std::uint64_t> horizon = {}) {
  SuiteSpec spec;
  spec.suite = suite;
  spec.model = model;
  spec.horizon = horizon;
  return run_suite(spec);
}

std::string summary(const RunReport& r) {
  std::size_t ok = 0;
  for (const auto& c : r.checks) ok += c.pass;
  std::string s = r.suite + " on " + r.model + ": " + std::to_string(ok) + "/" + std::to_string(r.checks.size());
  if (!r.error.empty()) s += " (" + r.error + ")";
  return s;
}

bool has_note(const RunReport& r, const std::string& needle) {
  for (const auto& c : r.checks) {
    for (const auto& n : c.notes) {
      if (n.find(needle) != std::string::npos) return true;
    }
  }
  return false;
}

Outcome axioms() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  for (const auto& fam : kFamilies) {
    RunReport r = run("q-axioms", fam, fam == "subset" ? 4 : 6);
    o.require(r.exit_code == 0 && r.checks.size() == 13, summary(r));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs <= kAxiomBudgetSeconds, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "13 statements on 3 families in " + std::to_string(static_cast<int>(secs)) + " s";
  return o;
}

Outcome hume() {
  Outcome o;
  for (const auto& fam : kFamilies) {
    RunReport r = run("hume", fam);
    o.require(r.exit_code == 0, summary(r));
  }
  if (o.pass) o.detail = "worlds with at most 4 elements on 3 families";
  return o;
}

Outcome lemmas() {
  Outcome o;
  for (const auto& fam : kFamilies) {
    RunReport r = run("lemmas-2x", fam);
    o.require(r.exit_code == 0, summary(r));
  }
  // Subset-model data points, stated independently of the suite.
  std::vector<std::pair<ModelFamily::World, ElementSet>> points = {
      {{2, 100}, {}}, {{0, 1, 3}, {0, 1}}, {{0, 1, 2, 3, 100}, {0, 1, 2, 3}}};
  TruncationSpec spec;
  spec.worlds = std::vector<ModelFamily::World>{};
  for (const auto& p : points) spec.worlds->push_back(p.first);
  FiniteModel m = truncate(subset_family(), spec);
  for (const auto& [world, want] : points) {
    std::size_t w = m.index_of(subset_family().world_id(world));
    o.require(naturals_at(m, w) == want, "naturals at a subset data point");
  }
  if (o.pass) o.detail = "stability, characterization, data points and card-eventually-N on 3 families";
  return o;
}

Outcome induction() {
  Outcome o;
  RunReport pos = run("induction-positive", "minimal", 6);
  o.require(pos.exit_code == 0 && pos.checks.size() >= kMinInductiveFormulas, summary(pos));
  for (const auto& f : inductive_corpus(0, pos.checks.size())) o.require(is_inductive(f), "non-inductive corpus member");
  RunReport neg = run("induction-counterexample", "minimal");
  o.require(neg.exit_code == 0, summary(neg));
  o.require(has_note(neg, "antecedent true"), "antecedent not reported true");
  o.require(has_note(neg, "consequent false"), "consequent not reported false");
  o.require(has_note(neg, "counterexample world 1 with domain {0,1}"), "counterexample world not reported");
  if (o.pass) o.detail = std::to_string(pos.checks.size()) + " inductive instances; counterexample at world 1";
  return o;
}

// Independent truth oracle for closed bounded sentences.
bool truth(const ArithPtr& f, std::map<std::string, std::uint64_t>& env) {
  auto val = [&](const ArithArg& a) { return a.numeral ? a.value : env.at(a.name); };
  switch (f->kind) {
    case ArithKind::kEq: return val(f->args[0]) == val(f->args[1]);
    case ArithKind::kZero: return val(f->args[0]) == 0;
    case ArithKind::kS: return val(f->args[1]) == val(f->args[0]) + 1;
    case ArithKind::kPlus: return val(f->args[0]) + val(f->args[1]) == val(f->args[2]);
    case ArithKind::kTimes: return val(f->args[0]) * val(f->args[1]) == val(f->args[2]);
    case ArithKind::kNot: return !truth(f->lhs, env);
    case ArithKind::kAnd: return truth(f->lhs, env) && truth(f->rhs, env);
    case ArithKind::kOr: return truth(f->lhs, env) || truth(f->rhs, env);
    case ArithKind::kImplies: return !truth(f->lhs, env) || truth(f->rhs, env);
    case ArithKind::kIff: return truth(f->lhs, env) == truth(f->rhs, env);
    case ArithKind::kAllLe:
    case ArithKind::kExLe: {
      bool all = f->kind == ArithKind::kAllLe;
      auto saved = env.find(f->var) == env.end() ? std::nullopt : std::optional<std::uint64_t>(env[f->var]);
      bool result = all;
      for (std::uint64_t n = 0; n <= f->bound && result == all; ++n) {
        env[f->var] = n;
        result = truth(f->lhs, env);
      }
      if (saved) env[f->var] = *saved; else env.erase(f->var);
      return result;
    }
    default: throw Error("sentence outside the bounded fragment");
  }
}

Outcome translation() {
  Outcome o;
  auto corpus = bounded_sentence_corpus(0, 60);
  o.require(corpus.size() >= kMinSentences, "corpus too small");
  std::vector<bool> values;
  std::size_t n_true = 0;
  for (const auto& s : corpus) {
    std::map<std::string, std::uint64_t> env;
    bool v = truth(s, env);
    values.push_back(v);
    n_true += v;
    Truth lib = eval_arith(s).value;
    o.require(lib == (v ? Truth::kTrue : Truth::kFalse), "library oracle disagrees on " + render(s));
  }
  for (const auto& fam : kFamilies) {
    SuiteSpec spec;
    spec.suite = "translation-soundness";
    spec.model = fam;
    FiniteModel m = build_model(spec);
    Evaluator ev(m);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      SuiteReport r = check_valid(ev, fregean(unnest(corpus[i])).formula);
      bool ok = false;
      if (values[i]) {
        ok = r.pass;
      } else {
        for (const auto& w : r.per_world) ok = ok || (w.faithful && w.value == Truth::kFalse);
      }
      o.require(ok, fam + ": " + render(corpus[i]));
    }
  }
  if (o.pass) {
    o.detail = std::to_string(corpus.size()) + " sentences (" + std::to_string(n_true) + " true) on 3 families";
  }
  return o;
}

Outcome equivalence() {
  Outcome o;
  RunReport r = run("equivalence-S-Sprime", "minimal", 5);
  o.require(r.exit_code == 0, summary(r));
  TruncationSpec spec{5, 0, {}};
  FiniteModel m = truncate(minimal_family(), spec);
  EvalOptions slow;
  slow.fast_paths = false;
  Evaluator ev(m, slow);
  NameSupply ns({"x", "y"});
  FormulaPtr s = successor(Var("x"), Var("y"), ns);
  FormulaPtr alt = successor_alt(Var("x"), Var("y"), ns);
  std::size_t compared = 0;
  for (std::size_t w = 0; w < m.truncated; ++w) {
    for (Element x : m.dom[w]) {
      for (Element y : m.dom[w]) {
        Env env{{{"x", x}, {"y", y}}, {}};
        Verdict a = ev.eval(w, s, env);
        Verdict b = ev.eval(w, alt, env);
        if (!a.faithful || !b.faithful) continue;
        ++compared;
        o.require(a.value == b.value, "forms disagree at world " + std::to_string(w));
        o.require(a.value == (y == x + 1 ? Truth::kTrue : Truth::kFalse), "successor wrong at world " + std::to_string(w));
      }
    }
  }
  o.require(compared > 0, "no faithful pair compared");
  if (o.pass) o.detail = std::to_string(compared) + " faithful world/pair cases on minimal 0..5";
  return o;
}

using Graph = std::vector<std::pair<Element, Element>>;

// Every subset X of the domain closed under the relation that contains the
// seed elements also contains the target.
bool closure_brute(const ElementSet& dom, const Graph& g, Element a, Element b, bool weak) {
  std::size_t n = dom.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    auto in = [&](Element e) {
      for (std::size_t i = 0; i < n; ++i) {
        if (dom[i] == e) return ((mask >> i) & 1) != 0;
      }
      return false;
    };
    bool seeded = true;
    if (weak) {
      seeded = in(a);
    } else {
      for (const auto& [p, q] : g) seeded = seeded && (p != a || in(q));
    }
    bool closed = true;
    for (const auto& [p, q] : g) closed = closed && (!in(p) || in(q));
    if (seeded && closed && !in(b)) return false;
  }
  return true;
}

Graph graph_from_mask(const ElementSet& dom, std::uint64_t mask) {
  Graph g;
  std::size_t n = dom.size();
  for (std::size_t i = 0; i < n * n; ++i) {
    if ((mask >> i) & 1) g.emplace_back(dom[i / n], dom[i % n]);
  }
  return g;
}

Outcome ancestral() {
  Outcome o;
  FiniteModel m3 = truncate(minimal_family(), {2, 0, {}});
  m3.open = false;
  const ElementSet& d3 = m3.dom[2];
  NameSupply ns({"a", "b", "R"});
  RelationBuilder rel = [](TermPtr s, TermPtr t, NameSupply&) { return App(SetVar("R", 2), {s, t}); };
  FormulaPtr strong = strong_ancestral(rel, Var("a"), Var("b"), ns);
  FormulaPtr weak = weak_ancestral(rel, Var("a"), Var("b"), ns);
  EvalOptions slow;
  slow.fast_paths = false;
  std::size_t cases = 0;
  for (std::uint64_t mask = 0; mask < (1u << 9); ++mask) {
    Graph g = graph_from_mask(d3, mask);
    std::vector<Tuple> tuples;
    for (const auto& [p, q] : g) tuples.push_back({p, q});
    Evaluator fast(m3);
    Evaluator plain(m3, slow);
    for (Element a : d3) {
      for (Element b : d3) {
        for (bool w : {false, true}) {
          bool want = closure_brute(d3, g, a, b, w);
          ++cases;
          o.require(ancestral_fast(m3, 2, g, a, b, w) == want, "fast closure differs on graph " + std::to_string(mask));
          Env env{{{"a", a}, {"b", b}}, {{"R", tuples}}};
          const FormulaPtr& f = w ? weak : strong;
          o.require(fast.holds(2, f, env) == want, "evaluator differs on graph " + std::to_string(mask));
          o.require(plain.holds(2, f, env) == want, "plain evaluator differs on graph " + std::to_string(mask));
        }
      }
    }
  }
  FiniteModel m4 = truncate(minimal_family(), {3, 0, {}});
  const ElementSet& d4 = m4.dom[3];
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << 16) - 1);
  for (std::size_t k = 0; k < kSampledGraphs; ++k) {
    Graph g = graph_from_mask(d4, pick(rng));
    for (Element a : d4) {
      for (Element b : d4) {
        for (bool w : {false, true}) {
          ++cases;
          o.require(ancestral_fast(m4, 3, g, a, b, w) == closure_brute(d4, g, a, b, w), "size-4 sample differs");
        }
      }
    }
  }
  if (o.pass) o.detail = "512 graphs x 9 pairs exhaustive, " + std::to_string(kSampledGraphs) + " sampled size-4 graphs, " +
                         std::to_string(cases) + " cases";
  return o;
}

Outcome codec() {
  Outcome o;
  std::vector<std::pair<std::string, FiniteModel>> models = {
      {"minimal", truncate(minimal_family(), {5, 0, {}})},
      {"minimal+ext", truncate(minimal_family(), {3, 10, {}})},
      {"subset", truncate(subset_family(), {3, 0, {}})},
      {"swap", truncate(swap_family(3, 0), {5, 0, {}})}};
  for (const auto& [name, m] : models) {
    CodedModel c = encode_model(m);
    o.require(to_json(decode_model(c)) == to_json(m), name + " does not round-trip");
    o.require(to_json(coded_model_from_json(to_json(c))) == to_json(c), name + " coded form does not round-trip");
  }
  for (std::uint64_t x = 0; x < 12; ++x) {
    for (std::uint64_t y = 0; y < 12; ++y) {
      o.require(decode_pair(encode_pair(x, y)) == std::make_pair(x, y), "product pair decode");
    }
  }
  // 2^1 + 3^2 == 2^3 + 3^1 == 11.
  o.require(literal_pair_code(1, 2) == 11 && literal_pair_code(3, 1) == 11, "literal pair collision at 11");
  ScanReport lit = injectivity_scan(Codec::kLiteralPair, 16);
  bool found = false;
  for (const auto& c : lit.collisions) {
    std::set<std::vector<std::uint64_t>> pair = {c.first, c.second};
    found = found || (c.code == 11 && pair == std::set<std::vector<std::uint64_t>>{{1, 2}, {3, 1}});
  }
  o.require(found, "scan misses the collision at 11");
  o.require(injectivity_scan(Codec::kProductPair, 16).injective(), "product pair not injective");
  RunReport r = run("arithmetize-agreement", "minimal", 3);
  o.require(r.exit_code == 0, summary(r));
  if (o.pass) o.detail = "round trips on 4 models, collision (1,2)/(3,1) at 11, coded agreement on minimal 0..3";
  return o;
}

struct Run {
  std::string suite;
  std::string model;
};

std::map<std::string, Truth> verdicts(const RunReport& r) {
  std::map<std::string, Truth> out;
  for (const auto& c : r.checks) {
    if (!c.report) continue;
    for (const auto& w : c.report->per_world) {
      if (w.faithful && w.value != Truth::kUnknown) out[c.name + "@" + to_decimal(w.world)] = w.value;
    }
  }
  return out;
}

Outcome horizon_stability() {
  Outcome o;
  std::vector<Run> runs;
  for (const auto& fam : kFamilies) {
    for (const char* s : {"q-axioms", "hume", "lemmas-2x", "induction-positive", "translation-soundness"}) {
      runs.push_back({s, fam});
    }
  }
  runs.push_back({"induction-counterexample", "minimal"});
  runs.push_back({"equivalence-S-Sprime", "minimal"});
  std::size_t compared = 0;
  std::size_t flips = 0;
  for (const auto& [suite, fam] : runs) {
    std::uint64_t h = suite == "equivalence-S-Sprime" ? 5 : default_horizon(suite, fam);
    RunReport base = run(suite, fam, h);
    RunReport grown = run(suite, fam, fam == "subset" ? kGrownSubsetBase : h + kHorizonGrowth);
    if (!base.error.empty() || !grown.error.empty()) {
      o.require(false, summary(base) + " / " + summary(grown));
      continue;
    }
    auto before = verdicts(base);
    auto after = verdicts(grown);
    for (const auto& [key, value] : before) {
      auto it = after.find(key);
      if (it == after.end()) continue;
      ++compared;
      if (it->second != value) {
        ++flips;
        o.require(false, suite + " " + fam + " " + key + " flips");
      }
    }
  }
  o.require(compared > 0, "nothing compared");
  if (o.pass) {
    o.detail = std::to_string(compared) + " faithful verdicts compared across " + std::to_string(runs.size()) +
               " runs, " + std::to_string(flips) + " flips";
  }
  return o;
}

}  // namespace
}  // namespace pimodel

int main() {
  using pimodel::Outcome;
  struct Criterion {
    const char* label;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {"modal Q axioms", pimodel::axioms},
      {"Hume's principle", pimodel::hume},
      {"natural-number lemmas", pimodel::lemmas},
      {"induction", pimodel::induction},
      {"translation soundness", pimodel::translation},
      {"S/S' equivalence", pimodel::equivalence},
      {"ancestral oracle", pimodel::ancestral},
      {"codec", pimodel::codec},
      {"horizon stability", pimodel::horizon_stability},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].label, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
