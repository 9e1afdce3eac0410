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

// Command-line front end: suite runs, suite descriptions and translations.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "pimodel/arith.hpp"
#include "pimodel/arithmetize.hpp"
#include "pimodel/parse.hpp"
#include "pimodel/suite.hpp"
#include "pimodel/translate.hpp"

namespace {

using pimodel::Error;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

struct RunFlags {
  std::string config;
  std::optional<std::string> suite;
  std::optional<std::string> model;
  std::optional<std::uint64_t> horizon;
  std::optional<std::size_t> max_domain;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> extension;
  std::optional<std::string> report;
  bool text = false;
};

int run(RunFlags flags) {
  pimodel::SuiteSpec spec;
  if (!flags.config.empty()) {
    auto j = nlohmann::json::parse(slurp(flags.config));
    auto take = [&](const char* key, auto& slot) {
      if (j.contains(key) && !slot) slot = j.at(key).get<typename std::decay_t<decltype(slot)>::value_type>();
    };
    take("suite", flags.suite);
    take("model", flags.model);
    take("horizon", flags.horizon);
    take("max_domain", flags.max_domain);
    take("seed", flags.seed);
    take("extension", flags.extension);
    take("report", flags.report);
    if (j.contains("text")) flags.text = flags.text || j.at("text").get<bool>();
  }
  if (!flags.suite) throw Error("no suite given; use --suite or a config file");
  spec.suite = *flags.suite;
  if (flags.model) spec.model = *flags.model;
  spec.horizon = flags.horizon;
  spec.max_domain = flags.max_domain;
  spec.seed = flags.seed.value_or(0);
  spec.extension = flags.extension;

  pimodel::RunReport rep = pimodel::run_suite(spec);
  std::string json = pimodel::to_json(rep) + "\n";
  if (flags.report) {
    spit(*flags.report, json);
  } else if (!flags.text) {
    std::cout << json;
  }
  if (flags.text) std::cout << pimodel::to_text(rep);
  if (!rep.error.empty()) std::cerr << "pimodel: " << rep.error << "\n";
  return rep.exit_code;
}

int translate(const std::string& in_path, const std::string& pass, const std::string& out_path) {
  std::string input = slurp(in_path);
  nlohmann::ordered_json meta;
  meta["input"] = in_path;
  meta["pass"] = pass;
  std::string rendered;
  if (pass == "arithmetize") {
    pimodel::FormulaPtr f = pimodel::parse_formula(input);
    rendered = pimodel::render(pimodel::arithmetize(f));
    meta["free_var_map"] = nlohmann::ordered_json::object();
  } else {
    pimodel::ArithPtr a = pimodel::parse_arith(input);
    if (!pimodel::is_unnested(a)) a = pimodel::unnest(a);
    pimodel::TranslationOutput out = pimodel::fregean(a);
    rendered = pass == "both" ? pimodel::render(pimodel::arithmetize(out.formula)) : pimodel::render(out.formula);
    meta["free_var_map"] = out.free_var_map;
    meta["beyond_first_order"] = out.beyond_first_order;
  }
  meta["commit"] = pimodel::commit_id();
  if (out_path.empty()) {
    std::cout << rendered << "\n";
    return 0;
  }
  spit(out_path, rendered + "\n");
  spit(out_path + ".json", meta.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model checker for potentially infinite Kripke models"};
  app.require_subcommand(1);

  RunFlags flags;
  auto* run_cmd = app.add_subcommand("run", "run a verification suite");
  run_cmd->add_option("--suite", flags.suite, "suite name");
  run_cmd->add_option("--model", flags.model, "minimal | subset | swap:i,j | custom:<file.json>");
  run_cmd->add_option("--horizon", flags.horizon, "truncation horizon");
  run_cmd->add_option("--max-domain", flags.max_domain, "largest world domain (hume suite)");
  run_cmd->add_option("--seed", flags.seed, "seed for generated corpora");
  run_cmd->add_option("--extension", flags.extension, "size of the last extension world");
  run_cmd->add_option("--report", flags.report, "write the JSON report here");
  run_cmd->add_flag("--text", flags.text, "print a text summary");
  run_cmd->add_option("--config", flags.config, "JSON file with the same keys as the flags");

  std::string suite;
  auto* describe_cmd = app.add_subcommand("describe", "describe what a suite checks");
  describe_cmd->add_option("suite", suite, "suite name (all when omitted)");

  std::string in_path, pass = "fregean", out_path;
  auto* translate_cmd = app.add_subcommand("translate", "translate a formula");
  translate_cmd->add_option("--in", in_path, "input s-expression file")->required();
  translate_cmd->add_option("--pass", pass, "fregean | arithmetize | both")
      ->check(CLI::IsMember({"fregean", "arithmetize", "both"}));
  translate_cmd->add_option("--out", out_path, "output file; a .json sidecar is written next to it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return run(flags);
    if (*describe_cmd) {
      if (!suite.empty()) {
        std::cout << pimodel::describe(suite);
      } else {
        for (const auto& s : pimodel::suite_names()) std::cout << pimodel::describe(s) << "\n";
      }
      return 0;
    }
    return translate(in_path, pass, out_path);
  } catch (const std::exception& e) {
    std::cerr << "pimodel: " << e.what() << "\n";
    return 2;
  }
}
