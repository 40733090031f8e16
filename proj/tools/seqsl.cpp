#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "seqsl/analysis.hpp"
#include "seqsl/decider.hpp"
#include "seqsl/errors.hpp"
#include "seqsl/minsky.hpp"
#include "seqsl/model.hpp"
#include "seqsl/parser.hpp"
#include "seqsl/semantics.hpp"
#include "seqsl/wordeq.hpp"

using nlohmann::json;
using namespace seqsl;

namespace {

enum Exit { kTrue = 0, kFalse = 1, kUnknown = 2, kUsage = 3 };

struct Flags {
  std::size_t max_len = 16;
  std::size_t max_nodes = 2'000'000;
  std::size_t seq_bound = 4;
  std::size_t max_steps = 1000;
  std::string witness;
  bool trace = false;
  bool json = false;
};

// An argument names a file when one exists at that path; otherwise it is the text itself.
std::string text_arg(const std::string& arg) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(arg, ec)) return arg;
  std::ifstream in(arg);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model model_arg(const std::string& arg) {
  std::string text = text_arg(arg);
  if (text.find('{') == std::string::npos) throw ModelError("cannot open model " + arg);
  return parse_model(text);
}

DecideConfig decide_config(const Flags& f) {
  DecideConfig cfg;
  cfg.max_nodes = f.max_nodes;
  cfg.solve.max_len = f.max_len;
  return cfg;
}

json substitution_json(const Substitution& s) {
  json out = json::object();
  for (const auto& [k, w] : s) {
    json a = json::array();
    for (Value v : w) a.push_back(v.is_nat() ? json(v.nat_value()) : json(v.str()));
    out["@" + k] = a;
  }
  return out;
}

void emit(const Flags& f, const json& report, const std::string& text) {
  if (f.json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << text;
}

int cmd_check(const std::string& model_path, const std::string& formula_arg, const Flags& f) {
  Model m = model_arg(model_path);
  Formula phi = parse_formula(text_arg(formula_arg));
  CheckConfig cfg;
  cfg.seq_len_bound = f.seq_bound;
  cfg.trace = f.trace;
  Verdict3 v = check(m, phi, cfg);
  std::string name = v.truth == Truth::True ? "True" : v.truth == Truth::False ? "False" : "Unknown";
  std::string text = name + "\n";
  if (!v.reason.empty()) text += "reason: " + v.reason + "\n";
  for (const auto& line : v.trace) text += line + "\n";
  emit(f, {{"verdict", truth_name(v.truth)}, {"reason", v.reason}, {"trace", v.trace}}, text);
  return v.truth == Truth::True ? kTrue : v.truth == Truth::False ? kFalse : kUnknown;
}

int cmd_sat(const std::string& formula_arg, const Flags& f) {
  Formula phi = parse_formula(text_arg(formula_arg));
  SatVerdict v = decide_sat(phi, decide_config(f));
  std::string text = sat_status_name(v.status) + "\n";
  if (!v.reason.empty()) text += "reason: " + v.reason + "\n";
  json report = {{"verdict", sat_status_name(v.status)}, {"reason", v.reason}};
  if (v.status == SatStatus::Sat) {
    report["witness"] = json::parse(print_model(v.witness));
    if (!f.witness.empty()) save_model(v.witness, f.witness);
    else text += print_model(v.witness, 2) + "\n";
  }
  emit(f, report, text);
  return v.status == SatStatus::Sat ? kTrue : v.status == SatStatus::Unsat ? kFalse : kUnknown;
}

int cmd_valid(const std::string& formula_arg, const Flags& f) {
  Formula phi = parse_formula(text_arg(formula_arg));
  ValidityVerdict v = decide_pi1_validity(phi, decide_config(f));
  std::string text = validity_name(v.status) + "\n";
  if (!v.reason.empty()) text += "reason: " + v.reason + "\n";
  json report = {{"verdict", validity_name(v.status)}, {"reason", v.reason}};
  if (v.countermodel) {
    report["countermodel"] = json::parse(print_model(*v.countermodel));
    if (!f.witness.empty()) save_model(*v.countermodel, f.witness);
    else text += print_model(*v.countermodel, 2) + "\n";
  }
  emit(f, report, text);
  return v.status == Validity::Valid ? kTrue : v.status == Validity::Invalid ? kFalse : kUnknown;
}

int cmd_we_solve(const std::string& arg, const Flags& f) {
  WordFormula w = parse_word_formula(text_arg(arg));
  SolveConfig cfg;
  cfg.max_len = f.max_len;
  cfg.max_nodes = f.max_nodes;
  SolverVerdict v = solve(w, cfg);
  std::string text = status_name(v.status) + "\n";
  if (!v.reason.empty()) text += "reason: " + v.reason + "\n";
  if (v.status == WeStatus::Sat)
    for (const auto& [k, word] : v.witness) text += "@" + k + " = " + word_str(word) + "\n";
  json report = {{"verdict", status_name(v.status)}, {"reason", v.reason}};
  if (v.status == WeStatus::Sat) report["witness"] = substitution_json(v.witness);
  emit(f, report, text);
  return v.status == WeStatus::Sat ? kTrue : v.status == WeStatus::Unsat ? kFalse : kUnknown;
}

int cmd_we_transform(const std::string& arg, const std::vector<std::string>& alphabet, const Flags& f) {
  WordFormula w = parse_word_formula(text_arg(arg));
  Alphabet sigma;
  for (const auto& a : alphabet) sigma.push_back(parse_value(a));
  if (sigma.empty()) sigma = letters_of(w);
  if (sigma.size() < 2)
    throw std::invalid_argument("the transform needs at least two letters; pass --alphabet");
  SingleEquation e = to_single_equation(w, sigma);
  std::string eq = to_string(e);
  emit(f, {{"equation", eq}, {"lhs_size", e.lhs.size()}, {"rhs_size", e.rhs.size()}}, eq + "\n");
  return kTrue;
}

int cmd_minsky(const std::string& sub, const std::string& path, bool regrouped, const Flags& f) {
  minsky::Machine m = minsky::parse_machine(text_arg(path));
  minsky::EncodeOptions opt;
  opt.regrouped = regrouped;
  if (sub == "encode") {
    std::string phi = to_string(minsky::encode(m, opt));
    FragmentClass c = classify(minsky::encode(m, opt));
    emit(f, {{"formula", phi}, {"shape", shape_name(c.shape)}}, phi + "\n");
    if (!f.json) std::cerr << "shape: " << shape_name(c.shape) << "\n";
    return kTrue;
  }
  if (sub == "run") {
    minsky::Run run = minsky::simulate(m, f.max_steps);
    std::string text;
    json states = json::array();
    for (const auto& s : run.states) {
      text += minsky::to_string(s) + "\n";
      states.push_back({s.pointer, s.c1, s.c2});
    }
    text += run.halted ? "halted after " + std::to_string(run.steps()) + " steps\n"
                       : "no halt within " + std::to_string(f.max_steps) + " steps\n";
    emit(f, {{"halted", run.halted}, {"states", states}}, text);
    return run.halted ? kTrue : kUnknown;
  }
  minsky::Validation v = minsky::validate(m, f.max_steps, opt);
  std::string text = v.run.halted ? "run of " + std::to_string(v.run.steps()) + " steps\n" : "";
  text += "encoding on run model: " + truth_name(v.truth) + "\n";
  if (!v.reason.empty()) text += "reason: " + v.reason + "\n";
  emit(f, {{"halted", v.run.halted}, {"verdict", truth_name(v.truth)}, {"reason", v.reason}}, text);
  if (!v.run.halted) return kUnknown;
  return v.truth == Truth::True ? kTrue : v.truth == Truth::False ? kFalse : kUnknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence-heap separation logic toolkit"};
  app.require_subcommand(1);
  Flags f;
  auto bounds = [&](CLI::App* c) {
    c->add_option("--max-len", f.max_len, "Longest word the solver tries per variable");
    c->add_option("--max-nodes", f.max_nodes, "Search budget before answering unknown");
  };
  auto out = [&](CLI::App* c) { c->add_flag("--json", f.json, "Machine-readable report"); };

  std::string model_path, formula, machine;
  std::vector<std::string> alphabet;
  bool regrouped = false;

  auto* check = app.add_subcommand("check", "Evaluate a formula on a model");
  check->add_option("model", model_path, "Model JSON file")->required();
  check->add_option("formula", formula, "Formula file or text")->required();
  check->add_option("--seq-bound", f.seq_bound, "Longest sequence tried for unanchored sequence quantifiers");
  check->add_flag("--trace", f.trace, "Print the witnesses and heap splits found");
  out(check);

  auto* sat = app.add_subcommand("sat", "Decide satisfiability of a quantifier-free formula");
  sat->add_option("formula", formula, "Formula file or text")->required();
  sat->add_option("--witness", f.witness, "Write the witness model here");
  bounds(sat);
  out(sat);

  auto* valid = app.add_subcommand("valid", "Decide validity of a universally quantified formula");
  valid->add_option("formula", formula, "Formula file or text")->required();
  valid->add_option("--witness", f.witness, "Write the countermodel here");
  bounds(valid);
  out(valid);

  auto* we = app.add_subcommand("we", "Word equations");
  we->require_subcommand(1);
  auto* we_solve = we->add_subcommand("solve", "Solve a Boolean combination of word equations");
  we_solve->add_option("formula", formula, "Word formula file or text")->required();
  bounds(we_solve);
  out(we_solve);
  auto* we_transform = we->add_subcommand("transform", "Rewrite into a single word equation");
  we_transform->add_option("formula", formula, "Word formula file or text")->required();
  we_transform->add_option("--alphabet", alphabet, "Letters of the alphabet; defaults to those in the formula")
      ->delimiter(',');
  out(we_transform);

  auto* mk = app.add_subcommand("minsky", "Two-counter machines");
  mk->require_subcommand(1);
  std::string sub;
  for (const char* name : {"run", "encode", "validate"}) {
    auto* c = mk->add_subcommand(name, std::string(name) + " a machine");
    c->add_option("machine", machine, "Machine file or text")->required();
    c->add_option("--max-steps", f.max_steps, "Simulation cut-off");
    c->add_flag("--regrouped", regrouped, "Emit the two-conjunct grouping");
    out(c);
    c->callback([&sub, name] { sub = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*check) return cmd_check(model_path, formula, f);
    if (*sat) return cmd_sat(formula, f);
    if (*valid) return cmd_valid(formula, f);
    if (*we_solve) return cmd_we_solve(formula, f);
    if (*we_transform) return cmd_we_transform(formula, alphabet, f);
    if (*mk) return cmd_minsky(sub, machine, regrouped, f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
