// exact-asm: command-line front end over the C API.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "exact_asm/exact_asm.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kReported = 1, kUsage = 2 };

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProgramDeleter {
  void operator()(easm_program* p) const { easm_program_free(p); }
};
struct StatesDeleter {
  void operator()(easm_states* s) const { easm_states_free(s); }
};
struct SpecDeleter {
  void operator()(easm_spec* s) const { easm_spec_free(s); }
};
using ProgramPtr = std::unique_ptr<easm_program, ProgramDeleter>;
using StatesPtr = std::unique_ptr<easm_states, StatesDeleter>;
using SpecPtr = std::unique_ptr<easm_spec, SpecDeleter>;

void ok(easm_status status) {
  if (status != EASM_OK)
    throw CliError(std::string(easm_status_name(status)) + ": " + easm_last_error());
}

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out(s);
  easm_string_free(s);
  return out;
}

json take_json(char* s) { return json::parse(take(s)); }

struct Output {
  bool json_mode = false;
  bool quiet = false;
  bool color = false;

  void text(const std::string& s) const {
    if (!quiet) std::cout << s << '\n';
  }
  void doc(const json& d) const {
    if (!quiet) std::cout << d.dump(2) << '\n';
  }
  std::string verdict(bool passed) const {
    if (!color) return passed ? "PASS" : "FAIL";
    return passed ? "\x1b[32mPASS\x1b[0m" : "\x1b[31mFAIL\x1b[0m";
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string parent_dir(const std::string& path) {
  return fs::path(path).parent_path().string();
}

StatesPtr load_states(const std::string& path) {
  easm_states* s = nullptr;
  ok(easm_states_from_json(read_file(path).c_str(), parent_dir(path).c_str(), &s));
  return StatesPtr(s);
}

StatesPtr enumerate(const std::string& path) {
  easm_states* s = nullptr;
  ok(easm_states_enumerate(read_file(path).c_str(), parent_dir(path).c_str(), &s));
  return StatesPtr(s);
}

ProgramPtr load_program(const std::string& path, const easm_states* vocabulary) {
  easm_program* p = nullptr;
  ok(easm_program_parse(read_file(path).c_str(), vocabulary, &p));
  return ProgramPtr(p);
}

SpecPtr load_spec(const std::string& path) {
  easm_spec* s = nullptr;
  ok(easm_spec_from_json(read_file(path).c_str(), parent_dir(path).c_str(), &s));
  return SpecPtr(s);
}

std::string print(const easm_program* p) {
  char* out = nullptr;
  ok(easm_program_print(p, &out));
  return take(out);
}

std::string state_name(const easm_states* s, std::size_t i) {
  char* out = nullptr;
  ok(easm_states_name(s, i, &out));
  return take(out);
}

std::string location_text(const json& update) {
  std::string s = update[0].get<std::string>();
  const json& args = update[1];
  if (!args.empty()) {
    s += '(';
    for (std::size_t k = 0; k < args.size(); ++k) {
      if (k) s += ", ";
      s += args[k].get<std::string>();
    }
    s += ')';
  }
  return s;
}

std::string updates_text(const json& updates) {
  if (updates.is_null()) return "\xE2\x80\xA2";
  std::string s = "{";
  for (std::size_t k = 0; k < updates.size(); ++k) {
    if (k) s += ", ";
    s += location_text(updates[k]) + "\xE2\x86\xA6" + updates[k][2].get<std::string>();
  }
  return s + "}";
}

std::string gamma_text(const json& gamma, bool roles) {
  std::string s;
  for (const json& e : gamma) {
    if (!s.empty()) s += roles ? "\n    " : ", ";
    s += e["term"].get<std::string>();
    if (roles) {
      s += "  [";
      for (const json& r : e["roles"]) s += r.get<std::string>();
      s += "]";
    }
  }
  return s.empty() ? "(none)" : s;
}

// The interpretation of the dynamic symbols only.
json dynamic_part(const json& state) {
  json out = json::object();
  for (const json& s : state["vocabulary"]) {
    std::string name = s["name"].get<std::string>();
    if (s["kind"] == "dynamic" && state["interp"].contains(name)) out[name] = state["interp"][name];
  }
  return out;
}

// Selects states by --index, or all of them.
std::vector<std::size_t> selected(const easm_states* s, const std::vector<std::size_t>& indices) {
  std::vector<std::size_t> out = indices;
  if (out.empty())
    for (std::size_t i = 0; i < easm_states_count(s); ++i) out.push_back(i);
  return out;
}

struct StateOptions {
  std::string program;
  std::string states;
  std::vector<std::size_t> indices;
  bool clash_terms = false;
};

void add_state_options(CLI::App* cmd, StateOptions& o) {
  cmd->add_option("program", o.program, "Program file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--state,--states", o.states, "State file (one state or an array)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--index", o.indices, "Only the states at these positions");
}

enum class EvalView { Full, Delta, Gamma };

int cmd_eval(const StateOptions& o, EvalView view, const Output& out) {
  StatesPtr states = load_states(o.states);
  ProgramPtr program = load_program(o.program, states.get());
  json all = json::array();
  bool black_hole = false;
  for (std::size_t i : selected(states.get(), o.indices)) {
    char* raw = nullptr;
    ok(easm_evaluate(program.get(), states.get(), i, o.clash_terms, &raw));
    json r = take_json(raw);
    r["state"] = state_name(states.get(), i);
    black_hole = black_hole || r["outcome"]["kind"] == "black-hole";
    if (!out.json_mode) {
      std::string name = r["state"].get<std::string>();
      std::string delta = r["outcome"]["text"].get<std::string>();
      switch (view) {
        case EvalView::Delta:
          out.text(name + ": " + delta);
          break;
        case EvalView::Gamma:
          out.text(name + ": " + gamma_text(r["gamma"], false));
          break;
        case EvalView::Full:
          out.text("state " + name);
          out.text("  proposed: " + updates_text(r["proposed"]));
          out.text("  outcome:  " + delta);
          out.text("  explored:\n    " + gamma_text(r["gamma"], true));
          break;
      }
    }
    all.push_back(std::move(r));
  }
  if (out.json_mode) out.doc(all);
  return black_hole ? kReported : kOk;
}

int cmd_step(const StateOptions& o, const Output& out) {
  StatesPtr states = load_states(o.states);
  ProgramPtr program = load_program(o.program, states.get());
  json all = json::array();
  bool black_hole = false;
  for (std::size_t i : selected(states.get(), o.indices)) {
    char* raw = nullptr;
    ok(easm_step(program.get(), states.get(), i, &raw));
    json r = take_json(raw);
    r["state"] = state_name(states.get(), i);
    black_hole = black_hole || r["outcome"]["kind"] == "black-hole";
    if (!out.json_mode) {
      out.text(r["state"].get<std::string>() + ": " + r["outcome"]["text"].get<std::string>());
      if (!r["next"].is_null()) out.text("  next: " + dynamic_part(r["next"]).dump());
    }
    all.push_back(std::move(r));
  }
  if (out.json_mode) out.doc(all);
  return black_hole ? kReported : kOk;
}

int cmd_run(const StateOptions& o, std::size_t max_steps, const Output& out) {
  StatesPtr states = load_states(o.states);
  ProgramPtr program = load_program(o.program, states.get());
  json all = json::array();
  bool black_hole = false;
  for (std::size_t i : selected(states.get(), o.indices)) {
    char* raw = nullptr;
    ok(easm_run(program.get(), states.get(), i, max_steps, o.clash_terms, &raw));
    json r = take_json(raw);
    r["state"] = state_name(states.get(), i);
    black_hole = black_hole || r["stop"] == "black-hole";
    if (!out.json_mode) {
      out.text("run from " + r["state"].get<std::string>());
      std::size_t k = 0;
      for (const json& e : r["entries"])
        out.text("  step " + std::to_string(k++) + ": " + e["outcome"]["text"].get<std::string>());
      out.text("  stopped: " + r["stop"].get<std::string>() + " after " +
               std::to_string(r["steps"].get<std::size_t>()) + " step(s)");
      out.text("  final: " + dynamic_part(r["entries"].back()["state"]).dump());
    }
    all.push_back(std::move(r));
  }
  if (out.json_mode) out.doc(all);
  return black_hole ? kReported : kOk;
}

int cmd_flatten(const std::string& path, const std::string& states_path, const Output& out) {
  StatesPtr states;
  if (!states_path.empty()) states = load_states(states_path);
  ProgramPtr program = load_program(path, states.get());
  easm_program* flat = nullptr;
  ok(easm_program_flatten(program.get(), &flat));
  ProgramPtr owned(flat);
  if (out.json_mode)
    out.doc({{"program", print(owned.get())}});
  else
    out.text(print(owned.get()));
  return kOk;
}

void print_report(const json& r, const Output& out) {
  out.text(r["postulate"].get<std::string>() + ": " + out.verdict(r["passed"].get<bool>()));
  if (r.contains("union_size"))
    out.text("  union of explore sets: " + std::to_string(r["union_size"].get<std::size_t>()) +
             " terms; largest explore set: " + std::to_string(r["bound"].get<std::size_t>()));
  if (r.contains("oracle_agrees"))
    out.text(std::string("  subset enumeration ") +
             (r["oracle_agrees"].get<bool>() ? "agrees" : "DISAGREES"));
  if (r.contains("literal_clause") && !r["literal_clause"].get<bool>())
    out.text("  note: " + std::to_string(r["literal_gaps"].size()) +
             " absences are separated only by non-Boolean disagreements");
  for (const json& w : r["witnesses"]) {
    std::string states;
    for (const json& s : w["states"]) states += (states.empty() ? "" : ", ") + s.get<std::string>();
    std::string line = "  [" + states + "] " + w["message"].get<std::string>();
    if (!w["terms"].empty()) {
      line += " (";
      for (std::size_t k = 0; k < w["terms"].size(); ++k)
        line += (k ? ", " : "") + w["terms"][k].get<std::string>();
      line += ")";
    }
    out.text(line);
  }
}

struct CheckOptions {
  std::string spec;
  std::string postulate = "all";
  std::string values = "boolean";
  bool oracle = false;
};

int cmd_check(const CheckOptions& o, const Output& out) {
  SpecPtr spec = load_spec(o.spec);
  easm_check_options opts;
  easm_check_options_init(&opts);
  opts.values = o.values == "distinguished" ? EASM_VALUES_DISTINGUISHED : EASM_VALUES_BOOLEAN;
  opts.oracle_subsets = o.oracle;
  char* raw = nullptr;
  int passed = 0;
  ok(easm_check(spec.get(), o.postulate.c_str(), &opts, &raw, &passed));
  json reports = take_json(raw);
  if (out.json_mode)
    out.doc(reports);
  else
    for (const json& r : reports) print_report(r, out);
  return passed ? kOk : kReported;
}

struct SynthOptions {
  std::string spec;
  std::string form = "if";
  std::string tree_file;
  bool verify = false;
};

int cmd_synthesize(const SynthOptions& o, const Output& out) {
  SpecPtr spec = load_spec(o.spec);
  easm_program* raw_program = nullptr;
  char* raw_tree = nullptr;
  ok(easm_synthesize(spec.get(), o.form == "case" ? EASM_FORM_CASE : EASM_FORM_IF, &raw_program,
                     &raw_tree));
  ProgramPtr program(raw_program);
  json tree = take_json(raw_tree);
  if (!o.tree_file.empty()) {
    std::ofstream f(o.tree_file);
    if (!f) throw CliError("cannot write '" + o.tree_file + "'");
    f << tree.dump(2) << '\n';
  }
  int code = kOk;
  json doc = {{"program", print(program.get())}};
  if (o.verify) {
    char* raw = nullptr;
    int passed = 0;
    ok(easm_check_equivalence(program.get(), spec.get(), &raw, &passed));
    doc["equivalence"] = take_json(raw)[0];
    if (!passed) code = kReported;
  }
  if (out.json_mode) {
    doc["tree"] = tree;
    out.doc(doc);
  } else {
    out.text(doc["program"].get<std::string>());
    if (o.verify) print_report(doc["equivalence"], out);
  }
  return code;
}

struct SpecOptions {
  std::string program;
  std::string states;
  std::string enumeration;
  std::string reachable_from;
  std::string output;
};

int cmd_spec_from_program(const SpecOptions& o, const Output& out) {
  StatesPtr states = !o.states.empty() ? load_states(o.states) : enumerate(o.enumeration);
  ProgramPtr program = load_program(o.program, states.get());
  if (!o.reachable_from.empty()) {
    StatesPtr initial = load_states(o.reachable_from);
    easm_states* kept = nullptr;
    ok(easm_states_reachable(program.get(), states.get(), initial.get(), &kept));
    states.reset(kept);
  }
  easm_spec* raw_spec = nullptr;
  ok(easm_spec_from_program(program.get(), states.get(), &raw_spec));
  SpecPtr spec(raw_spec);
  char* raw = nullptr;
  ok(easm_spec_to_json(spec.get(), &raw));
  json doc = take_json(raw);
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f) throw CliError("cannot write '" + o.output + "'");
    f << doc.dump(2) << '\n';
    out.text("wrote " + std::to_string(easm_spec_size(spec.get())) + " states to " + o.output);
  } else {
    if (!out.quiet) std::cout << doc.dump(2) << '\n';
  }
  return kOk;
}

int cmd_fixtures(const std::string& name, const std::string& dir, bool list, const Output& out) {
  if (list || name.empty()) {
    char* raw = nullptr;
    ok(easm_fixture_names(&raw));
    json names = take_json(raw);
    if (out.json_mode)
      out.doc(names);
    else
      for (const json& n : names) out.text(n.get<std::string>());
    return kOk;
  }
  char* raw = nullptr;
  ok(easm_fixture_files(name.c_str(), &raw));
  json files = take_json(raw);
  fs::path target = dir.empty() ? fs::path(name) : fs::path(dir);
  fs::create_directories(target);
  json written = json::array();
  for (const auto& [file, content] : files.items()) {
    fs::path path = target / file;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CliError("cannot write '" + path.string() + "'");
    f << content.get<std::string>();
    written.push_back(path.string());
  }
  if (out.json_mode)
    out.doc(written);
  else
    for (const json& p : written) out.text(p.get<std::string>());
  return kOk;
}

bool color_enabled() {
  if (const char* env = std::getenv("EXACT_ASM_COLOR")) return std::string(env) == "1";
  return isatty(fileno(stdout)) != 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-exploration tools for abstract state machine programs", "exact-asm"};
  app.set_version_flag("--version", std::string(easm_version()));
  app.require_subcommand(1);

  Output out;
  app.add_flag("--json", out.json_mode, "Machine-readable output");
  app.add_flag("--quiet", out.quiet, "Suppress normal output");

  StateOptions eval_opts, delta_opts, gamma_opts, step_opts, run_opts;
  auto* eval = app.add_subcommand("eval", "Proposed updates, outcome and explore set per state");
  add_state_options(eval, eval_opts);
  eval->add_flag("--clash-terms", eval_opts.clash_terms, "Add the equality terms that explain clashes");
  auto* delta = app.add_subcommand("delta", "Update outcome per state");
  add_state_options(delta, delta_opts);
  auto* gamma = app.add_subcommand("gamma", "Explore set per state");
  add_state_options(gamma, gamma_opts);
  gamma->add_flag("--clash-terms", gamma_opts.clash_terms, "Add the equality terms that explain clashes");
  auto* stepc = app.add_subcommand("step", "One transition per state");
  add_state_options(stepc, step_opts);
  auto* runc = app.add_subcommand("run", "Iterate transitions until halt, black hole or budget");
  add_state_options(runc, run_opts);
  std::size_t max_steps = 1000;
  runc->add_option("--max-steps", max_steps, "Step budget")->capture_default_str();
  runc->add_flag("--clash-terms", run_opts.clash_terms, "Add the equality terms that explain clashes");

  std::string flatten_program, flatten_states;
  auto* flat = app.add_subcommand("flatten", "Push conditionals through parallel blocks");
  flat->add_option("program", flatten_program, "Program file")->required()->check(CLI::ExistingFile);
  flat->add_option("--states", flatten_states, "Check symbols against this state file")
      ->check(CLI::ExistingFile);

  CheckOptions check_opts;
  auto* check = app.add_subcommand("check", "Check the exploration postulates on a spec");
  check->add_option("--spec", check_opts.spec, "Spec file")->required()->check(CLI::ExistingFile);
  check->add_option("--postulate", check_opts.postulate, "Which postulate")
      ->check(CLI::IsMember({"determination", "discrimination", "limitation", "abstract-state", "all"}))
      ->capture_default_str();
  check->add_option("--values", check_opts.values, "Discriminating values: boolean or distinguished")
      ->check(CLI::IsMember({"boolean", "distinguished"}))
      ->capture_default_str();
  check->add_flag("--oracle-subsets", check_opts.oracle,
                  "Cross-check discrimination by enumerating state subsets");

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synthesize", "Build an equivalent program from a spec");
  synth->add_option("--spec", synth_opts.spec, "Spec file")->required()->check(CLI::ExistingFile);
  synth->add_option("--form", synth_opts.form, "if or case")
      ->check(CLI::IsMember({"if", "case"}))
      ->capture_default_str();
  synth->add_option("--emit-tree", synth_opts.tree_file, "Write the exploration tree as JSON");
  synth->add_flag("--verify", synth_opts.verify, "Check the result against the spec");

  SpecOptions spec_opts;
  auto* specc = app.add_subcommand("spec-from-program", "Tabulate a program's behavior as a spec");
  specc->add_option("program", spec_opts.program, "Program file")->required()->check(CLI::ExistingFile);
  auto* states_opt =
      specc->add_option("--states", spec_opts.states, "State file")->check(CLI::ExistingFile);
  auto* enum_opt = specc->add_option("--enumerate", spec_opts.enumeration, "Enumeration file")
                       ->check(CLI::ExistingFile);
  states_opt->excludes(enum_opt);
  specc->add_option("--reachable-from", spec_opts.reachable_from,
                    "Keep only states reachable from these initial states")
      ->check(CLI::ExistingFile);
  specc->add_option("-o,--output", spec_opts.output, "Output file (default: stdout)");

  std::string fixture_name, fixture_dir;
  bool fixture_list = false;
  auto* fix = app.add_subcommand("fixtures", "Write the worked examples as input files");
  fix->add_option("name", fixture_name, "Fixture name");
  fix->add_option("--out", fixture_dir, "Target directory (default: the fixture name)");
  fix->add_flag("--list", fixture_list, "List fixture names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  out.color = color_enabled();

  try {
    if (*eval) return cmd_eval(eval_opts, EvalView::Full, out);
    if (*delta) return cmd_eval(delta_opts, EvalView::Delta, out);
    if (*gamma) return cmd_eval(gamma_opts, EvalView::Gamma, out);
    if (*stepc) return cmd_step(step_opts, out);
    if (*runc) return cmd_run(run_opts, max_steps, out);
    if (*flat) return cmd_flatten(flatten_program, flatten_states, out);
    if (*check) return cmd_check(check_opts, out);
    if (*synth) return cmd_synthesize(synth_opts, out);
    if (*specc) {
      if (spec_opts.states.empty() && spec_opts.enumeration.empty())
        throw CliError("spec-from-program needs --states or --enumerate");
      return cmd_spec_from_program(spec_opts, out);
    }
    if (*fix) return cmd_fixtures(fixture_name, fixture_dir, fixture_list, out);
  } catch (const CliError& e) {
    std::cerr << "exact-asm: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "exact-asm: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
