#include "exact_asm/exact_asm.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <unordered_map>

#include "exact_asm/error.hpp"
#include "exact_asm/fixtures.hpp"
#include "exact_asm/io.hpp"
#include "exact_asm/postulates.hpp"
#include "exact_asm/synthesis.hpp"

using namespace exact_asm;
using exact_asm::io::json;

struct easm_program {
  Program program;
};

struct easm_states {
  std::vector<PartialStructure> states;
  std::vector<std::string> names;
};

struct easm_spec {
  AlgorithmSpec spec;
};

namespace {

thread_local std::string g_last_error;

struct ArgumentError : Error {
  using Error::Error;
};

easm_status fail(easm_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs body, translating exceptions into status codes.
template <class F>
easm_status guard(F&& body) noexcept {
  try {
    body();
    return EASM_OK;
  } catch (const ArgumentError& e) {
    return fail(EASM_ERR_ARGUMENT, e.what());
  } catch (const ParseError& e) {
    return fail(EASM_ERR_PARSE, e.what());
  } catch (const FormatError& e) {
    return fail(EASM_ERR_FORMAT, e.what());
  } catch (const json::exception& e) {
    return fail(EASM_ERR_FORMAT, e.what());
  } catch (const SpecificationError& e) {
    return fail(EASM_ERR_SPECIFICATION, e.what());
  } catch (const ContractViolation& e) {
    return fail(EASM_ERR_CONTRACT, e.what());
  } catch (const SynthesisError& e) {
    return fail(EASM_ERR_SYNTHESIS, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EASM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EASM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EASM_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw ArgumentError(what);
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::filesystem::path dir_of(const char* base_dir) {
  return base_dir ? std::filesystem::path(base_dir) : std::filesystem::path();
}

json outcome_json(const UpdateOutcome& outcome) {
  json doc = io::outcome_to_json(outcome);
  doc["text"] = outcome.str();
  return doc;
}

json update_list(const UpdateSet& updates) {
  json out = json::array();
  for (const Update& u : updates) {
    json args = json::array();
    for (Value v : u.location.args) args.push_back(v.name());
    out.push_back(json::array({u.location.symbol, args, u.value.name()}));
  }
  return out;
}

const PartialStructure& state_at(const easm_states* s, size_t index) {
  require(s != nullptr, "null states handle");
  require(index < s->states.size(), "state index out of range");
  return s->states[index];
}

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  return names;
}

easm_states* make_states(std::vector<PartialStructure> states, std::vector<std::string> names) {
  return new easm_states{std::move(states), std::move(names)};
}

}  // namespace

extern "C" {

const char* easm_version(void) { return "0.1.0"; }

const char* easm_last_error(void) { return g_last_error.c_str(); }

const char* easm_status_name(easm_status status) {
  switch (status) {
    case EASM_OK: return "ok";
    case EASM_ERR_ARGUMENT: return "argument error";
    case EASM_ERR_PARSE: return "parse error";
    case EASM_ERR_FORMAT: return "format error";
    case EASM_ERR_SPECIFICATION: return "specification error";
    case EASM_ERR_CONTRACT: return "contract violation";
    case EASM_ERR_SYNTHESIS: return "synthesis error";
    case EASM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void easm_string_free(char* s) { std::free(s); }

// ---------------------------------------------------------------- programs

easm_status easm_program_parse(const char* text, const easm_states* vocabulary,
                               easm_program** out) {
  return guard([&] {
    require(text && out, "null argument");
    const Vocabulary* vocab = nullptr;
    if (vocabulary) {
      require(!vocabulary->states.empty(), "vocabulary source has no states");
      vocab = &vocabulary->states.front().vocabulary();
    }
    Program p = parse_program(text, vocab);
    *out = new easm_program{std::move(p)};
  });
}

void easm_program_free(easm_program* p) { delete p; }

easm_status easm_program_print(const easm_program* p, char** out) {
  return guard([&] {
    require(p && out, "null argument");
    *out = copy_out(print_program(p->program));
  });
}

easm_status easm_program_flatten(const easm_program* p, easm_program** out) {
  return guard([&] {
    require(p && out, "null argument");
    Program flat = flatten(p->program);
    *out = new easm_program{std::move(flat)};
  });
}

int easm_program_equal(const easm_program* a, const easm_program* b) {
  if (!a || !b) return 0;
  return a->program == b->program ? 1 : 0;
}

// ---------------------------------------------------------------- states

easm_status easm_states_from_json(const char* text, const char* base_dir, easm_states** out) {
  return guard([&] {
    require(text && out, "null argument");
    json doc = json::parse(text);
    auto states = io::states_from_json(doc, dir_of(base_dir));
    auto names = io::state_names_from_json(doc);
    if (names.size() != states.size()) names = default_names(states.size());
    *out = make_states(std::move(states), std::move(names));
  });
}

easm_status easm_states_enumerate(const char* text, const char* base_dir, easm_states** out) {
  return guard([&] {
    require(text && out, "null argument");
    auto blocks = io::enumeration_from_json(json::parse(text), dir_of(base_dir));
    auto states = enumerate_states(blocks);
    auto names = default_names(states.size());
    *out = make_states(std::move(states), std::move(names));
  });
}

easm_status easm_states_reachable(const easm_program* p, const easm_states* candidates,
                                  const easm_states* initial, easm_states** out) {
  return guard([&] {
    require(p && candidates && initial && out, "null argument");
    auto kept = reachable_states(p->program, candidates->states, initial->states);
    std::unordered_map<std::string, std::string> name_of;
    for (std::size_t i = 0; i < candidates->states.size(); ++i)
      name_of.emplace(state_fingerprint(candidates->states[i]), candidates->names[i]);
    std::vector<std::string> names;
    for (const auto& s : kept) names.push_back(name_of.at(state_fingerprint(s)));
    *out = make_states(std::move(kept), std::move(names));
  });
}

void easm_states_free(easm_states* s) { delete s; }

size_t easm_states_count(const easm_states* s) { return s ? s->states.size() : 0; }

easm_status easm_states_name(const easm_states* s, size_t index, char** out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    state_at(s, index);
    *out = copy_out(s->names[index]);
  });
}

easm_status easm_states_to_json(const easm_states* s, char** out) {
  return guard([&] {
    require(s && out, "null argument");
    json doc = json::array();
    for (std::size_t i = 0; i < s->states.size(); ++i) {
      json state = io::state_to_json(s->states[i]);
      state["name"] = s->names[i];
      doc.push_back(std::move(state));
    }
    *out = copy_out(doc.dump());
  });
}

// ---------------------------------------------------------------- interpretation

easm_status easm_evaluate(const easm_program* p, const easm_states* s, size_t index,
                          int with_clash_terms, char** out) {
  return guard([&] {
    require(p && out, "null argument");
    const PartialStructure& state = state_at(s, index);
    Evaluation ev = evaluate(p->program, state, with_clash_terms != 0);
    json doc;
    doc["outcome"] = outcome_json(ev.outcome);
    doc["proposed"] = ev.proposed ? update_list(*ev.proposed) : json(nullptr);
    doc["gamma"] = io::explore_set_to_json(ev.gamma);
    *out = copy_out(doc.dump());
  });
}

easm_status easm_step(const easm_program* p, const easm_states* s, size_t index, char** out) {
  return guard([&] {
    require(p && out, "null argument");
    StepResult r = step(p->program, state_at(s, index));
    json doc;
    doc["outcome"] = outcome_json(r.outcome);
    doc["next"] = r.next ? io::state_to_json(*r.next) : json(nullptr);
    *out = copy_out(doc.dump());
  });
}

easm_status easm_run(const easm_program* p, const easm_states* s, size_t index, size_t max_steps,
                     int with_clash_terms, char** out) {
  return guard([&] {
    require(p && out, "null argument");
    Trace trace = run(p->program, state_at(s, index), max_steps, with_clash_terms != 0);
    json doc = io::trace_to_json(trace);
    for (std::size_t k = 0; k < trace.entries.size(); ++k)
      doc["entries"][k]["outcome"]["text"] = trace.entries[k].outcome.str();
    *out = copy_out(doc.dump());
  });
}

// ---------------------------------------------------------------- specs

easm_status easm_spec_from_json(const char* text, const char* base_dir, easm_spec** out) {
  return guard([&] {
    require(text && out, "null argument");
    AlgorithmSpec spec = io::spec_from_json(json::parse(text), dir_of(base_dir));
    *out = new easm_spec{std::move(spec)};
  });
}

easm_status easm_spec_from_program(const easm_program* p, const easm_states* s, easm_spec** out) {
  return guard([&] {
    require(p && s && out, "null argument");
    AlgorithmSpec spec = spec_from_program(p->program, s->states, s->names);
    *out = new easm_spec{std::move(spec)};
  });
}

void easm_spec_free(easm_spec* spec) { delete spec; }

size_t easm_spec_size(const easm_spec* spec) { return spec ? spec->spec.size() : 0; }

easm_status easm_spec_to_json(const easm_spec* spec, char** out) {
  return guard([&] {
    require(spec && out, "null argument");
    *out = copy_out(io::spec_to_json(spec->spec).dump());
  });
}

void easm_check_options_init(easm_check_options* options) {
  if (!options) return;
  options->values = EASM_VALUES_BOOLEAN;
  options->oracle_subsets = 0;
  options->oracle_max_states = 0;
}

easm_status easm_check(const easm_spec* spec, const char* postulate,
                       const easm_check_options* options, char** out, int* passed) {
  return guard([&] {
    require(spec && postulate && out, "null argument");
    CheckOptions opts;
    if (options) {
      require(options->values == EASM_VALUES_BOOLEAN || options->values == EASM_VALUES_DISTINGUISHED,
              "unknown discrimination value mode");
      opts.values = options->values == EASM_VALUES_DISTINGUISHED
                        ? DiscriminationValues::Distinguished
                        : DiscriminationValues::Boolean;
      opts.oracle_subsets = options->oracle_subsets != 0;
      if (options->oracle_max_states) opts.oracle_max_states = options->oracle_max_states;
    }
    const std::string which = postulate;
    std::vector<CheckReport> reports;
    if (which == "all") {
      reports = check_all(spec->spec, opts);
    } else if (which == "determination") {
      reports.push_back(check_determination(spec->spec));
    } else if (which == "discrimination") {
      reports.push_back(check_discrimination(spec->spec, opts));
    } else if (which == "limitation") {
      reports.push_back(check_limitation(spec->spec));
    } else if (which == "abstract-state") {
      reports.push_back(check_abstract_state(spec->spec, opts));
    } else {
      throw ArgumentError("unknown postulate '" + which + "'");
    }
    json doc = json::array();
    bool all_passed = true;
    for (const CheckReport& r : reports) {
      doc.push_back(io::report_to_json(r));
      all_passed = all_passed && r.passed;
    }
    *out = copy_out(doc.dump());
    if (passed) *passed = all_passed ? 1 : 0;
  });
}

easm_status easm_synthesize(const easm_spec* spec, easm_form form, easm_program** out,
                            char** tree_out) {
  return guard([&] {
    require(spec && out, "null argument");
    require(form == EASM_FORM_IF || form == EASM_FORM_CASE, "unknown synthesis form");
    SynthesisResult r = synthesize_with_tree(
        spec->spec, form == EASM_FORM_CASE ? SynthesisForm::Case : SynthesisForm::If);
    char* tree = tree_out ? copy_out(io::tree_to_json(r.tree).dump()) : nullptr;
    *out = new easm_program{std::move(r.program)};
    if (tree_out) *tree_out = tree;
  });
}

easm_status easm_check_equivalence(const easm_program* p, const easm_spec* spec, char** out,
                                   int* passed) {
  return guard([&] {
    require(p && spec && out, "null argument");
    CheckReport r = check_equivalence(p->program, spec->spec);
    *out = copy_out(json::array({io::report_to_json(r)}).dump());
    if (passed) *passed = r.passed ? 1 : 0;
  });
}

// ---------------------------------------------------------------- fixtures

easm_status easm_fixture_names(char** out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = copy_out(json(fixtures::names()).dump());
  });
}

easm_status easm_fixture_files(const char* name, char** out) {
  return guard([&] {
    require(name && out, "null argument");
    json doc = json::object();
    for (const auto& [file, content] : fixtures::files(name)) doc[file] = content;
    *out = copy_out(doc.dump());
  });
}

}  // extern "C"
