#include "exact_asm/io.hpp"

#include <fstream>
#include <sstream>

#include "exact_asm/error.hpp"

namespace exact_asm::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw FormatError(what); }

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) bad(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(where + ": missing \"" + key + "\"");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where + ": expected a string");
  return j.get<std::string>();
}

Value as_value(const json& j, const std::string& where) {
  return Value::named(as_string(j, where));
}

Tuple as_tuple(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected an array of element names");
  Tuple out;
  for (const json& e : j) out.push_back(as_value(e, where));
  return out;
}

json tuple_json(const Tuple& t) {
  json out = json::array();
  for (Value v : t) out.push_back(v.name());
  return out;
}

SymbolKind parse_symbol_kind(const json& j, const std::string& where) {
  std::string k = as_string(j, where);
  if (k == "static") return SymbolKind::Static;
  if (k == "dynamic") return SymbolKind::Dynamic;
  bad(where + ": kind must be \"static\" or \"dynamic\"");
}

Location parse_location(const json& j, const std::string& where) {
  if (j.is_string()) return Location{j.get<std::string>(), {}};
  if (!j.is_array() || j.size() != 2) bad(where + ": location must be [symbol, [args...]]");
  return Location{as_string(j[0], where), as_tuple(j[1], where)};
}

json table_json(const Table& t, std::size_t arity) {
  if (arity == 0 && t.size() == 1) return t.begin()->second.name();
  json out = json::array();
  for (const auto& [args, value] : t) out.push_back(json::array({tuple_json(args), value.name()}));
  return out;
}

const json& resolve(const json& j, const std::filesystem::path& base_dir, json& storage) {
  if (!j.is_string()) return j;
  storage = read_json_file(base_dir / j.get<std::string>());
  return storage;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

VocabularyPtr vocabulary_from_json(const json& doc) {
  std::vector<Symbol> symbols;
  if (doc.contains("vocabulary")) {
    const json& v = doc["vocabulary"];
    if (!v.is_array()) bad("vocabulary: expected an array");
    for (const json& s : v) {
      Symbol sym;
      sym.name = as_string(member(s, "name", "vocabulary entry"), "vocabulary name");
      const json& arity = member(s, "arity", "vocabulary entry '" + sym.name + "'");
      if (!arity.is_number_unsigned()) bad("vocabulary entry '" + sym.name + "': bad arity");
      sym.arity = arity.get<std::size_t>();
      sym.kind = s.contains("kind") ? parse_symbol_kind(s["kind"], "vocabulary entry '" + sym.name + "'")
                                    : SymbolKind::Static;
      symbols.push_back(std::move(sym));
    }
  }
  std::vector<std::string> distinguished;
  if (doc.contains("distinguished")) {
    const json& d = doc["distinguished"];
    if (!d.is_array()) bad("distinguished: expected an array");
    for (const json& n : d) distinguished.push_back(as_string(n, "distinguished"));
  }
  return std::make_shared<const Vocabulary>(std::move(symbols), std::move(distinguished));
}

PartialStructure state_from_json(const json& doc, const VocabularyPtr& shared) {
  if (!doc.is_object()) bad("state: expected an object");
  VocabularyPtr vocab = vocabulary_from_json(doc);
  if (shared && *shared == *vocab) vocab = shared;

  const json& base_doc = member(doc, "base", "state");
  if (!base_doc.is_array()) bad("state base: expected an array");
  std::vector<Value> base;
  for (const json& e : base_doc) base.push_back(as_value(e, "state base"));

  StructureBuilder builder(vocab, base);
  if (doc.contains("interp")) {
    const json& interp = doc["interp"];
    if (!interp.is_object()) bad("interp: expected an object");
    for (const auto& [name, entries] : interp.items()) {
      const Symbol* sym = vocab->find(name);
      if (!sym) throw SpecificationError("interp: unknown symbol '" + name + "'");
      builder.declare(name);
      if (entries.is_null()) continue;
      if (entries.is_string()) {
        if (sym->arity != 0) bad("interp '" + name + "': shorthand value only for constants");
        builder.set(name, Value::named(entries.get<std::string>()));
        continue;
      }
      if (!entries.is_array()) bad("interp '" + name + "': expected an array of [args, value]");
      for (const json& e : entries) {
        if (!e.is_array() || e.size() != 2) bad("interp '" + name + "': entry must be [args, value]");
        Tuple args = as_tuple(e[0], "interp '" + name + "'");
        if (args.size() != sym->arity)
          throw SpecificationError("interp '" + name + "': expected " + std::to_string(sym->arity) +
                                   " argument(s)");
        builder.set(name, std::move(args), as_value(e[1], "interp '" + name + "'"));
      }
    }
  }
  StateFlags flags;
  if (doc.contains("flags")) {
    const json& f = doc["flags"];
    if (!f.is_object()) bad("flags: expected an object");
    if (f.contains("initial")) flags.initial = f["initial"].get<bool>();
    if (f.contains("terminal")) flags.terminal = f["terminal"].get<bool>();
  }
  builder.flags(flags);
  return builder.build();
}

json state_to_json(const PartialStructure& state) {
  const Vocabulary& vocab = state.vocabulary();
  json doc;
  json symbols = json::array();
  for (const Symbol& s : vocab.symbols()) {
    if (Vocabulary::is_builtin(s.name)) continue;
    symbols.push_back({{"name", s.name},
                       {"arity", s.arity},
                       {"kind", s.kind == SymbolKind::Dynamic ? "dynamic" : "static"}});
  }
  doc["vocabulary"] = symbols;
  json distinguished = json::array();
  for (const std::string& d : vocab.distinguished())
    if (!Vocabulary::is_builtin(d)) distinguished.push_back(d);
  doc["distinguished"] = distinguished;
  json base = json::array();
  for (Value v : state.base()) base.push_back(v.name());
  doc["base"] = base;

  std::optional<PartialStructure> defaults;
  try {
    defaults = StructureBuilder(state.vocabulary_ptr(),
                                std::vector<Value>(state.base().begin(), state.base().end()))
                   .build();
  } catch (const Error&) {
  }
  json interp = json::object();
  for (std::size_t i = 0; i < vocab.symbols().size(); ++i) {
    const Symbol& s = vocab.at(i);
    const Table& t = state.table(i);
    bool has_default = Vocabulary::is_builtin(s.name) || vocab.is_distinguished(s.name);
    if (has_default && defaults && defaults->table(i) == t) continue;
    if (!has_default && t.empty()) continue;
    interp[s.name] = table_json(t, s.arity);
  }
  doc["interp"] = interp;
  doc["flags"] = {{"initial", state.flags().initial}, {"terminal", state.flags().terminal}};
  return doc;
}

json outcome_to_json(const UpdateOutcome& outcome) {
  json updates = json::array();
  for (const Update& u : outcome.update_set())
    updates.push_back(json::array({u.location.symbol, tuple_json(u.location.args), u.value.name()}));
  return {{"kind", kind_name(outcome.kind())}, {"updates", updates}};
}

UpdateOutcome outcome_from_json(const json& doc) {
  std::string kind = as_string(member(doc, "kind", "outcome"), "outcome kind");
  auto k = parse_kind(kind);
  if (!k) bad("outcome: unknown kind '" + kind + "'");
  switch (*k) {
    case UpdateOutcome::Kind::HaltSuccess:
      return UpdateOutcome::halt_success();
    case UpdateOutcome::Kind::HaltClash:
      return UpdateOutcome::halt_clash();
    case UpdateOutcome::Kind::BlackHole:
      return UpdateOutcome::black_hole();
    case UpdateOutcome::Kind::Updates:
      break;
  }
  std::vector<Update> updates;
  if (doc.contains("updates")) {
    const json& us = doc["updates"];
    if (!us.is_array()) bad("outcome updates: expected an array");
    for (const json& u : us) {
      if (!u.is_array() || u.size() != 3) bad("outcome update: expected [symbol, [args], value]");
      updates.push_back(Update{Location{as_string(u[0], "update symbol"), as_tuple(u[1], "update args")},
                               as_value(u[2], "update value")});
    }
  }
  UpdateSet set = make_update_set(std::move(updates));
  if (has_clash(set)) throw SpecificationError("outcome: update set assigns one location twice");
  return UpdateOutcome::updates(std::move(set));
}

json explore_set_to_json(const ExploreSet& gamma) {
  json out = json::array();
  for (const ExploreEntry& e : gamma.entries()) {
    json roles = json::array();
    for (char c : role_string(e.roles)) roles.push_back(std::string(1, c));
    out.push_back({{"term", e.term.str()}, {"roles", roles}});
  }
  return out;
}

json terms_to_json(const TermSet& terms) {
  json out = json::array();
  for (Term t : terms) out.push_back(t.str());
  return out;
}

std::vector<PartialStructure> states_from_json(const json& doc, const std::filesystem::path& base_dir) {
  std::vector<PartialStructure> out;
  if (doc.is_object()) {
    out.push_back(state_from_json(doc));
    return out;
  }
  if (!doc.is_array()) bad("states: expected an array or a state object");
  VocabularyPtr shared;
  for (const json& s : doc) {
    json storage;
    out.push_back(state_from_json(resolve(s, base_dir, storage), shared));
    if (!shared) shared = out.back().vocabulary_ptr();
  }
  return out;
}

std::vector<std::string> state_names_from_json(const json& doc) {
  std::vector<std::string> names;
  auto name_of = [](const json& s, std::size_t i) {
    if (s.is_object() && s.contains("name")) return as_string(s["name"], "state name");
    return "s" + std::to_string(i);
  };
  if (doc.is_object()) {
    names.push_back(name_of(doc, 0));
  } else if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) names.push_back(name_of(doc[i], i));
  }
  return names;
}

AlgorithmSpec spec_from_json(const json& doc, const std::filesystem::path& base_dir) {
  const json& states = member(doc, "states", "spec");
  if (!states.is_array()) bad("spec states: expected an array");
  const json& gamma = member(doc, "gamma", "spec");
  const json& delta = member(doc, "delta", "spec");
  if (!gamma.is_object() || !delta.is_object()) bad("spec gamma/delta: expected objects");

  std::vector<SpecState> rows;
  VocabularyPtr shared;
  for (std::size_t i = 0; i < states.size(); ++i) {
    json storage;
    const json& sdoc = resolve(states[i], base_dir, storage);
    PartialStructure state = state_from_json(sdoc, shared);
    if (!shared) shared = state.vocabulary_ptr();
    std::string name = "s" + std::to_string(i);
    if (sdoc.contains("name")) name = as_string(sdoc["name"], "state name");

    auto g = gamma.find(name);
    if (g == gamma.end()) bad("spec gamma: no entry for state '" + name + "'");
    if (!g->is_array()) bad("spec gamma '" + name + "': expected an array of terms");
    std::vector<Term> terms;
    for (const json& t : *g) terms.push_back(parse_term(as_string(t, "gamma term"), &state.vocabulary()));

    auto d = delta.find(name);
    if (d == delta.end()) bad("spec delta: no entry for state '" + name + "'");
    UpdateOutcome outcome = outcome_from_json(*d);

    bool explicit_terminal = sdoc.contains("flags") && sdoc["flags"].contains("terminal");
    if (!explicit_terminal) {
      StateFlags f = state.flags();
      f.terminal = outcome.is_halt();
      state = state.with_flags(f);
    }
    rows.push_back(SpecState{name, std::move(state), TermSet(std::move(terms)), std::move(outcome)});
  }
  return AlgorithmSpec(std::move(rows));
}

json spec_to_json(const AlgorithmSpec& spec) {
  json states = json::array();
  json gamma = json::object();
  json delta = json::object();
  for (const SpecState& s : spec.states()) {
    json sdoc = state_to_json(s.state);
    sdoc["name"] = s.name;
    states.push_back(std::move(sdoc));
    gamma[s.name] = terms_to_json(s.gamma);
    delta[s.name] = outcome_to_json(s.delta);
  }
  return {{"states", states}, {"gamma", gamma}, {"delta", delta}};
}

std::vector<EnumerationBlock> enumeration_from_json(const json& doc,
                                                    const std::filesystem::path& base_dir) {
  const json& blocks = member(doc, "blocks", "enumeration");
  if (!blocks.is_array()) bad("enumeration blocks: expected an array");
  std::vector<EnumerationBlock> out;
  VocabularyPtr shared;
  for (const json& b : blocks) {
    json storage;
    PartialStructure tmpl = state_from_json(resolve(member(b, "template", "enumeration block"), base_dir, storage), shared);
    if (!shared) shared = tmpl.vocabulary_ptr();
    EnumerationBlock block{tmpl, {}};
    if (b.contains("vary")) {
      if (!b["vary"].is_array()) bad("enumeration vary: expected an array");
      for (const json& v : b["vary"]) {
        VariedLocation loc{parse_location(member(v, "location", "vary entry"), "vary location"), {}};
        const json& values = member(v, "values", "vary entry");
        if (!values.is_array()) bad("vary values: expected an array");
        for (const json& x : values) {
          if (x.is_null())
            loc.values.push_back(std::nullopt);
          else
            loc.values.push_back(as_value(x, "vary value"));
        }
        block.vary.push_back(std::move(loc));
      }
    }
    out.push_back(std::move(block));
  }
  return out;
}

json report_to_json(const CheckReport& report) {
  json doc;
  doc["postulate"] = report.postulate;
  doc["passed"] = report.passed;
  auto witnesses = [](const std::vector<Witness>& ws) {
    json out = json::array();
    for (const Witness& w : ws) {
      json terms = json::array();
      for (Term t : w.terms) terms.push_back(t.str());
      out.push_back({{"states", w.states}, {"terms", terms}, {"message", w.message}});
    }
    return out;
  };
  doc["witnesses"] = witnesses(report.witnesses);
  if (!report.orders.empty()) {
    json orders = json::object();
    for (const auto& [name, order] : report.orders) {
      json pairs = json::array();
      for (const auto& [lo, hi] : order) pairs.push_back(json::array({lo.str(), hi.str()}));
      orders[name] = pairs;
    }
    doc["orders"] = orders;
  }
  if (report.agreeable_implies_uniform) doc["agreeable_implies_uniform"] = *report.agreeable_implies_uniform;
  if (report.oracle_agrees) doc["oracle_agrees"] = *report.oracle_agrees;
  if (report.literal_clause) {
    doc["literal_clause"] = *report.literal_clause;
    doc["literal_gaps"] = witnesses(report.literal_gaps);
  }
  if (report.union_size) doc["union_size"] = *report.union_size;
  if (report.bound) doc["bound"] = *report.bound;
  return doc;
}

json tree_to_json(const TreeNode& tree) {
  json children = json::object();
  for (const auto& [key, child] : tree.children) children[key] = tree_to_json(child);
  return {{"states", tree.states}, {"new_terms", terms_to_json(tree.new_terms)}, {"children", children}};
}

json trace_to_json(const Trace& trace) {
  json entries = json::array();
  for (const TraceEntry& e : trace.entries)
    entries.push_back({{"state", state_to_json(e.state)},
                       {"outcome", outcome_to_json(e.outcome)},
                       {"gamma", explore_set_to_json(e.gamma)}});
  return {{"steps", trace.steps}, {"stop", stop_reason_name(trace.reason)}, {"entries", entries}};
}

}  // namespace exact_asm::io
