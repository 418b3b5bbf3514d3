#pragma once

#include <filesystem>

#include <json.hpp>

#include "exact_asm/postulates.hpp"
#include "exact_asm/semantics.hpp"
#include "exact_asm/spec.hpp"
#include "exact_asm/synthesis.hpp"

// JSON forms of the library's data. Malformed documents raise FormatError;
// well-formed documents describing invalid structures raise
// SpecificationError; unparsable term strings raise ParseError.
namespace exact_asm::io {

using nlohmann::json;

// {"vocabulary": [{"name","arity","kind"}...], "distinguished": [...],
//  "base": [...], "interp": {"f": [[["e0"],"e1"], ...], "c": "e2"},
//  "flags": {"initial": bool, "terminal": bool}}
// Builtin symbols and default interpretations may be omitted. When
// `shared` describes the same vocabulary it is reused.
PartialStructure state_from_json(const json& doc, const VocabularyPtr& shared = nullptr);
json state_to_json(const PartialStructure& state);

VocabularyPtr vocabulary_from_json(const json& doc);

json outcome_to_json(const UpdateOutcome& outcome);
UpdateOutcome outcome_from_json(const json& doc);

json explore_set_to_json(const ExploreSet& gamma);
json terms_to_json(const TermSet& terms);

// {"states": [state | "path.json", ...], "gamma": {name: [term, ...]},
//  "delta": {name: outcome}}. Inline states may carry a "name"; others
// are named s0, s1, ... Paths are resolved against base_dir. Terminal flags
// that are not given explicitly follow Δ.
AlgorithmSpec spec_from_json(const json& doc, const std::filesystem::path& base_dir = {});
json spec_to_json(const AlgorithmSpec& spec);

// {"blocks": [{"template": state | "path", "vary": [{"location": ["F", ["0"]],
//  "values": ["0", "1", null]}]}]}; null means undefined.
std::vector<EnumerationBlock> enumeration_from_json(const json& doc,
                                                    const std::filesystem::path& base_dir = {});

// A JSON array of states (inline or paths), or a single state object.
std::vector<PartialStructure> states_from_json(const json& doc,
                                               const std::filesystem::path& base_dir = {});
// The "name" of each inline state, or s0, s1, ... where none is given.
std::vector<std::string> state_names_from_json(const json& doc);

json report_to_json(const CheckReport& report);
json tree_to_json(const TreeNode& tree);
json trace_to_json(const Trace& trace);

// Reads and parses a JSON file; FormatError on I/O or syntax errors.
json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace exact_asm::io
