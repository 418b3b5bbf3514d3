#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "exact_asm/postulates.hpp"
#include "exact_asm/program.hpp"
#include "exact_asm/spec.hpp"

namespace exact_asm {

enum class SynthesisForm { If, Case };

// One call of the recursive construction.
struct TreeNode {
  std::vector<std::string> states;
  TermSet new_terms;  // common explore terms not already common at an ancestor
  // Keyed by the split values, e.g. "d=true" or "c=false,b=true".
  std::map<std::string, TreeNode> children;
};

struct SynthesisResult {
  Program program;
  TreeNode tree;
};

// For each update f(a1..an)↦b of the state, an assignment f(s1..sn) := t
// whose terms come from `gamma` or are distinguished constants and evaluate
// to a1..an and b in the state. Candidates are tried smallest first, ties
// broken by printed form. Throws SynthesisError if some update has no
// witness.
std::vector<Program> update_witnesses(const PartialStructure& state, const TermSet& gamma,
                                      const UpdateSet& updates);

// Builds a program equivalent to the spec on its states. Explore sets are
// compared in observable form (see observable_terms). Throws SynthesisError
// for clash outcomes, for sets of states that can be neither split on
// true/false-valued (or distinguished-valued, for the case form) terms nor
// served by one guarded block, and when an update has no witness. In the
// if form a term that hangs only in black-hole states splits on
// definedness, guarded by `t or not t`.
SynthesisResult synthesize_with_tree(const AlgorithmSpec& spec, SynthesisForm form);
Program synthesize(const AlgorithmSpec& spec, SynthesisForm form = SynthesisForm::If);
TreeNode build_tree(const AlgorithmSpec& spec, SynthesisForm form = SynthesisForm::If);

// Same update outcome on every state, and the same observable explore set
// wherever the outcome is not the black hole.
CheckReport check_equivalence(const Program& p, const AlgorithmSpec& spec);

}  // namespace exact_asm
