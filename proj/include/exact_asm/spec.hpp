#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exact_asm/program.hpp"
#include "exact_asm/semantics.hpp"
#include "exact_asm/structure.hpp"

namespace exact_asm {

// One row of a behavioral table.
struct SpecState {
  std::string name;
  PartialStructure state;
  TermSet gamma;  // normalized: subterm-closed, no distinguished constants
  UpdateOutcome delta;
};

// Finite behavioral specification: states with their explore sets and
// update outcomes, all over one vocabulary.
class AlgorithmSpec {
 public:
  // Normalizes every explore set and validates the table. Throws
  // SpecificationError on duplicate names, mixed vocabularies, unknown
  // symbols in explore terms, or terminal flags that disagree with Δ
  // (terminal iff Δ is a halt).
  explicit AlgorithmSpec(std::vector<SpecState> states);

  const Vocabulary& vocabulary() const { return *vocabulary_; }
  const VocabularyPtr& vocabulary_ptr() const { return vocabulary_; }
  const std::vector<SpecState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  const SpecState& operator[](std::size_t i) const { return states_[i]; }
  const SpecState* find(std::string_view name) const;

  // A spec with the same vocabulary restricted to the given state indices.
  AlgorithmSpec subset(const std::vector<std::size_t>& indices) const;

 private:
  VocabularyPtr vocabulary_;
  std::vector<SpecState> states_;
};

// Runs the interpreter on every state. State names default to s0, s1, ...
// Terminal flags are set exactly on halting states; initial flags are kept.
AlgorithmSpec spec_from_program(const Program& p, const std::vector<PartialStructure>& states,
                                const std::vector<std::string>& names = {});

// Cartesian enumeration: each block varies some locations of a template
// state over listed values (nullopt = undefined point).
struct VariedLocation {
  Location location;
  std::vector<std::optional<Value>> values;
};

struct EnumerationBlock {
  PartialStructure base_state;
  std::vector<VariedLocation> vary;
};

inline constexpr std::size_t kMaxEnumeratedStates = 100000;

// Throws SpecificationError if the product exceeds `limit`. Duplicate
// states are dropped; order follows the blocks, last location varying
// fastest.
std::vector<PartialStructure> enumerate_states(const std::vector<EnumerationBlock>& blocks,
                                               std::size_t limit = kMaxEnumeratedStates);

// Keeps the candidates visited by running p from any of `initial`.
std::vector<PartialStructure> reachable_states(const Program& p,
                                               const std::vector<PartialStructure>& candidates,
                                               const std::vector<PartialStructure>& initial);

// Stable textual key identifying a state's interpretation.
std::string state_fingerprint(const PartialStructure& state);

}  // namespace exact_asm
