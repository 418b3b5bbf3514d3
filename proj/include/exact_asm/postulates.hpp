#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exact_asm/spec.hpp"

namespace exact_asm {

// A counterexample: the states involved, the terms at issue, and a
// human-readable explanation.
struct Witness {
  std::vector<std::string> states;
  std::vector<Term> terms;
  std::string message;
};

// Strict partial order on one state's explore set, stored as its transitive
// closure: (lower, upper) means lower precedes upper.
using DiscriminationOrder = std::vector<std::pair<Term, Term>>;

struct CheckReport {
  std::string postulate;
  bool passed = true;
  std::vector<Witness> witnesses;

  // Discrimination: per-state orders (on pass) and whether every set of
  // states reached by the partition recursion that is agreeable is also
  // uniform, independently of how the literal clause fares.
  std::map<std::string, DiscriminationOrder> orders;
  std::optional<bool> agreeable_implies_uniform;
  // Set when the exhaustive subset oracle was run.
  std::optional<bool> oracle_agrees;
  // Discrimination, once the recursion passes: whether every absence is
  // also explained by an earlier term with opposite admissible values. A
  // disagreement between non-Boolean values satisfies the recursion but not
  // this clause; gaps are listed without failing the check.
  std::optional<bool> literal_clause;
  std::vector<Witness> literal_gaps;

  // Limitation.
  std::optional<std::size_t> union_size;
  std::optional<std::size_t> bound;

  void fail(Witness w) {
    passed = false;
    witnesses.push_back(std::move(w));
  }
};

// Values admitted as discriminating: the true/false elements only, or any
// two distinct values of distinguished constants.
enum class DiscriminationValues { Boolean, Distinguished };

struct CheckOptions {
  DiscriminationValues values = DiscriminationValues::Boolean;
  bool oracle_subsets = false;       // cross-check with subset enumeration
  std::size_t oracle_max_states = 12;
  std::size_t isomorphism_limit = 1024;
};

// Equal update outcomes up to trivial updates: same kind, no location set
// to two values between them, and every update of one outcome is in the
// other or already holds in the other's state.
// Stripping trivial updates makes Δ depend on locations that are written
// but never read, so outcomes of agreeing states are compared this way.
bool same_outcome(const UpdateOutcome& a, const PartialStructure& x, const UpdateOutcome& b,
                  const PartialStructure& y);

// X =_{Γ(X)} Y implies Δ(X) = Δ(Y) (see same_outcome) and Γ(X) = Γ(Y).
CheckReport check_determination(const AlgorithmSpec& spec);

// Partition recursion: splits each non-uniform set of states by the values
// of the terms all its members explore; an agreeable non-uniform set fails.
// On success the clause itself is checked for each state, first against the
// order the recursion induces and, if that is too coarse, against the
// layered order of when each term's absence elsewhere becomes explained.
// A term that hangs in one of two states discriminates them.
CheckReport check_discrimination(const AlgorithmSpec& spec, const CheckOptions& options = {});

// Reports |⋃Γ| and the bound max |Γ(X)|; always passes on a finite table.
CheckReport check_limitation(const AlgorithmSpec& spec);

// Updates stay inside the base set and touch only dynamic symbols; every
// isomorphism found between two states carries Δ across and leaves Γ fixed.
CheckReport check_abstract_state(const AlgorithmSpec& spec, const CheckOptions& options = {});

// Determination, discrimination, limitation, abstract-state, in that order.
std::vector<CheckReport> check_all(const AlgorithmSpec& spec, const CheckOptions& options = {});

// Independent oracle: enumerates every subset of states and returns the
// first agreeable subset that is not uniform, as state indices. Throws
// ContractViolation above `max_states` states.
std::optional<std::vector<std::size_t>> find_agreeable_nonuniform_subset(
    const AlgorithmSpec& spec, std::size_t max_states = 12);

// Whether the states' common explore terms take equal values in all of
// them (vacuously so for an empty intersection).
bool is_agreeable(const AlgorithmSpec& spec, const std::vector<std::size_t>& indices);
bool is_uniform(const AlgorithmSpec& spec, const std::vector<std::size_t>& indices);

// Equips every state with Γ(X) = closure(critical). Throws
// SpecificationError naming two states that agree on the critical terms
// but have different update outcomes.
AlgorithmSpec classical_to_exacting(const AlgorithmSpec& spec, const TermSet& critical);

}  // namespace exact_asm
