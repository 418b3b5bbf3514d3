#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exact_asm/program.hpp"
#include "exact_asm/structure.hpp"
#include "exact_asm/term.hpp"

namespace exact_asm {

// Codomain of the effective update function: an update set, a halt
// (success or clash), or the black hole.
class UpdateOutcome {
 public:
  enum class Kind { Updates, HaltSuccess, HaltClash, BlackHole };

  static UpdateOutcome updates(UpdateSet u) { return UpdateOutcome(Kind::Updates, std::move(u)); }
  static UpdateOutcome halt_success() { return UpdateOutcome(Kind::HaltSuccess, {}); }
  static UpdateOutcome halt_clash() { return UpdateOutcome(Kind::HaltClash, {}); }
  static UpdateOutcome black_hole() { return UpdateOutcome(Kind::BlackHole, {}); }

  Kind kind() const { return kind_; }
  bool is_halt() const { return kind_ == Kind::HaltSuccess || kind_ == Kind::HaltClash; }
  // Empty unless kind() == Updates.
  const UpdateSet& update_set() const { return updates_; }

  // "{F(0)↦0, j↦2}", "halt", "clash", "•".
  std::string str() const;

  friend bool operator==(const UpdateOutcome&, const UpdateOutcome&) = default;

 private:
  UpdateOutcome(Kind kind, UpdateSet u) : kind_(kind), updates_(std::move(u)) {}
  Kind kind_;
  UpdateSet updates_;
};

const char* kind_name(UpdateOutcome::Kind kind);  // "updates", "halt-success", ...
std::optional<UpdateOutcome::Kind> parse_kind(std::string_view name);

// How a term is used: Discrimination (conditions, queries), Content
// (assigned values), Address (argument positions and all subterms).
enum Role : std::uint8_t { kRoleD = 1, kRoleC = 2, kRoleA = 4 };
std::string role_string(std::uint8_t roles);  // e.g. "DA"

struct ExploreEntry {
  Term term;
  std::uint8_t roles = 0;
};

// Explored terms with their access roles, closed under subterms. The
// distinguished constants (true, false, undef, and any other K constant)
// are implicitly explored everywhere and are not stored.
class ExploreSet {
 public:
  // Entries in canonical term order.
  const std::vector<ExploreEntry>& entries() const { return entries_; }
  TermSet terms() const;
  std::uint8_t roles(Term t) const;  // 0 when absent
  bool contains(Term t) const { return roles(t) != 0; }
  // Terms in the order they were first demanded, before subterm closure.
  const std::vector<Term>& demanded() const { return demanded_; }

  friend bool operator==(const ExploreSet& a, const ExploreSet& b) {
    return a.terms() == b.terms();
  }

 private:
  friend class Interpreter;
  std::vector<ExploreEntry> entries_;
  std::vector<Term> demanded_;
};

// Result of interpreting a program on one state in one pass.
struct Evaluation {
  // Proposed updates, possibly containing clashing pairs; nullopt = •.
  std::optional<UpdateSet> proposed;
  UpdateOutcome outcome = UpdateOutcome::halt_success();
  ExploreSet gamma;
};

Evaluation evaluate(const Program& p, const PartialStructure& state, bool with_clash_terms = false);

std::optional<UpdateSet> proposed_updates(const Program& p, const PartialStructure& state);
UpdateOutcome update_set(const Program& p, const PartialStructure& state);
ExploreSet explore_set(const Program& p, const PartialStructure& state,
                       bool with_clash_terms = false);

// Classifies a proposed update set: • if absent, success halt if empty,
// clash halt if inconsistent, else the non-trivial updates.
UpdateOutcome outcome_of(const std::optional<UpdateSet>& proposed, const PartialStructure& state);

struct StepResult {
  UpdateOutcome outcome;
  std::optional<PartialStructure> next;  // set iff outcome is Updates
};

StepResult step(const Program& p, const PartialStructure& state);

struct TraceEntry {
  PartialStructure state;
  UpdateOutcome outcome;
  ExploreSet gamma;
};

enum class StopReason { Halt, BlackHole, Budget, SelfLoop };
const char* stop_reason_name(StopReason r);

struct Trace {
  std::vector<TraceEntry> entries;
  std::size_t steps = 0;  // transitions taken
  StopReason reason = StopReason::Budget;
  const PartialStructure& final_state() const { return entries.back().state; }
};

Trace run(const Program& p, const PartialStructure& initial, std::size_t max_steps,
          bool with_clash_terms = false);

// Drops distinguished constants from a term set and closes it under
// subterms: the normal form in which explore sets are stored and compared.
TermSet normalize_explore_terms(const TermSet& terms, const Vocabulary& vocabulary);

// The locations behind an explore set: terms headed by not/and/or are
// replaced by their arguments (recursively), then the result is normalized.
// Explore sets of equivalent programs are compared in this form.
TermSet observable_terms(const TermSet& terms, const Vocabulary& vocabulary);

}  // namespace exact_asm
