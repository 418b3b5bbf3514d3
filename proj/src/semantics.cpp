#include "exact_asm/semantics.hpp"

#include <algorithm>
#include <map>

#include "exact_asm/error.hpp"

namespace exact_asm {

std::string UpdateOutcome::str() const {
  switch (kind_) {
    case Kind::HaltSuccess:
      return "halt";
    case Kind::HaltClash:
      return "clash";
    case Kind::BlackHole:
      return "\xE2\x80\xA2";
    case Kind::Updates:
      break;
  }
  std::string out = "{";
  for (std::size_t i = 0; i < updates_.size(); ++i) {
    if (i) out += ", ";
    out += updates_[i].location.str() + "\xE2\x86\xA6" + updates_[i].value.name();
  }
  return out + "}";
}

const char* kind_name(UpdateOutcome::Kind kind) {
  switch (kind) {
    case UpdateOutcome::Kind::Updates:
      return "updates";
    case UpdateOutcome::Kind::HaltSuccess:
      return "halt-success";
    case UpdateOutcome::Kind::HaltClash:
      return "halt-clash";
    case UpdateOutcome::Kind::BlackHole:
      return "black-hole";
  }
  return "?";
}

std::optional<UpdateOutcome::Kind> parse_kind(std::string_view name) {
  for (auto k : {UpdateOutcome::Kind::Updates, UpdateOutcome::Kind::HaltSuccess,
                 UpdateOutcome::Kind::HaltClash, UpdateOutcome::Kind::BlackHole})
    if (name == kind_name(k)) return k;
  return std::nullopt;
}

std::string role_string(std::uint8_t roles) {
  std::string out;
  if (roles & kRoleD) out += 'D';
  if (roles & kRoleC) out += 'C';
  if (roles & kRoleA) out += 'A';
  return out;
}

TermSet ExploreSet::terms() const {
  std::vector<Term> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.term);
  return TermSet(std::move(out));
}

std::uint8_t ExploreSet::roles(Term t) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                             [](const ExploreEntry& e, Term x) { return e.term < x; });
  return it != entries_.end() && it->term == t ? it->roles : 0;
}

// One pass over a program in one state: proposed updates and explore set.
class Interpreter {
 public:
  Interpreter(const PartialStructure& state) : state_(state) {}

  Evaluation run(const Program& p, bool with_clash_terms) {
    bool ok = visit(p);
    Evaluation out;
    if (ok) {
      if (with_clash_terms) add_clash_terms();
      out.proposed = make_update_set(std::move(updates_));
    }
    out.outcome = outcome_of(out.proposed, state_);
    out.gamma = finish();
    return out;
  }

 private:
  struct Fired {
    const Assign* assign;
    Tuple args;
  };

  // Records the term as demanded and evaluates it; false on a hang.
  bool demand(Term t, Role role, EvalResult& result) {
    note(t, role);
    result = eval_term(state_, t);
    return !result.hangs();
  }

  void note(Term t, Role role) {
    auto [it, inserted] = roles_.try_emplace(t, 0);
    it->second |= role;
    if (inserted) order_.push_back(t);
  }

  bool visit(const Program& p) {
    return std::visit([this](const auto& n) { return visit_node(n); }, p.node);
  }

  bool visit_node(const Assign& a) {
    Tuple args;
    EvalResult r = EvalResult::hang();
    for (Term s : a.args) {
      if (!demand(s, kRoleA, r)) return false;
      args.push_back(r.value());
    }
    if (!demand(a.rhs, kRoleC, r)) return false;
    updates_.push_back(Update{Location{a.symbol, args}, r.value()});
    fired_.push_back(Fired{&a, std::move(args)});
    return true;
  }

  bool visit_node(const Par& par) {
    for (const Program& c : par.children)
      if (!visit(c)) return false;
    return true;
  }

  bool visit_node(const If& g) {
    EvalResult r = EvalResult::hang();
    if (!demand(g.cond, kRoleD, r)) return false;
    // Any value other than the true element leaves the body unexplored.
    if (r.value() != state_.true_value()) return true;
    return visit(*g.body);
  }

  bool visit_node(const Case& c) {
    Tuple answers;
    EvalResult r = EvalResult::hang();
    for (Term q : c.queries) {
      if (!demand(q, kRoleD, r)) return false;
      if (!state_.is_distinguished_value(r.value())) return false;
      answers.push_back(r.value());
    }
    for (const CaseRow& row : c.rows) {
      bool match = true;
      for (std::size_t i = 0; i < row.literals.size() && match; ++i)
        match = state_.constant(row.literals[i]) == answers[i];
      if (match && !visit(*row.body)) return false;
    }
    return true;
  }

  // Equality tests implicit in detecting clashes between fired assignments
  // to the same symbol.
  void add_clash_terms() {
    auto ordered_eq = [](Term a, Term b) { return a < b ? equals(a, b) : equals(b, a); };
    for (std::size_t i = 0; i < fired_.size(); ++i) {
      for (std::size_t j = i + 1; j < fired_.size(); ++j) {
        const Assign& a = *fired_[i].assign;
        const Assign& b = *fired_[j].assign;
        if (a.symbol != b.symbol || a.rhs == b.rhs) continue;
        for (std::size_t k = 0; k < a.args.size(); ++k)
          if (a.args[k] != b.args[k]) note(ordered_eq(a.args[k], b.args[k]), kRoleD);
        if (fired_[i].args == fired_[j].args) note(ordered_eq(a.rhs, b.rhs), kRoleD);
      }
    }
  }

  ExploreSet finish() {
    const Vocabulary& vocab = state_.vocabulary();
    ExploreSet out;
    std::map<Term, std::uint8_t> closed;
    for (Term t : order_) {
      if (!vocab.is_distinguished(t)) out.demanded_.push_back(t);
      closed[t] |= roles_[t];
      for (Term s : t.subterms())
        if (s != t) closed[s] |= kRoleA;
    }
    for (auto [t, r] : closed)
      if (!vocab.is_distinguished(t)) out.entries_.push_back(ExploreEntry{t, r});
    return out;
  }

  const PartialStructure& state_;
  std::map<Term, std::uint8_t> roles_;
  std::vector<Term> order_;
  std::vector<Update> updates_;
  std::vector<Fired> fired_;
};

UpdateOutcome outcome_of(const std::optional<UpdateSet>& proposed, const PartialStructure& state) {
  if (!proposed) return UpdateOutcome::black_hole();
  if (proposed->empty()) return UpdateOutcome::halt_success();
  if (has_clash(*proposed)) return UpdateOutcome::halt_clash();
  UpdateSet effective;
  for (const Update& u : *proposed) {
    EvalResult current = state.lookup(u.location);
    if (current.hangs() || current.value() != u.value) effective.push_back(u);
  }
  return UpdateOutcome::updates(std::move(effective));
}

Evaluation evaluate(const Program& p, const PartialStructure& state, bool with_clash_terms) {
  return Interpreter(state).run(p, with_clash_terms);
}

std::optional<UpdateSet> proposed_updates(const Program& p, const PartialStructure& state) {
  return evaluate(p, state).proposed;
}

UpdateOutcome update_set(const Program& p, const PartialStructure& state) {
  return evaluate(p, state).outcome;
}

ExploreSet explore_set(const Program& p, const PartialStructure& state, bool with_clash_terms) {
  return evaluate(p, state, with_clash_terms).gamma;
}

StepResult step(const Program& p, const PartialStructure& state) {
  UpdateOutcome outcome = update_set(p, state);
  if (outcome.kind() != UpdateOutcome::Kind::Updates) return {outcome, std::nullopt};
  return {outcome, apply_updates(state, outcome.update_set())};
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Halt:
      return "halt";
    case StopReason::BlackHole:
      return "black-hole";
    case StopReason::Budget:
      return "budget";
    case StopReason::SelfLoop:
      return "self-loop";
  }
  return "?";
}

Trace run(const Program& p, const PartialStructure& initial, std::size_t max_steps,
          bool with_clash_terms) {
  Trace trace;
  PartialStructure current = initial;
  while (true) {
    Evaluation ev = evaluate(p, current, with_clash_terms);
    UpdateOutcome outcome = ev.outcome;
    trace.entries.push_back(TraceEntry{current, outcome, std::move(ev.gamma)});
    if (outcome.is_halt()) {
      trace.reason = StopReason::Halt;
      break;
    }
    if (outcome.kind() == UpdateOutcome::Kind::BlackHole) {
      trace.reason = StopReason::BlackHole;
      break;
    }
    if (trace.steps == max_steps) {
      trace.reason = StopReason::Budget;
      break;
    }
    PartialStructure next = apply_updates(current, outcome.update_set());
    ++trace.steps;
    if (next.same_interpretation(current)) {
      trace.reason = StopReason::SelfLoop;
      break;
    }
    current = std::move(next);
  }
  return trace;
}

TermSet normalize_explore_terms(const TermSet& terms, const Vocabulary& vocabulary) {
  std::vector<Term> out;
  TermSet closed = terms.closed();
  for (Term t : closed.items())
    if (!vocabulary.is_distinguished(t)) out.push_back(t);
  return TermSet(std::move(out));
}

TermSet observable_terms(const TermSet& terms, const Vocabulary& vocabulary) {
  std::vector<Term> out;
  std::vector<Term> stack(terms.items().begin(), terms.items().end());
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    if (is_connective(t.head()))
      stack.insert(stack.end(), t.args().begin(), t.args().end());
    else
      out.push_back(t);
  }
  return normalize_explore_terms(TermSet(std::move(out)), vocabulary);
}

}  // namespace exact_asm
