#include "exact_asm/synthesis.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "exact_asm/error.hpp"

namespace exact_asm {

namespace {

constexpr std::size_t kMaxWitnessCombinations = 200000;

bool smaller(Term a, Term b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// Explore terms first (smallest first), then the distinguished constants.
std::vector<Term> candidate_terms(const TermSet& gamma, const Vocabulary& vocabulary) {
  std::vector<Term> out(gamma.begin(), gamma.end());
  std::sort(out.begin(), out.end(), smaller);
  std::vector<std::string> constants = vocabulary.distinguished();
  std::sort(constants.begin(), constants.end());
  for (const std::string& c : constants) out.push_back(Term::make(c));
  return out;
}

class Memo {
 public:
  explicit Memo(std::size_t n) : cache_(n) {}
  EvalResult operator()(std::size_t i, const PartialStructure& s, Term t) {
    auto& m = cache_[i];
    if (auto it = m.find(t); it != m.end()) return it->second;
    EvalResult r = eval_term(s, t);
    m.emplace(t, r);
    return r;
  }

 private:
  std::vector<std::unordered_map<Term, EvalResult>> cache_;
};

// Enumerates assignments f(s1..sn) := t over the candidates whose terms
// evaluate to the update's arguments and value in `state`, in candidate
// order, until `accept` returns true. Values come from `value_of`.
std::optional<Assign> search_witness(const Update& update,
                                     const std::vector<Term>& candidates,
                                     const std::function<EvalResult(Term)>& value_of,
                                     const std::function<bool(const Assign&)>& accept) {
  const std::size_t arity = update.location.args.size();
  std::vector<std::vector<Term>> options(arity + 1);
  for (Term c : candidates) {
    EvalResult r = value_of(c);
    if (r.hangs()) continue;
    for (std::size_t k = 0; k < arity; ++k)
      if (r.value() == update.location.args[k]) options[k].push_back(c);
    if (r.value() == update.value) options[arity].push_back(c);
  }
  for (const auto& o : options)
    if (o.empty()) return std::nullopt;
  std::vector<std::size_t> digits(arity + 1, 0);
  for (std::size_t tried = 0; tried < kMaxWitnessCombinations; ++tried) {
    std::vector<Term> args;
    for (std::size_t k = 0; k < arity; ++k) args.push_back(options[k][digits[k]]);
    Assign a{update.location.symbol, std::move(args), options[arity][digits[arity]]};
    if (accept(a)) return a;
    std::size_t k = digits.size();
    bool carry = true;
    while (carry && k > 0) {
      --k;
      carry = ++digits[k] == options[k].size();
      if (carry) digits[k] = 0;
    }
    if (carry) break;
  }
  return std::nullopt;
}

std::string value_label(EvalResult r) { return r.hangs() ? "\xE2\x80\xA2" : r.value().name(); }

TermSet assignment_terms(const std::vector<Assign>& assigns) {
  std::vector<Term> out;
  for (const Assign& a : assigns) {
    out.insert(out.end(), a.args.begin(), a.args.end());
    out.push_back(a.rhs);
  }
  return TermSet(std::move(out)).closed();
}

Program block_of(const std::vector<Assign>& assigns) {
  if (assigns.size() == 1) return Program{assigns.front()};
  std::vector<Program> children;
  for (const Assign& a : assigns) children.push_back(Program{a});
  return Program::par(std::move(children));
}

class Synthesizer {
 public:
  Synthesizer(const AlgorithmSpec& spec, SynthesisForm form)
      : spec_(spec), form_(form), memo_(spec.size()) {
    for (const SpecState& s : spec.states()) {
      if (s.delta.kind() == UpdateOutcome::Kind::HaltClash)
        throw SynthesisError("state '" + s.name + "' ends in a clash; only clash-free "
                             "specifications can be synthesized");
      observable_.push_back(observable_terms(s.gamma, spec.vocabulary()));
    }
  }

  SynthesisResult run() {
    std::vector<std::size_t> all(spec_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    TreeNode root;
    Program p = build(all, TermSet(), TermSet(), root);
    return {std::move(p), std::move(root)};
  }

 private:
  EvalResult eval(std::size_t i, Term t) { return memo_(i, spec_[i].state, t); }

  bool is_true(std::size_t i, EvalResult r) {
    return !r.hangs() && r.value() == spec_[i].state.true_value();
  }
  bool is_false(std::size_t i, EvalResult r) {
    return !r.hangs() && r.value() == spec_[i].state.false_value();
  }

  // A case query outside the distinguished values hangs the whole case.
  bool hangs_as_query(std::size_t i, EvalResult r) {
    return r.hangs() ||
           (form_ == SynthesisForm::Case && !spec_[i].state.is_distinguished_value(r.value()));
  }

  // Whether a disagreed term can drive a split. Hangs are allowed in
  // black-hole states: they hang on every branch condition.
  bool splittable(const std::vector<std::size_t>& members, Term t) {
    for (std::size_t i : members) {
      EvalResult r = eval(i, t);
      if (hangs_as_query(i, r)) {
        if (spec_[i].delta.kind() != UpdateOutcome::Kind::BlackHole) return false;
        continue;
      }
      if (form_ == SynthesisForm::If && !is_true(i, r) && !is_false(i, r)) return false;
    }
    return true;
  }

  // If-form only: a non-Boolean term that hangs in some members, all of them
  // black holes, still separates those members through the guard
  // `t or not t`, which holds wherever t is defined.
  bool definedness_splittable(const std::vector<std::size_t>& members, Term t) {
    if (form_ != SynthesisForm::If) return false;
    bool some = false;
    for (std::size_t i : members) {
      if (!eval(i, t).hangs()) continue;
      if (spec_[i].delta.kind() != UpdateOutcome::Kind::BlackHole) return false;
      some = true;
    }
    return some;
  }

  std::string constant_for(std::size_t i, Value v) {
    for (const std::string& c : spec_.vocabulary().distinguished())
      if (spec_[i].state.constant(c) == v) return c;
    throw SynthesisError("value '" + v.name() + "' is not distinguished");
  }

  Program build(const std::vector<std::size_t>& members, const TermSet& ancestor_common,
                const TermSet& explored, TreeNode& node) {
    for (std::size_t i : members) node.states.push_back(spec_[i].name);
    TermSet common = observable_[members.front()];
    for (std::size_t i : members) common = common.intersect(observable_[i]);
    node.new_terms = common.minus(ancestor_common);

    std::vector<Term> split;
    std::vector<bool> by_definedness;
    std::optional<Term> blocked;
    for (Term t : common) {
      EvalResult first = eval(members.front(), t);
      bool disagreed = false;
      for (std::size_t i : members) disagreed = disagreed || eval(i, t) != first;
      if (!disagreed) continue;
      if (splittable(members, t)) {
        split.push_back(t);
        by_definedness.push_back(false);
      } else if (definedness_splittable(members, t)) {
        split.push_back(t);
        by_definedness.push_back(true);
      } else if (!blocked)
        blocked = t;
    }
    if (split.empty()) return leaf(members, common, explored, blocked);

    struct Class {
      std::vector<EvalResult> values;
      std::vector<std::size_t> members;
      bool hangs = false;
    };
    std::map<std::vector<std::string>, Class> classes;
    for (std::size_t i : members) {
      std::vector<std::string> key;
      std::vector<EvalResult> values;
      for (std::size_t k = 0; k < split.size(); ++k) {
        values.push_back(eval(i, split[k]));
        key.push_back(by_definedness[k] && !values.back().hangs() ? "defined"
                                                                  : value_label(values.back()));
      }
      Class& c = classes[key];
      c.values = values;
      c.members.push_back(i);
      c.hangs = std::any_of(values.begin(), values.end(),
                            [&](EvalResult r) { return hangs_as_query(i, r); });
    }

    TermSet explored_below = explored.unite(TermSet(split).closed());
    std::vector<Program> branches;
    std::vector<CaseRow> rows;
    for (auto& [key, cls] : classes) {
      std::string label;
      for (std::size_t k = 0; k < split.size(); ++k)
        label += (k ? "," : "") + split[k].str() + "=" + key[k];
      TreeNode& child = node.children[label];
      if (cls.hangs) {
        // Evaluating the branch conditions already hangs in these states.
        child.states.clear();
        for (std::size_t i : cls.members) child.states.push_back(spec_[i].name);
        TermSet c = observable_[cls.members.front()];
        for (std::size_t i : cls.members) c = c.intersect(observable_[i]);
        child.new_terms = c.minus(common);
        continue;
      }
      Program body = build(cls.members, common, explored_below, child);
      std::size_t rep = cls.members.front();
      if (form_ == SynthesisForm::If) {
        std::vector<Term> literals;
        for (std::size_t k = 0; k < split.size(); ++k) {
          if (by_definedness[k])
            literals.push_back(Term::make(kOr, {split[k], negation(split[k])}));
          else
            literals.push_back(is_true(rep, cls.values[k]) ? split[k] : negation(split[k]));
        }
        branches.push_back(Program::guarded(conjunction(literals), std::move(body)));
      } else {
        std::vector<std::string> literals;
        for (std::size_t k = 0; k < split.size(); ++k)
          literals.push_back(constant_for(rep, cls.values[k].value()));
        rows.push_back(CaseRow{std::move(literals), std::move(body)});
      }
    }
    if (form_ == SynthesisForm::If) {
      if (branches.empty()) branches.push_back(Program::guarded(conjunction(split), Program::skip()));
      return Program::par(std::move(branches));
    }
    if (rows.empty())
      rows.push_back(CaseRow{std::vector<std::string>(split.size(), "undef"), Program::skip()});
    return Program::cases(split, std::move(rows));
  }

  // Whether the assignment, in every listed state, either proposes one of
  // that state's updates or rewrites a location Δ leaves alone with its
  // current value. Either way it cannot clash with the other assignments.
  bool good_everywhere(const Assign& a, const std::vector<std::size_t>& states) {
    for (std::size_t i : states) {
      auto u = fire(i, a);
      if (!u) return false;
      const UpdateSet& d = spec_[i].delta.update_set();
      auto same_location = std::find_if(d.begin(), d.end(),
                                        [&](const Update& x) { return x.location == u->location; });
      if (same_location != d.end()) {
        if (!(*same_location == *u)) return false;
        continue;
      }
      EvalResult current = spec_[i].state.lookup(u->location);
      if (current.hangs() || current.value() != u->value) return false;
    }
    return true;
  }

  std::optional<Update> fire(std::size_t i, const Assign& a) {
    Tuple args;
    for (Term s : a.args) {
      EvalResult r = eval(i, s);
      if (r.hangs()) return std::nullopt;
      args.push_back(r.value());
    }
    EvalResult r = eval(i, a.rhs);
    if (r.hangs()) return std::nullopt;
    return Update{Location{a.symbol, std::move(args)}, r.value()};
  }

  std::vector<Assign> choose_assignments(const std::vector<std::size_t>& live, const TermSet& gamma) {
    std::vector<Term> candidates = candidate_terms(gamma, spec_.vocabulary());
    std::vector<Assign> chosen;
    for (std::size_t i : live) {
      for (const Update& u : spec_[i].delta.update_set()) {
        bool covered = std::any_of(chosen.begin(), chosen.end(),
                                   [&](const Assign& a) { return fire(i, a) == u; });
        if (covered) continue;
        auto w = search_witness(
            u, candidates, [&](Term t) { return eval(i, t); },
            [&](const Assign& a) { return good_everywhere(a, live); });
        if (!w)
          throw SynthesisError("no assignment over the explore terms of state '" + spec_[i].name +
                               "' yields the update " + u.location.str() + "\xE2\x86\xA6" +
                               u.value.name() + " consistently across its class");
        chosen.push_back(*w);
      }
    }
    if (chosen.empty()) {
      // Non-halting but no effective updates: a rewrite of some location
      // with the value it already holds.
      std::size_t i = live.front();
      for (const Symbol& s : spec_.vocabulary().symbols()) {
        if (s.kind != SymbolKind::Dynamic) continue;
        for (const auto& [args, value] : spec_[i].state.table(s.name)) {
          auto w = search_witness(
              Update{Location{s.name, args}, value}, candidates,
              [&](Term t) { return eval(i, t); },
              [&](const Assign& a) { return good_everywhere(a, live); });
          if (w) return {*w};
        }
      }
      throw SynthesisError("state '" + spec_[i].name +
                           "' neither halts nor updates, and no trivial rewrite over its "
                           "explore terms exists");
    }
    std::sort(chosen.begin(), chosen.end(),
              [](const Assign& a, const Assign& b) { return a.lhs() < b.lhs() || (a.lhs() == b.lhs() && a.rhs < b.rhs); });
    return chosen;
  }

  // A guard conjunct that holds in every live state and explores t.
  Term guard_literal(Term t, const std::vector<std::size_t>& live) {
    bool all_true = true, none_true = true;
    for (std::size_t i : live) {
      EvalResult r = eval(i, t);
      all_true = all_true && is_true(i, r);
      none_true = none_true && !is_true(i, r);
    }
    if (all_true) return t;
    if (none_true) return negation(t);
    return Term::make(kOr, {t, negation(t)});
  }

  Program leaf(const std::vector<std::size_t>& members, const TermSet& common,
               const TermSet& explored, std::optional<Term> blocked) {
    std::vector<std::size_t> live, dead;
    for (std::size_t i : members)
      (spec_[i].delta.kind() == UpdateOutcome::Kind::BlackHole ? dead : live).push_back(i);

    TermSet target = common;
    std::vector<Assign> assigns;
    if (!live.empty()) {
      target = observable_[live.front()];
      for (std::size_t i : live) {
        if (observable_[i] != target) {
          std::string why = blocked ? "term " + blocked->str() + " separates them but is not " +
                                          (form_ == SynthesisForm::If ? "true/false-valued"
                                                                      : "distinguished-valued")
                                    : "no explored term separates them";
          throw SynthesisError("states '" + spec_[live.front()].name + "' and '" + spec_[i].name +
                               "' have different explore sets; " + why);
        }
        if (spec_[i].delta.is_halt() != spec_[live.front()].delta.is_halt())
          throw SynthesisError("states '" + spec_[live.front()].name + "' and '" + spec_[i].name +
                               "' cannot be separated but only one of them halts");
      }
      if (!spec_[live.front()].delta.is_halt()) assigns = choose_assignments(live, target);
    }

    TermSet covered = explored.unite(assignment_terms(assigns));
    std::vector<Term> pending = target.minus(covered).items();
    std::sort(pending.begin(), pending.end(), [](Term a, Term b) { return smaller(b, a); });
    std::vector<Term> conjuncts;
    TermSet guarded;
    for (Term t : pending) {
      if (guarded.contains(t)) continue;
      conjuncts.push_back(t);
      guarded = guarded.unite(TermSet({t}).closed());
    }

    auto assemble = [&](std::vector<Term> terms) {
      std::sort(terms.begin(), terms.end());
      Program body = assigns.empty() ? Program::skip() : block_of(assigns);
      if (terms.empty()) return body;
      std::vector<Term> literals;
      for (Term t : terms) literals.push_back(guard_literal(t, live));
      return Program::guarded(conjunction(literals), std::move(body));
    };

    Program p = assemble(conjuncts);
    auto failure = verify(p, members, explored);
    if (failure && !dead.empty()) {
      // Make the black-hole states hang in the guard.
      for (Term h : common) {
        bool hangs_dead = std::all_of(dead.begin(), dead.end(),
                                      [&](std::size_t i) { return eval(i, h).hangs(); });
        bool defined_live = std::none_of(live.begin(), live.end(),
                                         [&](std::size_t i) { return eval(i, h).hangs(); });
        if (!hangs_dead || !defined_live) continue;
        std::vector<Term> with = conjuncts;
        if (std::find(with.begin(), with.end(), h) == with.end()) with.push_back(h);
        Program q = assemble(with);
        if (!verify(q, members, explored)) return q;
      }
    }
    if (failure) throw SynthesisError(*failure);
    return p;
  }

  // nullopt when p, preceded by the enclosing branch conditions (whose
  // terms are `explored`), reproduces Δ and the observable Γ on every member.
  std::optional<std::string> verify(const Program& p, const std::vector<std::size_t>& members,
                                    const TermSet& explored) {
    for (std::size_t i : members) {
      Evaluation ev = evaluate(p, spec_[i].state);
      if (ev.outcome != spec_[i].delta)
        return "leaf program yields " + ev.outcome.str() + " instead of " +
               spec_[i].delta.str() + " in state '" + spec_[i].name + "'";
      if (ev.outcome.kind() != UpdateOutcome::Kind::BlackHole &&
          observable_terms(ev.gamma.terms().unite(explored), spec_.vocabulary()) != observable_[i])
        return "leaf program explores different terms in state '" + spec_[i].name + "'";
    }
    return std::nullopt;
  }

  const AlgorithmSpec& spec_;
  SynthesisForm form_;
  Memo memo_;
  std::vector<TermSet> observable_;
};

}  // namespace

std::vector<Program> update_witnesses(const PartialStructure& state, const TermSet& gamma,
                                      const UpdateSet& updates) {
  std::vector<Term> candidates = candidate_terms(gamma, state.vocabulary());
  std::vector<Program> out;
  for (const Update& u : updates) {
    auto w = search_witness(
        u, candidates, [&](Term t) { return eval_term(state, t); },
        [](const Assign&) { return true; });
    if (!w)
      throw SynthesisError("no explore terms evaluate to the arguments and value of update " +
                           u.location.str() + "\xE2\x86\xA6" + u.value.name());
    out.push_back(Program{*w});
  }
  return out;
}

SynthesisResult synthesize_with_tree(const AlgorithmSpec& spec, SynthesisForm form) {
  return Synthesizer(spec, form).run();
}

Program synthesize(const AlgorithmSpec& spec, SynthesisForm form) {
  return synthesize_with_tree(spec, form).program;
}

TreeNode build_tree(const AlgorithmSpec& spec, SynthesisForm form) {
  return synthesize_with_tree(spec, form).tree;
}

CheckReport check_equivalence(const Program& p, const AlgorithmSpec& spec) {
  CheckReport report;
  report.postulate = "equivalence";
  for (const SpecState& s : spec.states()) {
    Evaluation ev = evaluate(p, s.state);
    if (ev.outcome != s.delta) {
      report.fail(Witness{{s.name}, {},
                          "program yields " + ev.outcome.str() + ", specification " + s.delta.str()});
      continue;
    }
    if (s.delta.kind() == UpdateOutcome::Kind::BlackHole) continue;
    TermSet got = observable_terms(ev.gamma.terms(), spec.vocabulary());
    TermSet want = observable_terms(s.gamma, spec.vocabulary());
    if (got != want) {
      TermSet diff = got.minus(want).unite(want.minus(got));
      report.fail(Witness{{s.name}, diff.items(), "explore sets differ"});
    }
  }
  return report;
}

}  // namespace exact_asm
