#include "exact_asm/spec.hpp"

#include <set>
#include <unordered_set>

#include "exact_asm/error.hpp"

namespace exact_asm {

AlgorithmSpec::AlgorithmSpec(std::vector<SpecState> states) : states_(std::move(states)) {
  if (states_.empty()) throw SpecificationError("a specification needs at least one state");
  vocabulary_ = states_.front().state.vocabulary_ptr();
  std::set<std::string> names;
  for (SpecState& s : states_) {
    if (!names.insert(s.name).second)
      throw SpecificationError("duplicate state name '" + s.name + "'");
    if (s.state.vocabulary_ptr() != vocabulary_ && !(s.state.vocabulary() == *vocabulary_))
      throw SpecificationError("state '" + s.name + "' uses a different vocabulary");
    for (Term t : s.gamma) vocabulary_->check(t);
    s.gamma = normalize_explore_terms(s.gamma, *vocabulary_);
    if (s.state.flags().terminal != s.delta.is_halt())
      throw SpecificationError("state '" + s.name + "' is " +
                               (s.state.flags().terminal ? "terminal" : "not terminal") +
                               " but its update outcome is " + s.delta.str());
  }
}

const SpecState* AlgorithmSpec::find(std::string_view name) const {
  for (const SpecState& s : states_)
    if (s.name == name) return &s;
  return nullptr;
}

AlgorithmSpec AlgorithmSpec::subset(const std::vector<std::size_t>& indices) const {
  std::vector<SpecState> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(states_.at(i));
  return AlgorithmSpec(std::move(out));
}

AlgorithmSpec spec_from_program(const Program& p, const std::vector<PartialStructure>& states,
                                const std::vector<std::string>& names) {
  if (!names.empty() && names.size() != states.size())
    throw SpecificationError("state names do not match the state list");
  std::vector<SpecState> rows;
  rows.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    check_program(p, states[i].vocabulary());
    Evaluation ev = evaluate(p, states[i]);
    StateFlags flags = states[i].flags();
    flags.terminal = ev.outcome.is_halt();
    rows.push_back(SpecState{names.empty() ? "s" + std::to_string(i) : names[i],
                             states[i].with_flags(flags), ev.gamma.terms(), ev.outcome});
  }
  return AlgorithmSpec(std::move(rows));
}

std::vector<PartialStructure> enumerate_states(const std::vector<EnumerationBlock>& blocks,
                                               std::size_t limit) {
  std::size_t total = 0;
  for (const EnumerationBlock& b : blocks) {
    std::size_t product = 1;
    for (const VariedLocation& v : b.vary) {
      if (v.values.empty()) {
        product = 0;
        break;
      }
      if (product > limit / v.values.size() + 1) {
        product = limit + 1;
        break;
      }
      product *= v.values.size();
    }
    total += product;
    if (total > limit)
      throw SpecificationError("enumeration yields more than " + std::to_string(limit) +
                               " states");
  }

  std::vector<PartialStructure> out;
  std::unordered_set<std::string> seen;
  for (const EnumerationBlock& b : blocks) {
    std::vector<std::size_t> digits(b.vary.size(), 0);
    bool empty = false;
    for (const VariedLocation& v : b.vary) empty = empty || v.values.empty();
    if (empty) continue;
    while (true) {
      PartialStructure s = b.base_state;
      for (std::size_t k = 0; k < b.vary.size(); ++k)
        s = s.with_location(b.vary[k].location, b.vary[k].values[digits[k]]);
      if (seen.insert(state_fingerprint(s)).second) out.push_back(std::move(s));
      std::size_t k = digits.size();
      bool carry = true;
      while (carry && k > 0) {
        --k;
        carry = ++digits[k] == b.vary[k].values.size();
        if (carry) digits[k] = 0;
      }
      if (carry) break;
    }
  }
  return out;
}

std::vector<PartialStructure> reachable_states(const Program& p,
                                               const std::vector<PartialStructure>& candidates,
                                               const std::vector<PartialStructure>& initial) {
  std::unordered_set<std::string> visited;
  for (const PartialStructure& start : initial) {
    PartialStructure current = start;
    while (visited.insert(state_fingerprint(current)).second) {
      StepResult r = step(p, current);
      if (!r.next) break;
      current = *r.next;
    }
  }
  std::vector<PartialStructure> out;
  for (const PartialStructure& c : candidates)
    if (visited.count(state_fingerprint(c))) out.push_back(c);
  return out;
}

std::string state_fingerprint(const PartialStructure& state) {
  std::string key;
  for (Value v : state.base()) key += std::to_string(v.id()) + ',';
  for (std::size_t i = 0; i < state.vocabulary().symbols().size(); ++i) {
    key += '|';
    for (const auto& [args, value] : state.table(i)) {
      for (Value a : args) key += std::to_string(a.id()) + ' ';
      key += '>' + std::to_string(value.id()) + ';';
    }
  }
  return key;
}

}  // namespace exact_asm
