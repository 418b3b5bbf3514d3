#include "exact_asm/postulates.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "exact_asm/error.hpp"

namespace exact_asm {

namespace {

constexpr std::size_t kMaxWitnesses = 20;

// Memoized term values per spec state.
class EvalCache {
 public:
  explicit EvalCache(const AlgorithmSpec& spec) : spec_(spec), cache_(spec.size()) {}

  EvalResult operator()(std::size_t state, Term t) {
    auto& m = cache_[state];
    auto it = m.find(t);
    if (it != m.end()) return it->second;
    EvalResult r = eval_term(spec_[state].state, t);
    m.emplace(t, r);
    return r;
  }

  bool agree(std::size_t x, std::size_t y, const TermSet& terms) {
    for (Term t : terms)
      if ((*this)(x, t) != (*this)(y, t)) return false;
    return true;
  }

  // Key identifying the vector of values of `terms` in a state.
  std::string key(std::size_t state, const TermSet& terms) {
    std::string out;
    for (Term t : terms) {
      EvalResult r = (*this)(state, t);
      out += r.hangs() ? std::string("#") : std::to_string(r.value().id());
      out += ',';
    }
    return out;
  }

 private:
  const AlgorithmSpec& spec_;
  std::vector<std::unordered_map<Term, EvalResult>> cache_;
};

TermSet common_terms(const AlgorithmSpec& spec, const std::vector<std::size_t>& members) {
  TermSet common = spec[members.front()].gamma;
  for (std::size_t i = 1; i < members.size(); ++i) common = common.intersect(spec[members[i]].gamma);
  return common;
}

bool uniform(const AlgorithmSpec& spec, const std::vector<std::size_t>& members) {
  for (std::size_t i : members)
    if (spec[i].gamma != spec[members.front()].gamma) return false;
  return true;
}

std::vector<std::string> names_of(const AlgorithmSpec& spec, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (std::size_t i : idx) out.push_back(spec[i].name);
  return out;
}

void add_witness(CheckReport& report, Witness w) {
  report.passed = false;
  if (report.witnesses.size() < kMaxWitnesses) report.witnesses.push_back(std::move(w));
}

std::vector<std::size_t> all_indices(const AlgorithmSpec& spec) {
  std::vector<std::size_t> out(spec.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

class PartitionRecursion {
 public:
  PartitionRecursion(const AlgorithmSpec& spec, EvalCache& eval, CheckReport& report)
      : spec_(spec), eval_(eval), report_(report), pairs_(spec.size()) {}

  void run() { visit(all_indices(spec_)); }

  std::vector<std::set<std::pair<Term, Term>>>& pairs() { return pairs_; }

 private:
  void visit(const std::vector<std::size_t>& members) {
    if (uniform(spec_, members)) return;
    TermSet common = common_terms(spec_, members);
    std::map<std::string, std::vector<std::size_t>> classes;
    for (std::size_t i : members) classes[eval_.key(i, common)].push_back(i);
    if (classes.size() == 1) {
      report_.agreeable_implies_uniform = false;
      add_witness(report_, Witness{names_of(spec_, members), common.items(),
                                   "states agree on every common explore term but their "
                                   "explore sets differ"});
      return;
    }
    for (std::size_t i : members)
      for (Term t : spec_[i].gamma.minus(common))
        for (Term s : common) pairs_[i].emplace(s, t);
    for (const auto& [key, cls] : classes) visit(cls);
  }

  const AlgorithmSpec& spec_;
  EvalCache& eval_;
  CheckReport& report_;
  std::vector<std::set<std::pair<Term, Term>>> pairs_;
};

std::set<std::pair<Term, Term>> transitive_closure(std::set<std::pair<Term, Term>> pairs) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<Term, Term>> extra;
    for (const auto& [a, b] : pairs)
      for (auto it = pairs.lower_bound({b, b}); it != pairs.end() && it->first == b; ++it)
        if (!pairs.count({a, it->second})) extra.emplace_back(a, it->second);
    for (auto& p : extra) changed = pairs.insert(p).second || changed;
  }
  return pairs;
}

}  // namespace

bool is_agreeable(const AlgorithmSpec& spec, const std::vector<std::size_t>& indices) {
  if (indices.empty()) return true;
  TermSet common = common_terms(spec, indices);
  for (std::size_t i : indices)
    if (!agree(spec[indices.front()].state, spec[i].state, common.items())) return false;
  return true;
}

bool is_uniform(const AlgorithmSpec& spec, const std::vector<std::size_t>& indices) {
  return indices.empty() || uniform(spec, indices);
}

bool same_outcome(const UpdateOutcome& a, const PartialStructure& x, const UpdateOutcome& b,
                  const PartialStructure& y) {
  if (a.kind() != b.kind()) return false;
  auto covered = [](const UpdateSet& from, const UpdateSet& into, const PartialStructure& state) {
    for (const Update& u : from) {
      if (std::binary_search(into.begin(), into.end(), u)) continue;
      EvalResult held = state.lookup(u.location);
      if (held.hangs() || held.value() != u.value) return false;
    }
    return true;
  };
  UpdateSet both = a.update_set();
  both.insert(both.end(), b.update_set().begin(), b.update_set().end());
  return !has_clash(make_update_set(std::move(both))) &&
         covered(a.update_set(), b.update_set(), y) && covered(b.update_set(), a.update_set(), x);
}

CheckReport check_determination(const AlgorithmSpec& spec) {
  CheckReport report;
  report.postulate = "determination";
  EvalCache eval(spec);
  for (std::size_t x = 0; x < spec.size(); ++x) {
    for (std::size_t y = 0; y < spec.size(); ++y) {
      if (x == y || !eval.agree(x, y, spec[x].gamma)) continue;
      if (!same_outcome(spec[x].delta, spec[x].state, spec[y].delta, spec[y].state))
        add_witness(report, Witness{{spec[x].name, spec[y].name}, spec[x].gamma.items(),
                                    "states agree on the explore set of the first but have "
                                    "different update outcomes (" +
                                        spec[x].delta.str() + " vs " + spec[y].delta.str() + ")"});
      else if (spec[x].gamma != spec[y].gamma)
        add_witness(report, Witness{{spec[x].name, spec[y].name},
                                    spec[x].gamma.minus(spec[y].gamma)
                                        .unite(spec[y].gamma.minus(spec[x].gamma))
                                        .items(),
                                    "states agree on the explore set of the first but have "
                                    "different explore sets"});
    }
  }
  return report;
}

CheckReport check_discrimination(const AlgorithmSpec& spec, const CheckOptions& options) {
  CheckReport report;
  report.postulate = "discrimination";
  report.agreeable_implies_uniform = true;
  EvalCache eval(spec);
  PartitionRecursion recursion(spec, eval, report);
  recursion.run();

  if (options.oracle_subsets) {
    if (spec.size() > options.oracle_max_states) {
      report.oracle_agrees.reset();
    } else {
      bool oracle_ok = !find_agreeable_nonuniform_subset(spec, options.oracle_max_states);
      report.oracle_agrees = oracle_ok == *report.agreeable_implies_uniform;
    }
  }
  if (!report.passed) return report;

  std::vector<std::set<std::pair<Term, Term>>> closed;
  for (auto& p : recursion.pairs()) closed.push_back(transitive_closure(p));

  // A term that hangs in only one state separates the two whatever the other
  // value is: the hang itself cuts exploration short.
  auto admissible = [&](std::size_t i, EvalResult r) {
    if (options.values == DiscriminationValues::Boolean)
      return r.value() == spec[i].state.true_value() || r.value() == spec[i].state.false_value();
    return spec[i].state.is_distinguished_value(r.value());
  };
  auto discriminates = [&](std::size_t x, std::size_t y, Term s) {
    EvalResult a = eval(x, s), b = eval(y, s);
    if (a == b) return false;
    if (a.hangs() || b.hangs()) return true;
    return admissible(x, a) && admissible(y, b);
  };

  auto explained = [&](std::size_t x, const std::set<std::pair<Term, Term>>& order) {
    for (std::size_t y = 0; y < spec.size(); ++y) {
      if (x == y) continue;
      for (Term t : spec[x].gamma.minus(spec[y].gamma)) {
        bool found = false;
        for (const auto& [s, u] : order) {
          if (u == t && discriminates(x, y, s)) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
    }
    return true;
  };

  // The recursion order can be too coarse when classes are split on several
  // terms at once. Layering terms by when their absences become explained
  // finds an order whenever one exists: a minimal unexplained term of any
  // valid order is always placeable.
  auto layered = [&](std::size_t x, std::vector<Term>& stuck) {
    std::vector<Term> pending = spec[x].gamma.items();
    std::vector<std::vector<Term>> layers;
    std::vector<Term> placed;
    while (!pending.empty()) {
      std::vector<Term> layer, rest;
      for (Term t : pending) {
        bool ready = true;
        for (std::size_t y = 0; y < spec.size() && ready; ++y) {
          if (y == x || spec[y].gamma.contains(t)) continue;
          ready = std::any_of(placed.begin(), placed.end(),
                              [&](Term s) { return discriminates(x, y, s); });
        }
        (ready ? layer : rest).push_back(t);
      }
      if (layer.empty()) break;
      placed.insert(placed.end(), layer.begin(), layer.end());
      layers.push_back(std::move(layer));
      pending = std::move(rest);
    }
    stuck = std::move(pending);
    std::set<std::pair<Term, Term>> order;
    for (std::size_t i = 0; i < layers.size(); ++i)
      for (std::size_t j = i + 1; j < layers.size(); ++j)
        for (Term a : layers[i])
          for (Term b : layers[j]) order.emplace(a, b);
    return order;
  };

  report.literal_clause = true;
  for (std::size_t x = 0; x < spec.size(); ++x) {
    if (explained(x, closed[x])) continue;
    std::vector<Term> stuck;
    auto refined = layered(x, stuck);
    if (stuck.empty()) {
      closed[x] = std::move(refined);
      continue;
    }
    report.literal_clause = false;
    for (Term t : stuck) {
      std::vector<std::string> names{spec[x].name};
      for (std::size_t y = 0; y < spec.size(); ++y)
        if (y != x && !spec[y].gamma.contains(t) &&
            std::none_of(refined.begin(), refined.end(),
                         [&](const auto& pr) { return discriminates(x, y, pr.first); }))
          names.push_back(spec[y].name);
      if (report.literal_gaps.size() >= kMaxWitnesses) break;
      report.literal_gaps.push_back(Witness{std::move(names), {t},
                                  "no earlier term with opposite " +
                                      std::string(options.values == DiscriminationValues::Boolean
                                                      ? "truth values"
                                                      : "distinguished values") +
                                      " explains why only the first state explores " + t.str()});
    }
  }
  for (std::size_t x = 0; x < spec.size(); ++x)
    report.orders[spec[x].name] = DiscriminationOrder(closed[x].begin(), closed[x].end());
  return report;
}

CheckReport check_limitation(const AlgorithmSpec& spec) {
  CheckReport report;
  report.postulate = "limitation";
  TermSet all;
  std::size_t bound = 0;
  for (const SpecState& s : spec.states()) {
    all = all.unite(s.gamma);
    bound = std::max(bound, s.gamma.size());
  }
  report.union_size = all.size();
  report.bound = bound;
  return report;
}

CheckReport check_abstract_state(const AlgorithmSpec& spec, const CheckOptions& options) {
  CheckReport report;
  report.postulate = "abstract-state";
  const Vocabulary& vocab = spec.vocabulary();
  for (const SpecState& s : spec.states()) {
    for (const Update& u : s.delta.update_set()) {
      const Symbol* sym = vocab.find(u.location.symbol);
      std::string problem;
      if (!sym)
        problem = "unknown symbol";
      else if (sym->kind != SymbolKind::Dynamic)
        problem = "update of a static symbol";
      else if (sym->arity != u.location.args.size())
        problem = "wrong number of arguments";
      for (Value a : u.location.args)
        if (problem.empty() && !s.state.in_base(a)) problem = "argument outside the base set";
      if (problem.empty() && !s.state.in_base(u.value)) problem = "value outside the base set";
      if (!problem.empty())
        add_witness(report, Witness{{s.name}, {}, problem + " in update " + u.location.str() +
                                                      "\xE2\x86\xA6" + u.value.name()});
    }
  }
  for (std::size_t x = 0; x < spec.size(); ++x) {
    for (std::size_t y = x; y < spec.size(); ++y) {
      auto isos = isomorphisms(spec[x].state, spec[y].state, options.isomorphism_limit);
      if (isos.empty()) continue;
      if (spec[x].gamma != spec[y].gamma) {
        add_witness(report, Witness{{spec[x].name, spec[y].name}, {},
                                    "isomorphic states with different explore sets"});
        continue;
      }
      for (const Bijection& iso : isos) {
        const UpdateOutcome& dx = spec[x].delta;
        const UpdateOutcome& dy = spec[y].delta;
        bool same = dx.kind() == dy.kind();
        if (same) {
          std::vector<Update> mapped;
          for (const Update& u : dx.update_set()) mapped.push_back(iso(u));
          same = make_update_set(std::move(mapped)) == dy.update_set();
        }
        if (!same) {
          add_witness(report, Witness{{spec[x].name, spec[y].name}, {},
                                      "an isomorphism does not carry " + dx.str() + " to " +
                                          dy.str()});
          break;
        }
      }
    }
  }
  return report;
}

std::vector<CheckReport> check_all(const AlgorithmSpec& spec, const CheckOptions& options) {
  return {check_determination(spec), check_discrimination(spec, options), check_limitation(spec),
          check_abstract_state(spec, options)};
}

std::optional<std::vector<std::size_t>> find_agreeable_nonuniform_subset(
    const AlgorithmSpec& spec, std::size_t max_states) {
  const std::size_t n = spec.size();
  if (n > max_states)
    throw ContractViolation("subset oracle supports at most " + std::to_string(max_states) +
                            " states");
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) members.push_back(i);
    if (members.size() < 2) continue;
    if (is_agreeable(spec, members) && !is_uniform(spec, members)) return members;
  }
  return std::nullopt;
}

AlgorithmSpec classical_to_exacting(const AlgorithmSpec& spec, const TermSet& critical) {
  TermSet gamma = normalize_explore_terms(critical, spec.vocabulary());
  std::vector<SpecState> rows = spec.states();
  for (SpecState& row : rows) row.gamma = gamma;
  AlgorithmSpec out(std::move(rows));
  EvalCache eval(out);
  for (std::size_t x = 0; x < out.size(); ++x)
    for (std::size_t y = x + 1; y < out.size(); ++y)
      if (eval.agree(x, y, gamma) &&
          !same_outcome(out[x].delta, out[x].state, out[y].delta, out[y].state))
        throw SpecificationError("states '" + out[x].name + "' and '" + out[y].name +
                                 "' agree on every critical term but have different update "
                                 "outcomes");
  return out;
}

}  // namespace exact_asm
