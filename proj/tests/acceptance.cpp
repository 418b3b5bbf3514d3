// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "exact_asm/fixtures.hpp"
#include "exact_asm/postulates.hpp"
#include "exact_asm/synthesis.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace exact_asm;
namespace fx = exact_asm::fixtures;

namespace {

constexpr int kRandomPrograms = 500;
constexpr int kSynthesisSpecs = 200;
constexpr std::size_t kOracleStates = 12;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (passed) detail << what;
    passed = false;
  }
};

struct Criterion {
  int id;
  const char* title;
  double seconds;  // 0 = no time bound
  std::function<void(Outcome&)> body;
};

Value num(int k) { return Value::named(std::to_string(k)); }

int read_int(const PartialStructure& s, const std::string& text) {
  return std::stoi(eval_term(s, parse_term(text, &s.vocabulary())).value().name());
}

std::vector<testgen::RandomCase> random_suite() {
  std::vector<testgen::RandomCase> cases;
  for (int k = 0; k < kRandomPrograms; ++k) cases.push_back(testgen::ProgramGenerator(k + 1).next());
  return cases;
}

const std::vector<testgen::RandomCase>& suite() {
  static const std::vector<testgen::RandomCase> cases = random_suite();
  return cases;
}

AlgorithmSpec sorting_spec() {
  auto vocab = fx::sorting_vocabulary();
  return spec_from_program(parse_program(fx::kSortingProgram, vocab.get()), fx::sorting_states({2, 3}, 3));
}

// Table row of a sorting state: 0 halt, 1 advance i, 2 swap, 3 advance j.
int sorting_row(const PartialStructure& s) {
  int n = read_int(s, "n"), i = read_int(s, "i"), j = read_int(s, "j");
  if (j == n) return n == i + 1 ? 0 : 1;
  return read_int(s, "F(i)") > read_int(s, "F(j)") ? 2 : 3;
}

UpdateOutcome sorting_expected(const PartialStructure& s) {
  int i = read_int(s, "i"), j = read_int(s, "j");
  std::vector<Update> u;
  switch (sorting_row(s)) {
    case 0:
      return UpdateOutcome::halt_success();
    case 1:
      u.push_back({Location{"i", {}}, num(i + 1)});
      if (i + 2 != j) u.push_back({Location{"j", {}}, num(i + 2)});
      break;
    case 2: {
      int fi = read_int(s, "F(i)"), fj = read_int(s, "F(j)");
      u.push_back({Location{"F", {num(i)}}, num(fj)});
      u.push_back({Location{"F", {num(j)}}, num(fi)});
      u.push_back({Location{"j", {}}, num(j + 1)});
      break;
    }
    default:
      u.push_back({Location{"j", {}}, num(j + 1)});
  }
  return UpdateOutcome::updates(make_update_set(u));
}

bool has_pair(const DiscriminationOrder& order, const char* lower, const char* upper) {
  return std::find(order.begin(), order.end(), std::pair{parse_term(lower), parse_term(upper)}) !=
         order.end();
}

AlgorithmSpec named_spec(std::string_view source,
                         const std::vector<std::pair<std::string, PartialStructure>>& named) {
  std::vector<PartialStructure> states;
  std::vector<std::string> names;
  for (const auto& [n, s] : named) {
    names.push_back(n);
    states.push_back(s);
  }
  Program p = parse_program(source, states.front().vocabulary_ptr().get());
  return spec_from_program(p, states, names);
}

AlgorithmSpec subset_of(const AlgorithmSpec& spec, std::size_t limit, std::uint64_t seed) {
  std::vector<std::size_t> idx(spec.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(std::min(limit, idx.size()));
  std::sort(idx.begin(), idx.end());
  return spec.subset(idx);
}

void table_one(Outcome& out) {
  auto vocab = fx::sorting_vocabulary();
  Program p = parse_program(fx::kSortingProgram, vocab.get());
  auto states = fx::sorting_states({2, 3}, 3);
  int rows[4] = {0, 0, 0, 0};
  for (const PartialStructure& s : states) {
    ++rows[sorting_row(s)];
    UpdateOutcome got = update_set(p, s);
    out.expect(got == sorting_expected(s), "outcome mismatch at n=" + std::to_string(read_int(s, "n")) +
                                               " i=" + std::to_string(read_int(s, "i")) +
                                               " j=" + std::to_string(read_int(s, "j")));
  }
  for (int r = 0; r < 4; ++r) out.expect(rows[r] > 0, "row " + std::to_string(r) + " never occurs");
  out.detail << states.size() << " states, rows " << rows[0] << "/" << rows[1] << "/" << rows[2] << "/"
             << rows[3];
}

void table_two(Outcome& out) {
  AlgorithmSpec spec = sorting_spec();
  const Vocabulary& v = spec.vocabulary();
  auto row_terms = [&](std::vector<const char*> texts) {
    std::vector<Term> ts;
    for (const char* t : texts) ts.push_back(parse_term(t));
    return normalize_explore_terms(TermSet(std::move(ts)), v);
  };
  TermSet base = row_terms({"j != n", "j = n and i+1 != n"});
  TermSet advance = row_terms({"j != n", "j = n and i+1 != n", "i+2"});
  TermSet compare = row_terms({"j != n", "j = n and i+1 != n", "F(i) > F(j)", "j+1"});
  CheckReport r = check_discrimination(spec);
  out.expect(r.passed, "discrimination fails");
  for (const SpecState& s : spec.states()) {
    int row = sorting_row(s.state);
    const TermSet& want = row == 0 ? base : row == 1 ? advance : compare;
    out.expect(s.gamma == want, "explore set mismatch in " + s.name);
    if (!r.passed) continue;
    const DiscriminationOrder& order = r.orders.at(s.name);
    if (row == 1) out.expect(has_pair(order, "j = n and i+1 != n", "i+2"), "missing row 1 pair in " + s.name);
    if (row >= 2) {
      out.expect(has_pair(order, "j != n", "F(i) > F(j)"), "missing comparison pair in " + s.name);
      out.expect(has_pair(order, "j != n", "j+1"), "missing increment pair in " + s.name);
    }
  }
  out.detail << spec.size() << " states";
}

void worked_run(Outcome& out) {
  auto vocab = fx::sorting_vocabulary();
  Program p = parse_program(fx::kSortingProgram, vocab.get());
  Trace t = run(p, fx::sorting_state(2, 0, 1, {1, 0}), 100);
  const PartialStructure& last = t.final_state();
  out.expect(t.reason == StopReason::Halt, "run did not halt");
  out.expect(t.entries.back().outcome == UpdateOutcome::halt_success(), "halt is not a success");
  out.expect(t.steps == 2, "expected 2 steps, got " + std::to_string(t.steps));
  out.expect(read_int(last, "j") == 2 && read_int(last, "n") == 2 && read_int(last, "i") == 1,
             "final counters wrong");
  auto cell = [&](int k) { return last.lookup(Location{"F", {num(k)}}); };
  out.expect(cell(0) == EvalResult(num(0)) && cell(1) == EvalResult(num(1)), "F not sorted");
  out.detail << t.steps << " steps";
}

void three_flags(Outcome& out) {
  auto named = fx::example6_states();
  const Vocabulary& v = named.front().second.vocabulary();
  Program p = parse_program(fx::kExample6Program, &v);
  for (const auto& [name, s] : named) {
    auto truth = [&](const char* t) { return eval_term(s, Term::make(t)).value() == s.true_value(); };
    bool d = truth("d"), c = truth("c"), b = truth("b");
    Value x = eval_term(s, Term::make("x")).value(), y = eval_term(s, Term::make("y")).value();
    std::vector<const char*> gamma{"d"};
    std::vector<Update> delta;
    if (d) {
      gamma.insert(gamma.end(), {"c", "b"});
      if (c && b) delta.push_back({Location{"s", {}}, x});
      if (!c) delta.push_back({Location{"t", {}}, x});
      if (!b) delta.push_back({Location{"s", {}}, y});
      if ((c && b) || !c) gamma.push_back("x");
      if (!b) gamma.push_back("y");
    }
    std::vector<Term> want;
    for (const char* g : gamma) want.push_back(Term::make(g));
    Evaluation e = evaluate(p, s);
    out.expect(observable_terms(e.gamma.terms(), v) == TermSet(want), "explore set mismatch in " + name);
    UpdateOutcome expected =
        delta.empty() ? UpdateOutcome::halt_success() : UpdateOutcome::updates(make_update_set(delta));
    out.expect(e.outcome == expected, "update set mismatch in " + name);
  }

  std::vector<PartialStructure> states;
  std::vector<std::string> names;
  for (const auto& [n, s] : named) {
    names.push_back(n);
    states.push_back(s);
  }
  AlgorithmSpec spec = spec_from_program(p, states, names);
  Program q = synthesize(spec);
  out.expect(check_equivalence(q, spec).passed, "synthesized program not equivalent");
  Program reference = parse_program(
      "[ if d then [ if c and b then s := x || if c and not b then s := y"
      " || if not c and b then t := x || if not c and not b then [ t := x || s := y ] ]"
      " || if not d then [ ] ]");
  out.expect(oracle::canonical(q) == oracle::canonical(reference), "program differs: " + print_program(q));
  out.detail << named.size() << " states";
}

void remark_three(Outcome& out) {
  AlgorithmSpec spec = fx::remark3_spec();
  CheckReport d = check_discrimination(spec);
  out.expect(!d.passed, "discrimination passed");
  out.expect(d.agreeable_implies_uniform == false, "no agreeable non-uniform set reported");
  if (!d.witnesses.empty()) {
    std::vector<std::string> w = d.witnesses.front().states;
    std::sort(w.begin(), w.end());
    out.expect(w == std::vector<std::string>{"X", "Y", "Z"}, "witness is not {X,Y,Z}");
  } else {
    out.expect(false, "no witness");
  }
  out.expect(check_determination(spec).passed, "determination failed");
  out.detail << "witness {X,Y,Z}";
}

void partiality(Outcome& out) {
  auto named = fx::partial_f_states();
  AlgorithmSpec spec = named_spec(fx::kPartialFProgram, named);
  const PartialStructure& at_a = spec.find("at-a")->state;
  Program source = parse_program(fx::kPartialFProgram, &at_a.vocabulary());
  Program normal = parse_program(fx::kPartialFNormalForm, &at_a.vocabulary());
  Program synthesized = synthesize(spec);
  out.expect(update_set(source, at_a) == UpdateOutcome::halt_success(), "program does not halt");
  out.expect(update_set(synthesized, at_a) == UpdateOutcome::halt_success(), "synthesized program does not halt");
  out.expect(update_set(normal, at_a) == UpdateOutcome::black_hole(), "normal form does not hang");
  out.detail << "synthesized: " << print_program(synthesized);
}

void random_postulates(Outcome& out) {
  int checked = 0;
  for (const auto& c : suite()) {
    AlgorithmSpec spec = spec_from_program(c.program, c.states);
    for (const CheckReport& r : {check_determination(spec), check_discrimination(spec), check_limitation(spec)})
      out.expect(r.passed && r.literal_clause != false,
                 r.postulate + " fails for seed " + std::to_string(c.seed) + "; ");
    ++checked;
  }
  out.detail << checked << " programs";
}

void random_synthesis(Outcome& out) {
  int if_form = 0, case_form = 0;
  auto both = [&](const AlgorithmSpec& spec, const std::string& label) {
    out.expect(check_equivalence(synthesize(spec), spec).passed, "if form fails for " + label + "; ");
    ++if_form;
    if (oracle::case_form_applicable(spec)) {
      out.expect(check_equivalence(synthesize(spec, SynthesisForm::Case), spec).passed,
                 "case form fails for " + label + "; ");
      ++case_form;
    }
  };
  for (int k = 0; k < kSynthesisSpecs; ++k) {
    const auto& c = suite()[static_cast<std::size_t>(k)];
    both(spec_from_program(c.program, c.states), "seed " + std::to_string(c.seed));
  }
  both(sorting_spec(), "sorting");
  both(fx::example6_spec(), "three flags");
  both(named_spec(fx::kPartialFProgram, fx::partial_f_states()), "partial function");
  // Discriminates only on distinguished constants, so the case form alone applies.
  AlgorithmSpec magic = named_spec(fx::kMagicCaseProgram, fx::magic_case_states());
  out.expect(check_equivalence(synthesize(magic, SynthesisForm::Case), magic).passed, "case form fails for magic case; ");
  ++case_form;
  out.detail << if_form << " if-form, " << case_form << " case-form";
}

void oracle_agreement(Outcome& out) {
  std::mt19937_64 rng(2024);
  int compared = 0, failing = 0;
  auto compare = [&](const AlgorithmSpec& spec, const std::string& label) {
    if (spec.size() > kOracleStates) return;
    bool expected = !oracle::agreeable_nonuniform_subset(spec).has_value();
    CheckReport r = check_discrimination(spec);
    out.expect(r.agreeable_implies_uniform == expected, "verdict differs for " + label + "; ");
    out.expect(r.passed == expected, "check differs for " + label + "; ");
    failing += !expected;
    ++compared;
  };
  for (const auto& c : suite()) {
    AlgorithmSpec spec = spec_from_program(c.program, c.states);
    std::string label = "seed " + std::to_string(c.seed);
    compare(spec, label);
    AlgorithmSpec small = subset_of(spec, kOracleStates, c.seed);
    compare(small, label + " subset");
    compare(oracle::perturbed(small, rng), label + " perturbed");
  }
  compare(fx::remark3_spec(), "remark3");
  compare(fx::example6_spec(), "three flags");
  out.detail << compared << " specs, " << failing << " non-discriminating";
}

void limitation_and_flatten(Outcome& out) {
  std::size_t pairs = 0, widest = 0;
  for (const auto& c : suite()) {
    AlgorithmSpec spec = spec_from_program(c.program, c.states);
    CheckReport r = check_limitation(spec);
    auto figures = oracle::limitation_figures(spec);
    std::string label = " for seed " + std::to_string(c.seed) + "; ";
    out.expect(r.passed && r.bound && r.union_size, "limitation not reported" + label);
    if (r.bound && r.union_size) {
      out.expect(*r.bound == figures.largest && *r.union_size == figures.union_size, "figures differ" + label);
      out.expect(*r.bound <= *r.union_size, "bound exceeds union" + label);
      widest = std::max(widest, *r.union_size);
    }
    Program flat = flatten(c.program);
    const Vocabulary& v = c.states.front().vocabulary();
    for (const PartialStructure& s : c.states) {
      Evaluation a = evaluate(c.program, s), b = evaluate(flat, s);
      out.expect(a.proposed == b.proposed, "flatten changes updates" + label);
      out.expect(observable_terms(a.gamma.terms(), v) == observable_terms(b.gamma.terms(), v),
                 "flatten changes explore set" + label);
      ++pairs;
    }
  }
  out.detail << pairs << " program/state pairs, largest union " << widest;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "sorting update sets match the case analysis", 5, table_one},
      {2, "sorting explore sets and orders", 5, table_two},
      {3, "worked sorting run", 0, worked_run},
      {4, "three-flag program: tables, synthesis, equivalence", 1, three_flags},
      {5, "non-discriminating table is rejected", 0, remark_three},
      {6, "partial function guard", 0, partiality},
      {7, "random programs satisfy the postulates", 60, random_postulates},
      {8, "synthesis round trip", 60, random_synthesis},
      {9, "discrimination checker agrees with subset enumeration", 0, oracle_agreement},
      {10, "limitation figures and flatten invariance", 0, limitation_and_flatten},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.expect(false, std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.seconds > 0 && seconds >= c.seconds) out.expect(false, "too slow; ");
    failures += !out.passed;
    std::printf("criterion %2d: %s  %s (%.2fs) %s\n", c.id, out.passed ? "PASS" : "FAIL", c.title, seconds,
                out.detail.str().c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
