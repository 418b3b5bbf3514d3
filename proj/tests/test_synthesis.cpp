#include <doctest.h>

#include "exact_asm/error.hpp"
#include "exact_asm/fixtures.hpp"
#include "exact_asm/synthesis.hpp"
#include "oracles.hpp"

using namespace exact_asm;
namespace fx = exact_asm::fixtures;

namespace {

AlgorithmSpec named_spec(const Program& p,
                         const std::vector<std::pair<std::string, PartialStructure>>& named) {
  std::vector<PartialStructure> states;
  std::vector<std::string> names;
  for (const auto& [n, s] : named) {
    names.push_back(n);
    states.push_back(s);
  }
  return spec_from_program(p, states, names);
}

AlgorithmSpec sorting_spec(std::vector<int> sizes = {2}) {
  auto vocab = fx::sorting_vocabulary();
  return spec_from_program(parse_program(fx::kSortingProgram, vocab.get()),
                           fx::sorting_states(sizes));
}

VocabularyPtr xy_vocabulary() {
  return std::make_shared<const Vocabulary>(
      std::vector<Symbol>{{"x", 0, SymbolKind::Dynamic}, {"y", 0, SymbolKind::Dynamic}},
      std::vector<std::string>{});
}

PartialStructure xy_state(const char* x, const char* y) {
  StructureBuilder b(xy_vocabulary(), {Value::named("true"), Value::named("false"),
                                       Value::named("undef"), Value::named("e0"),
                                       Value::named("e1")});
  return b.set("x", Value::named(x)).set("y", Value::named(y)).build();
}

std::vector<std::string> printed(const std::vector<Program>& ps) {
  std::vector<std::string> out;
  for (const Program& p : ps) out.push_back(print_program(p));
  return out;
}

// Every path's new terms, unioned, give each leaf state's observable Γ.
void check_accounting(const AlgorithmSpec& spec, const TreeNode& node, TermSet above) {
  TermSet here = above.unite(node.new_terms);
  if (node.children.empty()) {
    for (const std::string& name : node.states) {
      const SpecState* s = spec.find(name);
      REQUIRE(s != nullptr);
      if (s->delta.kind() == UpdateOutcome::Kind::BlackHole) continue;
      CHECK(here == observable_terms(s->gamma, spec.vocabulary()));
    }
  }
  for (const auto& [key, child] : node.children) {
    for (Term t : child.new_terms) CHECK_FALSE(here.contains(t));
    check_accounting(spec, child, here);
  }
}

}  // namespace

TEST_SUITE("synthesis") {
  TEST_CASE("update witnesses for the three-flag program") {
    AlgorithmSpec spec = fx::example6_spec();
    const SpecState* x = spec.find("X");
    REQUIRE(x != nullptr);
    auto w = update_witnesses(x->state, x->gamma, x->delta.update_set());
    CHECK(printed(w) == std::vector<std::string>{"s := x"});
  }

  TEST_CASE("update witnesses for the sorting swap match exhaustive search") {
    auto vocab = fx::sorting_vocabulary();
    Program p = parse_program(fx::kSortingProgram, vocab.get());
    // Values chosen so that no other explore term shares them.
    PartialStructure s = fx::sorting_state(2, 0, 1, {4, 3});
    TermSet gamma = explore_set(p, s).terms();
    UpdateSet all = update_set(p, s).update_set();
    auto w = update_witnesses(s, gamma, all);
    REQUIRE(w.size() == all.size());
    for (std::size_t k = 0; k < all.size(); ++k) {
      const Update& u = all[k];
      const auto& a = std::get<Assign>(w[k].node);
      // Exhaustive candidates over Γ: the chosen one must be among them.
      std::vector<Assign> valid;
      std::vector<Term> pool(gamma.begin(), gamma.end());
      for (Term rhs : pool) {
        if (eval_term(s, rhs) != EvalResult(u.value)) continue;
        if (u.location.args.empty()) {
          valid.push_back(Assign{u.location.symbol, {}, rhs});
          continue;
        }
        for (Term arg : pool)
          if (eval_term(s, arg) == EvalResult(u.location.args[0]))
            valid.push_back(Assign{u.location.symbol, {arg}, rhs});
      }
      CHECK(std::find(valid.begin(), valid.end(), a) != valid.end());
    }
    std::vector<std::string> text = printed(w);
    CHECK(std::find(text.begin(), text.end(), "F(i) := F(j)") != text.end());
    // The constant 1 precedes j among terms denoting index 1.
    CHECK(std::find(text.begin(), text.end(), "F(1) := F(i)") != text.end());
  }

  TEST_CASE("a single state needs its update's sources explored") {
    PartialStructure s = xy_state("e0", "e1");
    UpdateSet u = {{Location{"x", {}}, Value::named("e1")}};
    AlgorithmSpec blind({{"only", s, TermSet(), UpdateOutcome::updates(u)}});
    CHECK_THROWS_AS(synthesize(blind), SynthesisError);
    CHECK_THROWS_AS(update_witnesses(s, TermSet(), u), SynthesisError);

    AlgorithmSpec seeing({{"only", s, TermSet({Term::make("x"), Term::make("y")}),
                           UpdateOutcome::updates(u)}});
    Program p = synthesize(seeing);
    // The target of an assignment is not read, so a guard explores x.
    CHECK(print_program(p) == "if not x then x := y");
    CHECK(check_equivalence(p, seeing).passed);

    AlgorithmSpec source_only({{"only", s, TermSet({Term::make("y")}), UpdateOutcome::updates(u)}});
    CHECK(print_program(synthesize(source_only)) == "x := y");
  }

  TEST_CASE("three-flag program is rebuilt with one branch per assignment") {
    AlgorithmSpec spec = fx::example6_spec();
    Program p = synthesize(spec);
    CHECK(check_equivalence(p, spec).passed);
    Program expected = parse_program(
        "[ if d then [ if c and b then s := x || if c and not b then s := y"
        " || if not c and b then t := x || if not c and not b then [ t := x || s := y ] ]"
        " || if not d then [ ] ]");
    CHECK(oracle::canonical(p) == oracle::canonical(expected));
  }

  TEST_CASE("three-flag exploration tree") {
    TreeNode root = build_tree(fx::example6_spec());
    CHECK(root.new_terms == TermSet({Term::make("d")}));
    REQUIRE(root.children.size() == 2);
    const TreeNode& yes = root.children.at("d=true");
    CHECK(yes.new_terms == TermSet({Term::make("b"), Term::make("c")}));
    CHECK(yes.children.size() == 4);
    for (const auto& [key, leaf] : yes.children) CHECK(leaf.children.empty());
    const TreeNode& no = root.children.at("d=false");
    CHECK(no.children.empty());
    CHECK(no.states.size() == 4);
    check_accounting(fx::example6_spec(), root, TermSet());
  }

  TEST_CASE("uniform spec gives a single node") {
    AlgorithmSpec spec({{"a", xy_state("e0", "e1"), TermSet({Term::make("y")}),
                         UpdateOutcome::updates({{Location{"x", {}}, Value::named("e1")}})},
                        {"b", xy_state("e1", "e0"), TermSet({Term::make("y")}),
                         UpdateOutcome::updates({{Location{"x", {}}, Value::named("e0")}})}});
    TreeNode root = build_tree(spec);
    CHECK(root.children.empty());
    CHECK(root.states.size() == 2);
    CHECK(print_program(synthesize(spec)) == "x := y");
  }

  TEST_CASE("sorting tree and program") {
    AlgorithmSpec spec = sorting_spec({2, 3});
    auto vocab = fx::sorting_vocabulary();
    TreeNode root = build_tree(spec);
    TermSet guards({parse_term("j != n"), parse_term("j = n and i+1 != n")});
    CHECK(root.new_terms == observable_terms(guards, *vocab));
    check_accounting(spec, root, TermSet());
    CHECK(check_equivalence(synthesize(spec), spec).passed);
  }

  TEST_CASE("equivalence rejects the normal form that tests too much") {
    auto vocab = fx::sorting_vocabulary();
    AlgorithmSpec spec = sorting_spec();
    Program naive = parse_program(
        "[ if j != n then [ if F(i) > F(j) then [ F(i) := F(j) || F(j) := F(i) ] || j := j+1 ]"
        " || if (F(i) > F(j)) = true and j = n and i+1 != n then [ i := i+1 || j := i+2 ] ]",
        vocab.get());
    CHECK_FALSE(check_equivalence(naive, spec).passed);
    CHECK(check_equivalence(parse_program(fx::kSortingProgram, vocab.get()), spec).passed);
  }

  TEST_CASE("clash outcomes are rejected") {
    AlgorithmSpec spec({{"a", xy_state("e0", "e1").with_flags({false, true}), TermSet(),
                         UpdateOutcome::halt_clash()}});
    CHECK_THROWS_AS(synthesize(spec), SynthesisError);
  }

  TEST_CASE("non-discriminating table cannot be synthesized") {
    CHECK_THROWS_AS(synthesize(fx::remark3_spec()), SynthesisError);
  }

  TEST_CASE("case form over extra distinguished constants") {
    auto named = fx::magic_case_states();
    Program source = parse_program(fx::kMagicCaseProgram, named.front().second.vocabulary_ptr().get());
    AlgorithmSpec spec = named_spec(source, named);
    Program p = synthesize(spec, SynthesisForm::Case);
    CHECK(std::holds_alternative<Case>(p.node));
    CHECK(check_equivalence(p, spec).passed);
    CHECK_THROWS_AS(synthesize(spec, SynthesisForm::If), SynthesisError);
  }

  TEST_CASE("synthesized guard leaves the partial function alone") {
    auto named = fx::partial_f_states();
    auto vocab = named.front().second.vocabulary_ptr();
    Program source = parse_program(fx::kPartialFProgram, vocab.get());
    AlgorithmSpec spec = named_spec(source, named);
    Program p = synthesize(spec);
    CHECK(check_equivalence(p, spec).passed);
    const PartialStructure& at_a = spec.find("at-a")->state;
    CHECK(update_set(p, at_a) == UpdateOutcome::halt_success());
    Program normal = parse_program(fx::kPartialFNormalForm, vocab.get());
    CHECK(update_set(normal, at_a) == UpdateOutcome::black_hole());
  }

  TEST_CASE("if form splits on definedness where a term hangs") {
    // f(x) hangs in the black-hole state and takes two non-Boolean values
    // elsewhere.
    auto vocab = std::make_shared<const Vocabulary>(
        std::vector<Symbol>{{"x", 0, SymbolKind::Dynamic}, {"y", 0, SymbolKind::Dynamic},
                            {"f", 1, SymbolKind::Static}},
        std::vector<std::string>{});
    auto make = [&](const char* x) {
      StructureBuilder b(vocab, {Value::named("true"), Value::named("false"),
                                 Value::named("undef"), Value::named("e0"), Value::named("e1")});
      b.set("x", Value::named(x)).set("y", Value::named("e0"));
      b.declare("f").set("f", {Value::named("e0")}, Value::named("e1"));
      b.set("f", {Value::named("e1")}, Value::named("e0"));
      return b.build();
    };
    Program source = parse_program("[ y := f(x) || if y = f(y) then x := y ]", vocab.get());
    AlgorithmSpec spec = spec_from_program(source, {make("e0"), make("e1"), make("undef")});
    REQUIRE(spec[2].delta == UpdateOutcome::black_hole());
    Program p = synthesize(spec);
    CHECK(print_program(p).find("f(x) or not f(x)") != std::string::npos);
    CHECK(check_equivalence(p, spec).passed);
  }

  TEST_CASE("synthesis is deterministic") {
    AlgorithmSpec spec = sorting_spec();
    CHECK(print_program(synthesize(spec)) == print_program(synthesize(spec)));
  }
}
