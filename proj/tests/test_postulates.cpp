#include <doctest.h>

#include <algorithm>

#include "exact_asm/error.hpp"
#include "exact_asm/fixtures.hpp"
#include "exact_asm/postulates.hpp"
#include "oracles.hpp"

using namespace exact_asm;
namespace fx = exact_asm::fixtures;

namespace {

VocabularyPtr one_variable() {
  return std::make_shared<const Vocabulary>(
      std::vector<Symbol>{{"x", 0, SymbolKind::Dynamic}, {"c", 0, SymbolKind::Static}},
      std::vector<std::string>{});
}

PartialStructure x_state(const char* x, bool terminal = false) {
  StructureBuilder b(one_variable(), {Value::named("true"), Value::named("false"),
                                      Value::named("undef"), Value::named("e0"),
                                      Value::named("e1")});
  b.set("x", Value::named(x)).set("c", Value::named("e0"));
  b.flags({false, terminal});
  return b.build();
}

Update x_to(const char* v) { return Update{Location{"x", {}}, Value::named(v)}; }

AlgorithmSpec sorting_spec() {
  auto vocab = fx::sorting_vocabulary();
  return spec_from_program(parse_program(fx::kSortingProgram, vocab.get()), fx::sorting_states());
}

bool has_pair(const DiscriminationOrder& order, std::string_view lower, std::string_view upper) {
  return std::find(order.begin(), order.end(),
                   std::pair{parse_term(lower), parse_term(upper)}) != order.end();
}

}  // namespace

TEST_SUITE("postulates") {
  TEST_CASE("the three-flag table is not discriminating") {
    AlgorithmSpec spec = fx::remark3_spec();
    CheckReport d = check_discrimination(spec);
    CHECK_FALSE(d.passed);
    REQUIRE(d.agreeable_implies_uniform.has_value());
    CHECK_FALSE(*d.agreeable_implies_uniform);
    REQUIRE_FALSE(d.witnesses.empty());
    std::vector<std::string> states = d.witnesses.front().states;
    std::sort(states.begin(), states.end());
    CHECK(states == std::vector<std::string>{"X", "Y", "Z"});

    CHECK(check_determination(spec).passed);
    CHECK(check_limitation(spec).passed);
    CHECK_FALSE(is_uniform(spec, {0, 1, 2}));
    CHECK(is_agreeable(spec, {0, 1, 2}));
    CHECK_FALSE(is_agreeable(spec, {0, 1}));
  }

  TEST_CASE("subset enumeration agrees with the reference oracle") {
    AlgorithmSpec spec = fx::remark3_spec();
    auto found = find_agreeable_nonuniform_subset(spec);
    REQUIRE(found.has_value());
    CHECK(found == oracle::agreeable_nonuniform_subset(spec));
    CheckOptions opts;
    opts.oracle_subsets = true;
    CHECK(check_discrimination(spec, opts).oracle_agrees == true);
    CHECK_FALSE(find_agreeable_nonuniform_subset(fx::example6_spec()).has_value());
    CHECK_THROWS_AS(find_agreeable_nonuniform_subset(sorting_spec(), 12), ContractViolation);
  }

  TEST_CASE("sorting spec satisfies every postulate") {
    AlgorithmSpec spec = sorting_spec();
    for (const CheckReport& r : check_all(spec)) {
      INFO(r.postulate);
      CHECK(r.passed);
    }
    auto names = check_all(spec);
    REQUIRE(names.size() == 4);
    CHECK(names[0].postulate == "determination");
    CHECK(names[3].postulate == "abstract-state");
  }

  TEST_CASE("sorting discrimination orders follow the guards") {
    AlgorithmSpec spec = sorting_spec();
    CheckReport r = check_discrimination(spec);
    REQUIRE(r.passed);
    auto advance = std::find_if(spec.states().begin(), spec.states().end(), [](const SpecState& s) {
      return s.gamma.contains(parse_term("i+2"));
    });
    REQUIRE(advance != spec.states().end());
    CHECK(has_pair(r.orders.at(advance->name), "j = n and i+1 != n", "i+2"));
    auto compare = std::find_if(spec.states().begin(), spec.states().end(), [](const SpecState& s) {
      return s.gamma.contains(parse_term("j+1"));
    });
    REQUIRE(compare != spec.states().end());
    CHECK(has_pair(r.orders.at(compare->name), "j != n", "F(i) > F(j)"));
    CHECK(has_pair(r.orders.at(compare->name), "j != n", "j+1"));
  }

  TEST_CASE("limitation reports the union and the largest explore set") {
    AlgorithmSpec spec = sorting_spec();
    CheckReport r = check_limitation(spec);
    auto figures = oracle::limitation_figures(spec);
    CHECK(r.passed);
    CHECK(r.union_size == figures.union_size);
    CHECK(r.bound == figures.largest);
    CHECK(*r.bound <= *r.union_size);
  }

  TEST_CASE("determination compares outcomes up to trivial updates") {
    // x := c read nowhere: the state already holding e0 sees no change.
    PartialStructure a = x_state("e0"), b = x_state("e1");
    CHECK(same_outcome(UpdateOutcome::updates({}), a, UpdateOutcome::updates({x_to("e0")}), b));
    CHECK_FALSE(same_outcome(UpdateOutcome::updates({}), b, UpdateOutcome::updates({x_to("e0")}), b));
    CHECK_FALSE(same_outcome(UpdateOutcome::halt_success(), a, UpdateOutcome::updates({}), b));

    AlgorithmSpec spec({{"a", a, TermSet({Term::make("c")}), UpdateOutcome::updates({})},
                        {"b", b, TermSet({Term::make("c")}), UpdateOutcome::updates({x_to("e0")})}});
    CHECK(check_determination(spec).passed);

    AlgorithmSpec broken({{"a", a, TermSet({Term::make("c")}), UpdateOutcome::updates({x_to("e1")})},
                          {"b", b, TermSet({Term::make("c")}), UpdateOutcome::updates({x_to("e0")})}});
    CheckReport r = check_determination(broken);
    CHECK_FALSE(r.passed);
    CHECK(r.witnesses.front().states.size() == 2);
  }

  TEST_CASE("determination also requires equal explore sets") {
    AlgorithmSpec spec({{"a", x_state("e0"), TermSet({Term::make("c")}), UpdateOutcome::updates({})},
                        {"b", x_state("e1"), TermSet({Term::make("c"), Term::make("x")}),
                         UpdateOutcome::updates({})}});
    CHECK_FALSE(check_determination(spec).passed);
  }

  TEST_CASE("a hang discriminates against any answer") {
    // f(x) hangs in one state and answers e1 elsewhere; the state that
    // answers goes on to explore more.
    auto vocab = std::make_shared<const Vocabulary>(
        std::vector<Symbol>{{"x", 0, SymbolKind::Dynamic}, {"y", 0, SymbolKind::Dynamic},
                            {"f", 1, SymbolKind::Static}},
        std::vector<std::string>{});
    auto make = [&](const char* x) {
      StructureBuilder b(vocab, {Value::named("true"), Value::named("false"), Value::named("undef"),
                                 Value::named("e0"), Value::named("e1")});
      b.set("x", Value::named(x)).set("y", Value::named("e0"));
      b.declare("f").set("f", {Value::named("e0")}, Value::named("e1"));
      return b.build();
    };
    Program p = parse_program("[ y := f(x) || if y = f(y) then x := y ]", vocab.get());
    AlgorithmSpec spec = spec_from_program(p, {make("e0"), make("e1")});
    CHECK(spec[1].delta == UpdateOutcome::black_hole());
    CHECK(check_discrimination(spec).passed);
  }

  TEST_CASE("a coarse partition order is refined per state") {
    auto vocab = std::make_shared<const Vocabulary>(
        std::vector<Symbol>{{"v0", 0, SymbolKind::Dynamic}, {"v1", 0, SymbolKind::Dynamic},
                            {"a", 0, SymbolKind::Static}},
        std::vector<std::string>{});
    Program p = parse_program("if v0 = v1 then if v1 = a then if v1 = false then v0 := v0", vocab.get());
    std::vector<PartialStructure> states;
    for (const char* v0 : {"e1", "true", "false"})
      for (const char* v1 : {"e1", "true", "false"}) {
        StructureBuilder b(vocab, {Value::named("true"), Value::named("false"),
                                   Value::named("undef"), Value::named("e1")});
        states.push_back(b.set("v0", Value::named(v0)).set("v1", Value::named(v1))
                             .set("a", Value::named("e1")).build());
      }
    AlgorithmSpec spec = spec_from_program(p, states);
    CheckReport r = check_discrimination(spec);
    CHECK(r.passed);
    const SpecState* deep = spec.find("s0");
    REQUIRE(deep != nullptr);
    CHECK(deep->gamma.contains(parse_term("v1 = false")));
    CHECK(has_pair(r.orders.at("s0"), "v1 = a", "v1 = false"));
  }

  TEST_CASE("a non-Boolean disagreement satisfies the recursion only") {
    // x separates the states, but with e0 against e1 rather than true
    // against false.
    AlgorithmSpec spec({{"a", x_state("e0"), TermSet({Term::make("x"), Term::make("c")}),
                         UpdateOutcome::updates({})},
                        {"b", x_state("e1"), TermSet({Term::make("x")}), UpdateOutcome::updates({})}});
    CheckReport r = check_discrimination(spec);
    CHECK(r.passed);
    CHECK(r.agreeable_implies_uniform == true);
    CHECK(r.literal_clause == false);
    REQUIRE(r.literal_gaps.size() == 1);
    CHECK(r.literal_gaps.front().states == std::vector<std::string>{"a", "b"});
    CHECK(r.literal_gaps.front().terms == std::vector<Term>{Term::make("c")});
    CHECK(r.orders.at("a").size() == 1);
  }

  TEST_CASE("distinguished values widen what discriminates") {
    std::vector<std::pair<std::string, PartialStructure>> named = fx::magic_case_states();
    std::vector<PartialStructure> states;
    for (auto& [n, s] : named) states.push_back(s);
    Program p = parse_program(fx::kMagicCaseProgram, states.front().vocabulary_ptr().get());
    std::vector<std::string> names;
    for (auto& [n, s] : named) names.push_back(n);
    AlgorithmSpec spec = spec_from_program(p, states, names);
    CheckOptions k;
    k.values = DiscriminationValues::Distinguished;
    CHECK(check_discrimination(spec, k).passed);
  }

  TEST_CASE("abstract-state catches behavior that ignores isomorphism") {
    AlgorithmSpec good({{"a", x_state("e0"), TermSet({Term::make("x")}), UpdateOutcome::updates({x_to("e1")})},
                        {"b", x_state("e1"), TermSet({Term::make("x")}), UpdateOutcome::updates({x_to("e0")})}});
    // c pins e0, so the two states are not isomorphic and anything goes.
    CHECK(check_abstract_state(good).passed);

    auto free_vocab = std::make_shared<const Vocabulary>(
        std::vector<Symbol>{{"x", 0, SymbolKind::Dynamic}}, std::vector<std::string>{});
    auto make = [&](const char* x, bool terminal) {
      StructureBuilder b(free_vocab, {Value::named("true"), Value::named("false"),
                                      Value::named("undef"), Value::named("e0"),
                                      Value::named("e1")});
      return b.set("x", Value::named(x)).flags({false, terminal}).build();
    };
    AlgorithmSpec bad({{"a", make("e0", false), TermSet({Term::make("x")}), UpdateOutcome::updates({x_to("e1")})},
                       {"b", make("e1", true), TermSet({Term::make("x")}), UpdateOutcome::halt_success()}});
    CHECK_FALSE(check_abstract_state(bad).passed);

    AlgorithmSpec static_write({{"a", x_state("e0"), TermSet(),
                                 UpdateOutcome::updates({{Location{"c", {}}, Value::named("e1")}})}});
    CHECK_FALSE(check_abstract_state(static_write).passed);
  }

  TEST_CASE("classical to exacting equips every state with the critical terms") {
    auto vocab = fx::sorting_vocabulary();
    Program p = parse_program(fx::kSortingProgram, vocab.get());
    AlgorithmSpec spec = sorting_spec();
    TermSet critical = critical_terms(p);
    AlgorithmSpec exact = classical_to_exacting(spec, critical);
    for (const SpecState& s : exact.states())
      CHECK(s.gamma == normalize_explore_terms(critical, *vocab));
    CHECK(check_determination(exact).passed);
    CHECK(check_discrimination(exact).passed);

    AlgorithmSpec clash({{"a", x_state("e0"), TermSet(), UpdateOutcome::updates({x_to("e1")})},
                         {"b", x_state("e1"), TermSet(), UpdateOutcome::updates({x_to("e0")})}});
    CHECK_THROWS_AS(classical_to_exacting(clash, TermSet({Term::make("c")})), SpecificationError);
    CHECK_NOTHROW(classical_to_exacting(clash, TermSet({Term::make("x")})));
  }
}
