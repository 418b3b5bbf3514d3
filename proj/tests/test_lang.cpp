#include <doctest.h>

#include "exact_asm/error.hpp"
#include "exact_asm/fixtures.hpp"
#include "exact_asm/program.hpp"
#include "exact_asm/semantics.hpp"

using namespace exact_asm;
namespace fx = exact_asm::fixtures;

TEST_SUITE("lang") {
  TEST_CASE("sorting program parses and prints canonically") {
    auto vocab = fx::sorting_vocabulary();
    Program p = parse_program(fx::kSortingProgram, vocab.get());
    std::string text = print_program(p);
    CHECK(text.find("if j != n then") != std::string::npos);
    CHECK(text.find("if j = n and i+1 != n then") != std::string::npos);
    CHECK(parse_program(text, vocab.get()) == p);
  }

  TEST_CASE("inequality is sugar for a negated equality") {
    Term t = parse_term("x != a");
    CHECK(t.head() == "not");
    CHECK(t.args()[0] == equals(Term::make("x"), Term::make("a")));
    CHECK(t.str() == "x != a");
  }

  TEST_CASE("precedence of connectives and arithmetic") {
    CHECK(parse_term("a or b and c").head() == "or");
    CHECK(parse_term("not a = b").head() == "not");
    CHECK(parse_term("not a and b").head() == "and");
    CHECK(parse_term("i+1*2").head() == "+");
    CHECK(parse_term("(a or b) and c").str() == "(a or b) and c");
    CHECK(parse_term("F(i) > F(j)").str() == "F(i) > F(j)");
  }

  TEST_CASE("digit names are constants") {
    Term t = parse_term("j+1");
    CHECK(t.args()[1] == Term::make("1"));
  }

  TEST_CASE("errors carry positions") {
    try {
      parse_program("if x then\n  y := ");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() >= 3);
    }
    CHECK_THROWS_AS(parse_program("[ x := y"), ParseError);
    CHECK_THROWS_AS(parse_term("f(x,"), ParseError);
    CHECK_THROWS_AS(parse_program("x := y z"), ParseError);
  }

  TEST_CASE("vocabulary checks during parsing report positions") {
    auto vocab = fx::sorting_vocabulary();
    CHECK_THROWS_AS(parse_program("n := 1", vocab.get()), ParseError);
    CHECK_THROWS_AS(parse_program("q := 1", vocab.get()), ParseError);
    try {
      parse_program("i := F(i, j)", vocab.get());
      FAIL("expected an arity error");
    } catch (const ParseError& e) {
      CHECK(e.column() == 6);
    }
  }

  TEST_CASE("case statements parse and print") {
    Program p = parse_program(fx::kMagicCaseProgram);
    const auto* c = std::get_if<Case>(&p.node);
    REQUIRE(c != nullptr);
    CHECK(c->queries.size() == 1);
    CHECK(c->rows.size() == 2);
    CHECK(c->rows[0].literals == std::vector<std::string>{"red"});
    CHECK(parse_program(print_program(p)) == p);

    Program multi = parse_program("case a, b of when true, false then x := a end");
    CHECK(std::get<Case>(multi.node).queries.size() == 2);
    CHECK_THROWS_AS(parse_program("case a, b of when true then x := a end"), ParseError);
  }

  TEST_CASE("skip and nested blocks") {
    CHECK(parse_program("[ ]").is_skip());
    Program p = parse_program("[ [ x := y ] || if a then [ ] ]");
    CHECK(std::get<Par>(p.node).children.size() == 2);
    CHECK(parse_program(print_program(p)) == p);
  }

  TEST_CASE("critical terms skip assignment targets") {
    auto vocab = fx::sorting_vocabulary();
    Program p = parse_program(fx::kSortingProgram, vocab.get());
    TermSet critical = critical_terms(p);
    CHECK(critical.contains(parse_term("i+2")));
    CHECK(critical.contains(parse_term("F(i) > F(j)")));
    CHECK(critical.contains(parse_term("j = n and i+1 != n")));
    CHECK(critical.contains(parse_term("F(j)")));

    TermSet simple = critical_terms(parse_program("g(x) := y"));
    CHECK(simple == TermSet({Term::make("x"), Term::make("y")}));
  }

  TEST_CASE("flatten produces one block of guarded assignments") {
    Program p = parse_program("if a then [ x := b || if c then y := d ]");
    Program f = flatten(p);
    const auto* par = std::get_if<Par>(&f.node);
    REQUIRE(par != nullptr);
    REQUIRE(par->children.size() == 2);
    for (const Program& child : par->children) {
      const Program* at = &child;
      while (const auto* g = std::get_if<If>(&at->node)) at = &*g->body;
      CHECK(std::holds_alternative<Assign>(at->node));
    }
    CHECK(print_program(par->children[1]) == "if a then if c then y := d");
    CHECK(flatten(parse_program("if a then [ ]")) == parse_program("[ if a then [ ] ]"));
    CHECK_THROWS_AS(flatten(parse_program(fx::kMagicCaseProgram)), ContractViolation);
  }

  TEST_CASE("flatten preserves proposed updates and observable explore sets") {
    auto vocab = fx::sorting_vocabulary();
    Program p = parse_program(fx::kSortingProgram, vocab.get());
    Program f = flatten(p);
    for (const PartialStructure& s : fx::sorting_states({2})) {
      CHECK(proposed_updates(p, s) == proposed_updates(f, s));
      CHECK(observable_terms(explore_set(p, s).terms(), *vocab) ==
            observable_terms(explore_set(f, s).terms(), *vocab));
    }
  }

  TEST_CASE("programs are checked against a vocabulary") {
    auto vocab = fx::sorting_vocabulary();
    CHECK_NOTHROW(check_program(parse_program(fx::kSortingProgram), *vocab));
    CHECK_THROWS_AS(check_program(parse_program("n := 2"), *vocab), SpecificationError);
  }
}
