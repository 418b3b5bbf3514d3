#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "exact_asm/structure.hpp"
#include "exact_asm/term.hpp"

namespace exact_asm {

// Immutable heap box with value semantics, for recursive AST members.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT
  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  friend bool operator==(const Box& a, const Box& b) { return a.ptr_ == b.ptr_ || *a == *b; }

 private:
  std::shared_ptr<const T> ptr_;
};

struct Program;

// f(s1, ..., sn) := t
struct Assign {
  std::string symbol;
  std::vector<Term> args;
  Term rhs;

  Term lhs() const { return Term::make(symbol, args); }
  friend bool operator==(const Assign&, const Assign&) = default;
};

// [P1 || ... || Pn]; the empty block is skip.
struct Par {
  std::vector<Program> children;
  friend bool operator==(const Par&, const Par&);
};

// if C then P
struct If {
  Term cond;
  Box<Program> body;
  friend bool operator==(const If&, const If&) = default;
};

struct CaseRow {
  std::vector<std::string> literals;  // distinguished constants, one per query
  Box<Program> body;
  friend bool operator==(const CaseRow&, const CaseRow&) = default;
};

// case q1, ..., qn of when a11, ..., a1n then S1 ... ; rows may overlap.
struct Case {
  std::vector<Term> queries;
  std::vector<CaseRow> rows;
  friend bool operator==(const Case&, const Case&) = default;
};

struct Program {
  std::variant<Assign, Par, If, Case> node;

  static Program assign(std::string symbol, std::vector<Term> args, Term rhs);
  static Program par(std::vector<Program> children);
  static Program skip() { return par({}); }
  static Program guarded(Term cond, Program body);
  static Program cases(std::vector<Term> queries, std::vector<CaseRow> rows);

  bool is_skip() const;
  friend bool operator==(const Program&, const Program&) = default;
};

inline bool operator==(const Par& a, const Par& b) { return a.children == b.children; }

// Parses program text. When a vocabulary is given, symbols, arities, and
// case literals are checked against it and assignments to static symbols
// are rejected.
Program parse_program(std::string_view text, const Vocabulary* vocabulary = nullptr);
Term parse_term(std::string_view text, const Vocabulary* vocabulary = nullptr);

// Canonical text; parse_program(print_program(p)) == p.
std::string print_program(const Program& p);

// Rewrites an if-only program into a single block of nested conditional
// assignments. Case statements raise ContractViolation.
Program flatten(const Program& p);

// Every term occurring in the program (conditions, queries, assignment
// arguments and right-hand sides) plus their subterms. Assignment
// left-hand sides contribute only their proper subterms.
TermSet critical_terms(const Program& p);

// Throws SpecificationError if the program uses symbols the vocabulary
// lacks, assigns to static symbols, or uses non-distinguished case literals.
void check_program(const Program& p, const Vocabulary& vocabulary);

}  // namespace exact_asm
