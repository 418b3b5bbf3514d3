#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace exact_asm {

namespace detail {
struct TermNode;
}

// Ground first-order term. Terms are hash-consed: two terms are
// syntactically identical iff they share a node, so == is a pointer
// comparison. Nodes are never freed and are safe to share across threads.
class Term {
 public:
  static Term make(std::string_view head, std::vector<Term> args = {});

  const std::string& head() const;
  std::span<const Term> args() const;
  std::size_t arity() const { return args().size(); }
  bool is_constant() const { return arity() == 0; }

  // Canonical printed form; also the canonical ordering key.
  const std::string& str() const;
  // Number of nodes.
  std::size_t size() const;
  std::size_t hash() const;

  // The term together with all its subterms, each once, canonical order.
  std::vector<Term> subterms() const;

  friend bool operator==(Term a, Term b) noexcept { return a.node_ == b.node_; }
  friend std::strong_ordering operator<=>(Term a, Term b);

 private:
  explicit Term(const detail::TermNode* node) : node_(node) {}
  const detail::TermNode* node_;
};

// Operator metadata shared by the printer and the parser.
enum class Fixity { Prefix, Infix, Application };

struct OperatorInfo {
  Fixity fixity;
  int precedence;     // higher binds tighter
  bool spaced;        // "a = b" rather than "a+b"
  bool associative;   // left-associative chains print without parens
};

// Returns operator info for names such as "and", "=", "+"; application
// syntax for everything else.
OperatorInfo operator_info(std::string_view head);

// Names of the Boolean connectives, which states interpret like any
// other symbol.
inline constexpr std::string_view kNot = "not";
inline constexpr std::string_view kAnd = "and";
inline constexpr std::string_view kOr = "or";
inline constexpr std::string_view kEquals = "=";

bool is_connective(std::string_view head);

// Convenience constructors.
Term equals(Term a, Term b);
Term negation(Term a);
Term conjunction(std::span<const Term> conjuncts);  // requires non-empty

// Sorted, duplicate-free set of terms in canonical order.
class TermSet {
 public:
  TermSet() = default;
  explicit TermSet(std::vector<Term> terms);

  void insert(Term t);
  bool contains(Term t) const;
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }
  const std::vector<Term>& items() const { return terms_; }

  TermSet intersect(const TermSet& other) const;
  TermSet minus(const TermSet& other) const;
  TermSet unite(const TermSet& other) const;
  bool includes(const TermSet& other) const;

  // Adds every subterm of every member.
  TermSet closed() const;

  friend bool operator==(const TermSet&, const TermSet&) = default;

 private:
  std::vector<Term> terms_;
};

}  // namespace exact_asm

template <>
struct std::hash<exact_asm::Term> {
  std::size_t operator()(exact_asm::Term t) const noexcept { return t.hash(); }
};
