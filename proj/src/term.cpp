#include "exact_asm/term.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <mutex>
#include <unordered_set>

namespace exact_asm {

namespace detail {

struct TermNode {
  std::string head;
  std::vector<Term> args;
  std::size_t hash;
  std::size_t size;
  int precedence;
  std::string printed;
};

}  // namespace detail

namespace {

constexpr int kAtomPrecedence = 7;

struct NodeKey {
  std::string_view head;
  std::span<const Term> args;
  std::size_t hash;
};

struct NodeHash {
  using is_transparent = void;
  std::size_t operator()(const detail::TermNode* n) const noexcept { return n->hash; }
  std::size_t operator()(const NodeKey& k) const noexcept { return k.hash; }
};

struct NodeEq {
  using is_transparent = void;
  static bool same(std::string_view h1, std::span<const Term> a1, std::string_view h2,
                   std::span<const Term> a2) {
    return h1 == h2 && std::equal(a1.begin(), a1.end(), a2.begin(), a2.end());
  }
  bool operator()(const detail::TermNode* a, const detail::TermNode* b) const {
    return a == b;
  }
  bool operator()(const NodeKey& k, const detail::TermNode* n) const {
    return same(k.head, k.args, n->head, n->args);
  }
  bool operator()(const detail::TermNode* n, const NodeKey& k) const {
    return same(k.head, k.args, n->head, n->args);
  }
};

class Interner {
 public:
  const detail::TermNode* intern(std::string_view head, std::vector<Term> args);

 private:
  std::mutex mutex_;
  std::deque<detail::TermNode> storage_;
  std::unordered_set<const detail::TermNode*, NodeHash, NodeEq> index_;
};

Interner& interner() {
  static Interner instance;
  return instance;
}

std::size_t combine_hash(std::string_view head, std::span<const Term> args) {
  std::size_t h = std::hash<std::string_view>{}(head);
  for (Term a : args) h = h * 1000003u ^ a.hash();
  return h;
}

bool is_disequality(std::string_view head, std::span<const Term> args) {
  return head == kNot && args.size() == 1 && args[0].head() == kEquals &&
         args[0].arity() == 2;
}

int precedence_of(std::string_view head, std::span<const Term> args) {
  if (is_disequality(head, args)) return 4;
  auto info = operator_info(head);
  if (info.fixity == Fixity::Infix && args.size() == 2) return info.precedence;
  if (info.fixity == Fixity::Prefix && args.size() == 1) return info.precedence;
  return kAtomPrecedence;
}

std::string wrap(const Term& t, int context, int child_precedence) {
  if (child_precedence < context) return "(" + t.str() + ")";
  return t.str();
}

int child_precedence(const Term& t) { return precedence_of(t.head(), t.args()); }

std::string render(std::string_view head, std::span<const Term> args) {
  if (is_disequality(head, args)) {
    auto inner = args[0].args();
    return wrap(inner[0], 5, child_precedence(inner[0])) + " != " +
           wrap(inner[1], 5, child_precedence(inner[1]));
  }
  auto info = operator_info(head);
  if (info.fixity == Fixity::Prefix && args.size() == 1) {
    return std::string(head) + " " + wrap(args[0], info.precedence, child_precedence(args[0]));
  }
  if (info.fixity == Fixity::Infix && args.size() == 2) {
    int left_ctx = info.associative ? info.precedence : info.precedence + 1;
    std::string sep = info.spaced ? " " + std::string(head) + " " : std::string(head);
    return wrap(args[0], left_ctx, child_precedence(args[0])) + sep +
           wrap(args[1], info.precedence + 1, child_precedence(args[1]));
  }
  std::string out(head);
  if (!args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += args[i].str();
    }
    out += ')';
  }
  return out;
}

const detail::TermNode* Interner::intern(std::string_view head, std::vector<Term> args) {
  NodeKey key{head, args, combine_hash(head, args)};
  std::lock_guard lock(mutex_);
  if (auto it = index_.find(key); it != index_.end()) return *it;
  std::size_t size = 1;
  for (Term a : args) size += a.size();
  int prec = precedence_of(head, args);
  std::string printed = render(head, args);
  auto& node = storage_.emplace_back(detail::TermNode{std::string(head), std::move(args),
                                                      key.hash, size, prec, std::move(printed)});
  index_.insert(&node);
  return &node;
}

}  // namespace

Term Term::make(std::string_view head, std::vector<Term> args) {
  return Term(interner().intern(head, std::move(args)));
}

const std::string& Term::head() const { return node_->head; }
std::span<const Term> Term::args() const { return node_->args; }
const std::string& Term::str() const { return node_->printed; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hash; }

std::strong_ordering operator<=>(Term a, Term b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  int c = a.str().compare(b.str());
  return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::vector<Term> Term::subterms() const {
  std::vector<Term> out;
  std::vector<Term> stack{*this};
  std::unordered_set<Term> seen;
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    if (!seen.insert(t).second) continue;
    out.push_back(t);
    for (Term a : t.args()) stack.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

OperatorInfo operator_info(std::string_view head) {
  if (head == kOr) return {Fixity::Infix, 1, true, true};
  if (head == kAnd) return {Fixity::Infix, 2, true, true};
  if (head == kNot) return {Fixity::Prefix, 3, true, false};
  if (head == "=" || head == "<" || head == ">" || head == "<=" || head == ">=")
    return {Fixity::Infix, 4, true, false};
  if (head == "+" || head == "-") return {Fixity::Infix, 5, false, true};
  if (head == "*") return {Fixity::Infix, 6, false, true};
  return {Fixity::Application, kAtomPrecedence, false, false};
}

bool is_connective(std::string_view head) {
  return head == kNot || head == kAnd || head == kOr;
}

Term equals(Term a, Term b) { return Term::make(kEquals, {a, b}); }
Term negation(Term a) { return Term::make(kNot, {a}); }

Term conjunction(std::span<const Term> conjuncts) {
  assert(!conjuncts.empty());
  Term acc = conjuncts[0];
  for (std::size_t i = 1; i < conjuncts.size(); ++i) acc = Term::make(kAnd, {acc, conjuncts[i]});
  return acc;
}

TermSet::TermSet(std::vector<Term> terms) : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end());
  terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
}

void TermSet::insert(Term t) {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), t);
  if (it == terms_.end() || *it != t) terms_.insert(it, t);
}

bool TermSet::contains(Term t) const {
  return std::binary_search(terms_.begin(), terms_.end(), t);
}

TermSet TermSet::intersect(const TermSet& other) const {
  TermSet out;
  std::set_intersection(terms_.begin(), terms_.end(), other.terms_.begin(), other.terms_.end(),
                        std::back_inserter(out.terms_));
  return out;
}

TermSet TermSet::minus(const TermSet& other) const {
  TermSet out;
  std::set_difference(terms_.begin(), terms_.end(), other.terms_.begin(), other.terms_.end(),
                      std::back_inserter(out.terms_));
  return out;
}

TermSet TermSet::unite(const TermSet& other) const {
  TermSet out;
  std::set_union(terms_.begin(), terms_.end(), other.terms_.begin(), other.terms_.end(),
                 std::back_inserter(out.terms_));
  return out;
}

bool TermSet::includes(const TermSet& other) const {
  return std::includes(terms_.begin(), terms_.end(), other.terms_.begin(), other.terms_.end());
}

TermSet TermSet::closed() const {
  std::vector<Term> all;
  for (Term t : terms_) {
    auto subs = t.subterms();
    all.insert(all.end(), subs.begin(), subs.end());
  }
  return TermSet(std::move(all));
}

}  // namespace exact_asm
