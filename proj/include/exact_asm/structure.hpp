#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "exact_asm/term.hpp"

namespace exact_asm {

// A base-set element. Elements are identified by name, so values from
// different states compare equal iff their names do. `undef` is an ordinary
// element; the non-value (hang) is modelled by EvalResult, never by Value.
class Value {
 public:
  static Value named(std::string_view name);

  const std::string& name() const;
  std::uint32_t id() const noexcept { return id_; }

  friend bool operator==(Value a, Value b) noexcept { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(Value a, Value b);

 private:
  explicit Value(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

using Tuple = std::vector<Value>;

// Result of evaluating a term: a base-set value, or the hang marker.
class EvalResult {
 public:
  EvalResult(Value v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  static EvalResult hang() { return EvalResult(); }

  bool hangs() const noexcept { return !value_.has_value(); }
  Value value() const { return *value_; }
  std::string str() const;

  friend bool operator==(const EvalResult&, const EvalResult&) = default;

 private:
  EvalResult() = default;
  std::optional<Value> value_;
};

enum class SymbolKind { Static, Dynamic };

struct Symbol {
  std::string name;
  std::size_t arity = 0;
  SymbolKind kind = SymbolKind::Static;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

// Finite vocabulary. `true`, `false`, `undef` (distinguished, self-denoting)
// and the static connectives `=`, `not`, `and`, `or` are always present.
class Vocabulary {
 public:
  Vocabulary(std::vector<Symbol> symbols, std::vector<std::string> distinguished);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  const std::vector<std::string>& distinguished() const { return distinguished_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  const Symbol& at(std::size_t index) const { return symbols_[index]; }
  const Symbol* find(std::string_view name) const;
  bool is_distinguished(std::string_view name) const;
  // A distinguished constant term, e.g. `true`.
  bool is_distinguished(Term t) const { return t.is_constant() && is_distinguished(t.head()); }

  // Throws SpecificationError on unknown symbols or arity mismatches.
  void check(Term t) const;

  // Whether the symbol is one of the implicitly added ones.
  static bool is_builtin(std::string_view name);

  friend bool operator==(const Vocabulary&, const Vocabulary&);

 private:
  std::vector<Symbol> symbols_;
  std::vector<std::string> distinguished_;
  std::unordered_map<std::string, std::size_t> index_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

struct Location {
  std::string symbol;
  Tuple args;

  std::string str() const;
  friend bool operator==(const Location&, const Location&) = default;
  friend auto operator<=>(const Location&, const Location&) = default;
};

struct Update {
  Location location;
  Value value;

  friend bool operator==(const Update&, const Update&) = default;
  friend auto operator<=>(const Update&, const Update&) = default;
};

// Sorted, duplicate-free list of location/value pairs.
using UpdateSet = std::vector<Update>;
UpdateSet make_update_set(std::vector<Update> updates);
// True when two pairs assign different values to one location.
bool has_clash(const UpdateSet& updates);

using Table = std::map<Tuple, Value>;

struct StateFlags {
  bool initial = false;
  bool terminal = false;
  friend bool operator==(const StateFlags&, const StateFlags&) = default;
};

// Finite first-order structure with partial interpretations. Absent table
// entries are points outside the domain of definition: accessing them hangs.
// Immutable once built; tables are shared between successor states.
class PartialStructure {
 public:
  const Vocabulary& vocabulary() const { return *vocabulary_; }
  const VocabularyPtr& vocabulary_ptr() const { return vocabulary_; }
  std::span<const Value> base() const { return base_; }
  bool in_base(Value v) const;
  const StateFlags& flags() const { return flags_; }
  PartialStructure with_flags(StateFlags flags) const;

  const Table& table(std::size_t symbol_index) const { return *tables_[symbol_index]; }
  const Table& table(std::string_view symbol) const;
  EvalResult lookup(std::size_t symbol_index, const Tuple& args) const;
  EvalResult lookup(const Location& location) const;

  // Value of a distinguished constant such as `true`.
  Value constant(std::string_view name) const;
  Value true_value() const { return true_; }
  Value false_value() const { return false_; }
  // Values carried by the distinguished symbols, in vocabulary order.
  const std::vector<Value>& distinguished_values() const { return distinguished_values_; }
  bool is_distinguished_value(Value v) const;

  // A copy with one location redefined (value) or removed (nullopt). Unlike
  // apply_updates this may touch static symbols; it builds a different state.
  PartialStructure with_location(const Location& location, std::optional<Value> value) const;

  // Same base and same interpretation; flags are ignored.
  bool same_interpretation(const PartialStructure& other) const;

 private:
  friend class StructureBuilder;
  friend PartialStructure apply_updates(const PartialStructure&, const UpdateSet&);

  PartialStructure() = default;
  void validate();

  VocabularyPtr vocabulary_;
  std::vector<Value> base_;  // sorted
  std::vector<std::shared_ptr<const Table>> tables_;
  StateFlags flags_;
  Value true_ = Value::named("true");
  Value false_ = Value::named("false");
  std::vector<Value> distinguished_values_;
};

// Assembles a PartialStructure. Symbols that are never set fall back to a
// default interpretation when they have one: distinguished constants denote
// the element of the same name, `=` is identity, and `not`/`and`/`or` treat
// every value other than the true element as false.
class StructureBuilder {
 public:
  StructureBuilder(VocabularyPtr vocabulary, std::vector<Value> base);

  StructureBuilder& set(std::string_view symbol, Tuple args, Value value);
  StructureBuilder& set(std::string_view symbol, Value value) { return set(symbol, {}, value); }
  // Marks a symbol as explicitly given, so no default table is filled in.
  StructureBuilder& declare(std::string_view symbol);
  StructureBuilder& flags(StateFlags flags);

  PartialStructure build() const;

 private:
  VocabularyPtr vocabulary_;
  std::vector<Value> base_;
  std::vector<Table> tables_;
  std::vector<bool> explicit_;
  StateFlags flags_;
};

// Strict evaluation: hangs iff some subterm addresses an undefined point.
// Unknown symbols raise SpecificationError.
EvalResult eval_term(const PartialStructure& state, Term t);

// X =_T Y: every term has the same EvalResult (a hang matches only a hang).
bool agree(const PartialStructure& x, const PartialStructure& y, std::span<const Term> terms);

// tau: overwrite the given locations. Requires a consistent update set over
// dynamic symbols with arguments and values from the base set.
PartialStructure apply_updates(const PartialStructure& state, const UpdateSet& updates);

// Bijection between base sets, stored as sorted (from, to) pairs.
class Bijection {
 public:
  explicit Bijection(std::vector<std::pair<Value, Value>> pairs);
  Value operator()(Value v) const;
  Tuple operator()(const Tuple& t) const;
  Update operator()(const Update& u) const;
  const std::vector<std::pair<Value, Value>>& pairs() const { return pairs_; }

 private:
  std::vector<std::pair<Value, Value>> pairs_;
};

// All isomorphisms from x to y, at most `limit` of them. Partiality is
// respected: defined points map to defined points.
std::vector<Bijection> isomorphisms(const PartialStructure& x, const PartialStructure& y,
                                    std::size_t limit = 1);
bool isomorphic(const PartialStructure& x, const PartialStructure& y);

}  // namespace exact_asm
