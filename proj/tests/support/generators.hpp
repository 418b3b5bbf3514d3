#pragma once

// Random clash-free if-programs over small finite state spaces.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "exact_asm/program.hpp"
#include "exact_asm/structure.hpp"

namespace testgen {

using namespace exact_asm;

struct RandomCase {
  std::uint64_t seed = 0;
  Program program = Program::skip();
  std::vector<PartialStructure> states;  // every assignment of the variables
};

struct GeneratorLimits {
  int max_variables = 4;  // dynamic nullaries v0, v1, ...
  int max_domain = 3;     // values each variable ranges over
  int max_depth = 3;      // nesting of par/if
};

class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed, GeneratorLimits limits = {})
      : rng_(seed), seed_(seed), limits_(limits) {}

  RandomCase next() {
    RandomCase c;
    c.seed = seed_;
    setup();
    assigned_.assign(static_cast<std::size_t>(variables_), false);
    c.program = program(limits_.max_depth);
    c.states = states();
    return c;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  void setup() {
    variables_ = pick(1, limits_.max_variables);
    has_f_ = chance(0.5);
    has_a_ = chance(0.5);
    int extra = pick(0, 2);
    elements_.clear();
    for (int k = 0; k < extra; ++k) elements_.push_back("e" + std::to_string(k));

    std::vector<std::string> pool{"true", "false", "undef"};
    pool.insert(pool.end(), elements_.begin(), elements_.end());
    std::shuffle(pool.begin(), pool.end(), rng_);
    domain_.assign(pool.begin(), pool.begin() + pick(2, std::min<int>(limits_.max_domain,
                                                                       static_cast<int>(pool.size()))));

    std::vector<Symbol> symbols;
    for (int v = 0; v < variables_; ++v) symbols.push_back({var(v), 0, SymbolKind::Dynamic});
    if (has_f_) symbols.push_back({"f", 1, SymbolKind::Static});
    if (has_a_) symbols.push_back({"a", 0, SymbolKind::Static});
    vocab_ = std::make_shared<const Vocabulary>(std::move(symbols), std::vector<std::string>{});

    a_value_ = domain_[static_cast<std::size_t>(pick(0, static_cast<int>(domain_.size()) - 1))];
    f_table_.clear();
    for (const std::string& e : base_names())
      if (chance(0.6))
        f_table_.emplace_back(e, domain_[static_cast<std::size_t>(
                                     pick(0, static_cast<int>(domain_.size()) - 1))]);
  }

  static std::string var(int v) { return "v" + std::to_string(v); }

  std::vector<std::string> base_names() const {
    std::vector<std::string> b{"true", "false", "undef"};
    b.insert(b.end(), elements_.begin(), elements_.end());
    return b;
  }

  Term value_term(int depth) {
    int r = pick(0, 9);
    if (depth > 0 && has_f_ && r < 2) return Term::make("f", {value_term(depth - 1)});
    if (r < 6) return Term::make(var(pick(0, variables_ - 1)));
    if (has_a_ && r < 8) return Term::make("a");
    static const char* constants[] = {"true", "false", "undef"};
    return Term::make(constants[pick(0, 2)]);
  }

  // Boolean-valued in every state: an equality or a connective over such.
  Term condition(int depth) {
    int r = depth > 0 ? pick(0, 5) : 0;
    switch (r) {
      case 3: return negation(condition(depth - 1));
      case 4: return Term::make(kAnd, {condition(depth - 1), condition(depth - 1)});
      case 5: return Term::make(kOr, {condition(depth - 1), condition(depth - 1)});
      default: return equals(value_term(1), value_term(1));
    }
  }

  Program assignment() {
    std::vector<int> free;
    for (int v = 0; v < variables_; ++v)
      if (!assigned_[static_cast<std::size_t>(v)]) free.push_back(v);
    if (free.empty()) return Program::skip();
    int v = free[static_cast<std::size_t>(pick(0, static_cast<int>(free.size()) - 1))];
    assigned_[static_cast<std::size_t>(v)] = true;
    return Program::assign(var(v), {}, value_term(2));
  }

  Program program(int depth) {
    if (depth == 0 || chance(0.25)) return assignment();
    if (chance(0.5)) {
      std::vector<Program> children;
      for (int k = pick(1, 3); k > 0; --k) children.push_back(program(depth - 1));
      return Program::par(std::move(children));
    }
    return Program::guarded(condition(2), program(depth - 1));
  }

  std::vector<PartialStructure> states() {
    std::vector<Value> base;
    for (const std::string& e : base_names()) base.push_back(Value::named(e));
    std::vector<std::size_t> digits(static_cast<std::size_t>(variables_), 0);
    std::vector<PartialStructure> out;
    while (true) {
      StructureBuilder b(vocab_, base);
      for (int v = 0; v < variables_; ++v)
        b.set(var(v), Value::named(domain_[digits[static_cast<std::size_t>(v)]]));
      if (has_a_) b.set("a", Value::named(a_value_));
      if (has_f_) {
        b.declare("f");
        for (const auto& [x, y] : f_table_) b.set("f", {Value::named(x)}, Value::named(y));
      }
      out.push_back(b.build());
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == domain_.size()) digits[k++] = 0;
      if (k == digits.size()) break;
    }
    return out;
  }

  std::mt19937_64 rng_;
  std::uint64_t seed_;
  GeneratorLimits limits_;
  int variables_ = 1;
  bool has_f_ = false;
  bool has_a_ = false;
  std::vector<std::string> elements_;
  std::vector<std::string> domain_;
  std::string a_value_;
  std::vector<std::pair<std::string, std::string>> f_table_;
  VocabularyPtr vocab_;
  std::vector<bool> assigned_;
};

}  // namespace testgen
