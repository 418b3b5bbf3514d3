#include "exact_asm/structure.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <set>

#include "exact_asm/error.hpp"

namespace exact_asm {

namespace {

class AtomTable {
 public:
  std::uint32_t intern(std::string_view name) {
    std::lock_guard lock(mutex_);
    if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }
  const std::string& name(std::uint32_t id) {
    std::lock_guard lock(mutex_);
    return names_[id];
  }

 private:
  std::mutex mutex_;
  std::deque<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

AtomTable& atoms() {
  static AtomTable table;
  return table;
}

constexpr std::string_view kKeywords[] = {"if", "then", "case", "of", "when", "end"};

bool valid_symbol_name(std::string_view name, std::size_t arity) {
  if (name.empty()) return false;
  auto info = operator_info(name);
  if (info.fixity == Fixity::Infix) return arity == 2;
  if (info.fixity == Fixity::Prefix) return arity == 1;
  for (auto kw : kKeywords)
    if (name == kw) return false;
  if (std::all_of(name.begin(), name.end(), [](unsigned char c) { return std::isdigit(c); }))
    return true;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '\'';
  });
}

const Symbol kBuiltins[] = {
    {"true", 0, SymbolKind::Static},  {"false", 0, SymbolKind::Static},
    {"undef", 0, SymbolKind::Static}, {"=", 2, SymbolKind::Static},
    {"not", 1, SymbolKind::Static},   {"and", 2, SymbolKind::Static},
    {"or", 2, SymbolKind::Static},
};

std::string tuple_str(const Tuple& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += t[i].name();
  }
  return out;
}

}  // namespace

Value Value::named(std::string_view name) { return Value(atoms().intern(name)); }
const std::string& Value::name() const { return atoms().name(id_); }

std::strong_ordering operator<=>(Value a, Value b) {
  if (a.id_ == b.id_) return std::strong_ordering::equal;
  int c = a.name().compare(b.name());
  return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::string EvalResult::str() const { return hangs() ? "\xE2\x80\xA2" : value_->name(); }

// ---------------------------------------------------------------- Vocabulary

Vocabulary::Vocabulary(std::vector<Symbol> symbols, std::vector<std::string> distinguished) {
  for (const auto& b : kBuiltins) {
    auto it = std::find_if(symbols.begin(), symbols.end(),
                           [&](const Symbol& s) { return s.name == b.name; });
    if (it == symbols.end()) {
      symbols_.push_back(b);
    } else if (!(*it == b)) {
      throw SpecificationError("symbol '" + b.name + "' must be static with arity " +
                               std::to_string(b.arity));
    }
  }
  for (auto& s : symbols) {
    if (is_builtin(s.name)) continue;
    if (!valid_symbol_name(s.name, s.arity))
      throw SpecificationError("invalid symbol name or arity: '" + s.name + "'/" +
                               std::to_string(s.arity));
    symbols_.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i].name, i).second)
      throw SpecificationError("duplicate symbol '" + symbols_[i].name + "'");
  }

  distinguished_ = {"true", "false", "undef"};
  for (auto& d : distinguished) {
    if (std::find(distinguished_.begin(), distinguished_.end(), d) != distinguished_.end())
      continue;
    if (auto idx = index_of(d)) {
      const auto& s = symbols_[*idx];
      if (s.arity != 0 || s.kind != SymbolKind::Static)
        throw SpecificationError("distinguished symbol '" + d + "' must be a static constant");
    } else {
      if (!valid_symbol_name(d, 0))
        throw SpecificationError("invalid distinguished symbol '" + d + "'");
      index_.emplace(d, symbols_.size());
      symbols_.push_back({d, 0, SymbolKind::Static});
    }
    distinguished_.push_back(d);
  }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Symbol* Vocabulary::find(std::string_view name) const {
  auto idx = index_of(name);
  return idx ? &symbols_[*idx] : nullptr;
}

bool Vocabulary::is_distinguished(std::string_view name) const {
  return std::find(distinguished_.begin(), distinguished_.end(), name) != distinguished_.end();
}

void Vocabulary::check(Term t) const {
  const Symbol* s = find(t.head());
  if (!s) throw SpecificationError("unknown symbol '" + t.head() + "' in term " + t.str());
  if (s->arity != t.arity())
    throw SpecificationError("symbol '" + t.head() + "' expects " + std::to_string(s->arity) +
                             " argument(s), got " + std::to_string(t.arity()));
  for (Term a : t.args()) check(a);
}

bool Vocabulary::is_builtin(std::string_view name) {
  return std::any_of(std::begin(kBuiltins), std::end(kBuiltins),
                     [&](const Symbol& s) { return s.name == name; });
}

bool operator==(const Vocabulary& a, const Vocabulary& b) {
  return a.symbols_ == b.symbols_ && a.distinguished_ == b.distinguished_;
}

// ---------------------------------------------------------------- Updates

std::string Location::str() const {
  if (args.empty()) return symbol;
  return symbol + "(" + tuple_str(args) + ")";
}

UpdateSet make_update_set(std::vector<Update> updates) {
  std::sort(updates.begin(), updates.end());
  updates.erase(std::unique(updates.begin(), updates.end()), updates.end());
  return updates;
}

bool has_clash(const UpdateSet& updates) {
  for (std::size_t i = 1; i < updates.size(); ++i)
    if (updates[i].location == updates[i - 1].location) return true;
  return false;
}

// ---------------------------------------------------------------- Structure

bool PartialStructure::in_base(Value v) const {
  return std::binary_search(base_.begin(), base_.end(), v);
}

PartialStructure PartialStructure::with_flags(StateFlags flags) const {
  PartialStructure copy = *this;
  copy.flags_ = flags;
  return copy;
}

const Table& PartialStructure::table(std::string_view symbol) const {
  auto idx = vocabulary_->index_of(symbol);
  if (!idx) throw SpecificationError("unknown symbol '" + std::string(symbol) + "'");
  return *tables_[*idx];
}

EvalResult PartialStructure::lookup(std::size_t symbol_index, const Tuple& args) const {
  const Table& t = *tables_[symbol_index];
  auto it = t.find(args);
  if (it == t.end()) return EvalResult::hang();
  return it->second;
}

EvalResult PartialStructure::lookup(const Location& location) const {
  auto idx = vocabulary_->index_of(location.symbol);
  if (!idx) throw SpecificationError("unknown symbol '" + location.symbol + "'");
  return lookup(*idx, location.args);
}

Value PartialStructure::constant(std::string_view name) const {
  auto r = lookup(Location{std::string(name), {}});
  if (r.hangs()) throw SpecificationError("constant '" + std::string(name) + "' is undefined");
  return r.value();
}

bool PartialStructure::is_distinguished_value(Value v) const {
  return std::find(distinguished_values_.begin(), distinguished_values_.end(), v) !=
         distinguished_values_.end();
}

PartialStructure PartialStructure::with_location(const Location& location,
                                                 std::optional<Value> value) const {
  auto idx = vocabulary_->index_of(location.symbol);
  if (!idx) throw SpecificationError("unknown symbol '" + location.symbol + "'");
  auto table = std::make_shared<Table>(*tables_[*idx]);
  if (value)
    (*table).insert_or_assign(location.args, *value);
  else
    table->erase(location.args);
  PartialStructure copy = *this;
  copy.tables_[*idx] = std::move(table);
  copy.validate();
  return copy;
}

bool PartialStructure::same_interpretation(const PartialStructure& other) const {
  if (base_ != other.base_ || !(*vocabulary_ == *other.vocabulary_)) return false;
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    if (tables_[i] == other.tables_[i]) continue;
    if (*tables_[i] != *other.tables_[i]) return false;
  }
  return true;
}

void PartialStructure::validate() {
  const auto& vocab = *vocabulary_;
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    const Symbol& s = vocab.at(i);
    for (const auto& [args, value] : *tables_[i]) {
      if (args.size() != s.arity)
        throw SpecificationError("entry for '" + s.name + "' has wrong arity");
      for (Value a : args)
        if (!in_base(a))
          throw SpecificationError("argument '" + a.name() + "' of '" + s.name +
                                   "' is not in the base set");
      if (!in_base(value))
        throw SpecificationError("value '" + value.name() + "' of '" + s.name +
                                 "' is not in the base set");
    }
  }
  distinguished_values_.clear();
  for (const auto& d : vocab.distinguished()) {
    const Table& t = table(d);
    if (t.size() != 1)
      throw SpecificationError("distinguished constant '" + d + "' must be defined");
    Value v = t.begin()->second;
    if (is_distinguished_value(v))
      throw SpecificationError("distinguished constants must denote distinct elements ('" + d +
                               "')");
    distinguished_values_.push_back(v);
  }
  true_ = constant("true");
  false_ = constant("false");
  Value undef = constant("undef");
  for (const auto& [args, value] : table(kEquals)) {
    bool identical = args[0] == args[1];
    if (value == undef) continue;
    if ((value == true_ && identical) || (value == false_ && !identical)) continue;
    throw SpecificationError("'=' disagrees with identity at (" + tuple_str(args) + ")");
  }
}

// ---------------------------------------------------------------- Builder

StructureBuilder::StructureBuilder(VocabularyPtr vocabulary, std::vector<Value> base)
    : vocabulary_(std::move(vocabulary)), base_(std::move(base)) {
  std::sort(base_.begin(), base_.end());
  if (std::adjacent_find(base_.begin(), base_.end()) != base_.end())
    throw SpecificationError("base set lists an element twice");
  tables_.resize(vocabulary_->symbols().size());
  explicit_.resize(vocabulary_->symbols().size(), false);
}

StructureBuilder& StructureBuilder::set(std::string_view symbol, Tuple args, Value value) {
  auto idx = vocabulary_->index_of(symbol);
  if (!idx) throw SpecificationError("unknown symbol '" + std::string(symbol) + "'");
  tables_[*idx].insert_or_assign(std::move(args), value);
  explicit_[*idx] = true;
  return *this;
}

StructureBuilder& StructureBuilder::declare(std::string_view symbol) {
  auto idx = vocabulary_->index_of(symbol);
  if (!idx) throw SpecificationError("unknown symbol '" + std::string(symbol) + "'");
  explicit_[*idx] = true;
  return *this;
}

StructureBuilder& StructureBuilder::flags(StateFlags flags) {
  flags_ = flags;
  return *this;
}

PartialStructure StructureBuilder::build() const {
  const auto& vocab = *vocabulary_;
  std::vector<Table> tables = tables_;
  auto fill = [&](std::string_view name, auto&& fn) {
    auto idx = *vocab.index_of(name);
    if (!explicit_[idx]) fn(tables[idx]);
  };
  for (const auto& d : vocab.distinguished()) {
    fill(d, [&](Table& t) { t.insert_or_assign(Tuple{}, Value::named(d)); });
  }
  // Defaults for connectives need the true/false elements.
  auto constant_or = [&](std::string_view name) {
    const Table& t = tables[*vocab.index_of(name)];
    auto it = t.find(Tuple{});
    return it != t.end() ? it->second : Value::named(name);
  };
  Value tv = constant_or("true");
  Value fv = constant_or("false");
  auto truth = [&](bool b) { return b ? tv : fv; };
  fill(kEquals, [&](Table& t) {
    for (Value a : base_)
      for (Value b : base_) t.insert_or_assign(Tuple{a, b}, truth(a == b));
  });
  fill(kNot, [&](Table& t) {
    for (Value a : base_) t.insert_or_assign(Tuple{a}, truth(a != tv));
  });
  fill(kAnd, [&](Table& t) {
    for (Value a : base_)
      for (Value b : base_) t.insert_or_assign(Tuple{a, b}, truth(a == tv && b == tv));
  });
  fill(kOr, [&](Table& t) {
    for (Value a : base_)
      for (Value b : base_) t.insert_or_assign(Tuple{a, b}, truth(a == tv || b == tv));
  });

  PartialStructure s;
  s.vocabulary_ = vocabulary_;
  s.base_ = base_;
  s.flags_ = flags_;
  s.tables_.reserve(tables.size());
  for (auto& t : tables) s.tables_.push_back(std::make_shared<const Table>(std::move(t)));
  s.validate();
  return s;
}

// ---------------------------------------------------------------- Evaluation

EvalResult eval_term(const PartialStructure& state, Term t) {
  auto idx = state.vocabulary().index_of(t.head());
  if (!idx) throw SpecificationError("unknown symbol '" + t.head() + "' in term " + t.str());
  if (state.vocabulary().at(*idx).arity != t.arity())
    throw SpecificationError("arity mismatch for '" + t.head() + "' in term " + t.str());
  Tuple args;
  args.reserve(t.arity());
  for (Term a : t.args()) {
    EvalResult r = eval_term(state, a);
    if (r.hangs()) return r;
    args.push_back(r.value());
  }
  return state.lookup(*idx, args);
}

bool agree(const PartialStructure& x, const PartialStructure& y, std::span<const Term> terms) {
  for (Term t : terms)
    if (eval_term(x, t) != eval_term(y, t)) return false;
  return true;
}

PartialStructure apply_updates(const PartialStructure& state, const UpdateSet& updates) {
  if (updates.empty()) return state;
  if (has_clash(updates)) throw ContractViolation("inconsistent update set");
  PartialStructure next = state;
  std::map<std::size_t, std::shared_ptr<Table>> touched;
  for (const auto& u : updates) {
    auto idx = state.vocabulary().index_of(u.location.symbol);
    if (!idx) throw ContractViolation("update of unknown symbol '" + u.location.symbol + "'");
    const Symbol& s = state.vocabulary().at(*idx);
    if (s.kind != SymbolKind::Dynamic)
      throw ContractViolation("update of static symbol '" + s.name + "'");
    if (u.location.args.size() != s.arity)
      throw ContractViolation("update of '" + s.name + "' has wrong arity");
    for (Value a : u.location.args)
      if (!state.in_base(a))
        throw ContractViolation("update argument '" + a.name() + "' outside the base set");
    if (!state.in_base(u.value))
      throw ContractViolation("update value '" + u.value.name() + "' outside the base set");
    auto& table = touched[*idx];
    if (!table) table = std::make_shared<Table>(state.table(*idx));
    table->insert_or_assign(u.location.args, u.value);
  }
  for (auto& [idx, table] : touched) next.tables_[idx] = std::move(table);
  next.flags_ = {};
  return next;
}

// ---------------------------------------------------------------- Isomorphism

Bijection::Bijection(std::vector<std::pair<Value, Value>> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
}

Value Bijection::operator()(Value v) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), v,
                             [](const auto& p, Value x) { return p.first < x; });
  if (it == pairs_.end() || it->first != v)
    throw ContractViolation("value '" + v.name() + "' outside the bijection's domain");
  return it->second;
}

Tuple Bijection::operator()(const Tuple& t) const {
  Tuple out;
  out.reserve(t.size());
  for (Value v : t) out.push_back((*this)(v));
  return out;
}

Update Bijection::operator()(const Update& u) const {
  return Update{Location{u.location.symbol, (*this)(u.location.args)}, (*this)(u.value)};
}

namespace {

// Backtracking search. Elements of x are assigned in a fixed order; each
// table entry is checked as soon as all its elements are assigned.
class IsoSearch {
 public:
  IsoSearch(const PartialStructure& x, const PartialStructure& y, std::size_t limit)
      : x_(x), y_(y), limit_(limit) {}

  std::vector<Bijection> run() {
    if (x_.base().size() != y_.base().size() || !(x_.vocabulary() == y_.vocabulary()))
      return {};
    const auto n_symbols = x_.vocabulary().symbols().size();
    for (std::size_t s = 0; s < n_symbols; ++s)
      if (x_.table(s).size() != y_.table(s).size()) return {};

    auto xb = x_.base();
    for (std::size_t i = 0; i < xb.size(); ++i) position_[xb[i].id()] = i;
    image_.assign(xb.size(), std::nullopt);
    used_.clear();
    // Constants fix images up front.
    for (std::size_t s = 0; s < n_symbols; ++s) {
      if (x_.vocabulary().at(s).arity != 0) continue;
      const auto& tx = x_.table(s);
      if (tx.empty()) continue;
      Value from = tx.begin()->second;
      Value to = y_.table(s).begin()->second;
      if (!bind(from, to)) return {};
    }
    // Bucket entries by the latest-assigned element they mention.
    order_.clear();
    for (std::size_t i = 0; i < xb.size(); ++i)
      if (!image_[i]) order_.push_back(i);
    std::vector<std::size_t> rank(xb.size(), 0);
    for (std::size_t k = 0; k < order_.size(); ++k) rank[order_[k]] = k + 1;
    checks_.assign(order_.size() + 1, {});
    for (std::size_t s = 0; s < n_symbols; ++s) {
      for (const auto& [args, value] : x_.table(s)) {
        std::size_t r = rank[position_[value.id()]];
        for (Value a : args) r = std::max(r, rank[position_[a.id()]]);
        checks_[r].push_back({s, &args, value});
      }
    }
    if (!check_level(0)) return {};
    search(0);
    return std::move(found_);
  }

 private:
  struct Entry {
    std::size_t symbol;
    const Tuple* args;
    Value value;
  };

  bool bind(Value from, Value to) {
    auto pos = position_.at(from.id());
    if (image_[pos]) return *image_[pos] == to;
    if (!y_.in_base(to) || used_.count(to.id())) return false;
    image_[pos] = to;
    used_.insert(to.id());
    return true;
  }

  Value map(Value v) const { return *image_[position_.at(v.id())]; }

  bool check_level(std::size_t level) const {
    for (const auto& e : checks_[level]) {
      Tuple mapped;
      for (Value a : *e.args) mapped.push_back(map(a));
      EvalResult r = y_.lookup(e.symbol, mapped);
      if (r.hangs() || r.value() != map(e.value)) return false;
    }
    return true;
  }

  void search(std::size_t k) {
    if (found_.size() >= limit_) return;
    if (k == order_.size()) {
      std::vector<std::pair<Value, Value>> pairs;
      auto xb = x_.base();
      for (std::size_t i = 0; i < xb.size(); ++i) pairs.emplace_back(xb[i], *image_[i]);
      found_.emplace_back(std::move(pairs));
      return;
    }
    std::size_t pos = order_[k];
    for (Value candidate : y_.base()) {
      if (used_.count(candidate.id())) continue;
      image_[pos] = candidate;
      used_.insert(candidate.id());
      if (check_level(k + 1)) search(k + 1);
      used_.erase(candidate.id());
      image_[pos] = std::nullopt;
      if (found_.size() >= limit_) return;
    }
  }

  const PartialStructure& x_;
  const PartialStructure& y_;
  std::size_t limit_;
  std::unordered_map<std::uint32_t, std::size_t> position_;
  std::vector<std::optional<Value>> image_;
  std::set<std::uint32_t> used_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<Entry>> checks_;
  std::vector<Bijection> found_;
};

}  // namespace

std::vector<Bijection> isomorphisms(const PartialStructure& x, const PartialStructure& y,
                                    std::size_t limit) {
  if (limit == 0) return {};
  return IsoSearch(x, y, limit).run();
}

bool isomorphic(const PartialStructure& x, const PartialStructure& y) {
  return !isomorphisms(x, y, 1).empty();
}

}  // namespace exact_asm
