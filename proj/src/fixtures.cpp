#include "exact_asm/fixtures.hpp"

#include <string>

#include "exact_asm/error.hpp"
#include "exact_asm/io.hpp"

namespace exact_asm::fixtures {
namespace {

using io::json;

Value v(std::string_view name) { return Value::named(name); }
Value num(int k) { return Value::named(std::to_string(k)); }

std::vector<Value> with_builtin_values(std::initializer_list<std::string_view> extra) {
  std::vector<Value> base{v("true"), v("false"), v("undef")};
  for (auto e : extra) base.push_back(v(e));
  return base;
}

UpdateOutcome updates(const PartialStructure& state,
                      std::initializer_list<std::pair<std::string_view, std::string_view>> pairs) {
  std::vector<Update> u;
  for (auto [symbol, value] : pairs) {
    Value val = eval_term(state, Term::make(value)).value();
    u.push_back({Location{std::string(symbol), {}}, val});
  }
  return UpdateOutcome::updates(make_update_set(std::move(u)));
}

TermSet terms(const Vocabulary& vocab, std::initializer_list<std::string_view> texts) {
  TermSet out;
  for (auto t : texts) out.insert(parse_term(t, &vocab));
  return out;
}

json named_states(const std::vector<std::pair<std::string, PartialStructure>>& states) {
  json doc = json::array();
  for (const auto& [name, state] : states) {
    json s = io::state_to_json(state);
    s["name"] = name;
    doc.push_back(std::move(s));
  }
  return doc;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// One block per (n, i, j) so that only 0 <= i < j <= n is enumerated.
json sorting_enumeration(const std::vector<int>& sizes, int value_count) {
  json blocks = json::array();
  for (int n : sizes) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        std::vector<int> zeros(static_cast<std::size_t>(n), 0);
        json vary = json::array();
        for (int k = 0; k < n; ++k) {
          json values = json::array();
          for (int x = 0; x < value_count; ++x) values.push_back(std::to_string(x));
          vary.push_back({{"location", {"F", {std::to_string(k)}}}, {"values", values}});
        }
        blocks.push_back(
            {{"template", io::state_to_json(sorting_state(n, i, j, zeros))}, {"vary", vary}});
      }
    }
  }
  return {{"blocks", blocks}};
}

}  // namespace

VocabularyPtr sorting_vocabulary() {
  static const VocabularyPtr vocab = std::make_shared<const Vocabulary>(
      std::vector<Symbol>{{"1", 0, SymbolKind::Static},
                          {"2", 0, SymbolKind::Static},
                          {"+", 2, SymbolKind::Static},
                          {">", 2, SymbolKind::Static},
                          {"n", 0, SymbolKind::Static},
                          {"F", 1, SymbolKind::Dynamic},
                          {"i", 0, SymbolKind::Dynamic},
                          {"j", 0, SymbolKind::Dynamic}},
      std::vector<std::string>{});
  return vocab;
}

PartialStructure sorting_state(int n, int i, int j, const std::vector<int>& values, bool initial) {
  if (n < 0 || n > kSortingMaxInt || static_cast<int>(values.size()) != n || i < 0 ||
      i > kSortingMaxInt || j < 0 || j > kSortingMaxInt)
    throw SpecificationError("sorting state out of range");
  std::vector<Value> base = with_builtin_values({});
  for (int k = 0; k <= kSortingMaxInt; ++k) base.push_back(num(k));

  StructureBuilder b(sorting_vocabulary(), base);
  b.set("1", num(1)).set("2", num(2)).set("n", num(n)).set("i", num(i)).set("j", num(j));
  for (int x = 0; x <= kSortingMaxInt; ++x) {
    for (int y = 0; y <= kSortingMaxInt; ++y) {
      if (x + y <= kSortingMaxInt) b.set("+", {num(x), num(y)}, num(x + y));
      b.set(">", {num(x), num(y)}, v(x > y ? "true" : "false"));
    }
  }
  for (int k = 0; k <= kSortingMaxInt; ++k)
    b.set("F", {num(k)}, k < n ? num(values[static_cast<std::size_t>(k)]) : v("undef"));
  b.flags({.initial = initial, .terminal = false});
  return b.build();
}

std::vector<PartialStructure> sorting_states(const std::vector<int>& sizes, int value_count) {
  return enumerate_states(io::enumeration_from_json(sorting_enumeration(sizes, value_count)));
}

VocabularyPtr example6_vocabulary() {
  static const VocabularyPtr vocab = [] {
    std::vector<Symbol> symbols;
    for (const char* name : {"d", "c", "b", "s", "t", "x", "y"})
      symbols.push_back({name, 0, SymbolKind::Dynamic});
    return std::make_shared<const Vocabulary>(std::move(symbols), std::vector<std::string>{});
  }();
  return vocab;
}

std::vector<std::pair<std::string, PartialStructure>> example6_states() {
  auto make = [](bool d, bool c, bool b) {
    auto tv = [](bool x) { return v(x ? "true" : "false"); };
    return StructureBuilder(example6_vocabulary(), with_builtin_values({"e1", "e2"}))
        .set("d", tv(d))
        .set("c", tv(c))
        .set("b", tv(b))
        .set("s", v("undef"))
        .set("t", v("undef"))
        .set("x", v("e1"))
        .set("y", v("e2"))
        .build();
  };
  return {{"X", make(true, true, true)},     {"Y0", make(true, false, false)},
          {"Y1", make(true, false, true)},   {"Y2", make(true, true, false)},
          {"Z00", make(false, false, false)}, {"Z01", make(false, false, true)},
          {"Z10", make(false, true, false)},  {"Z11", make(false, true, true)}};
}

AlgorithmSpec example6_spec() {
  const Vocabulary& vocab = *example6_vocabulary();
  std::vector<SpecState> rows;
  for (auto& [name, state] : example6_states()) {
    SpecState row{name, state, {}, UpdateOutcome::halt_success()};
    if (name == "X") {
      row.gamma = terms(vocab, {"d", "c", "b", "x"});
      row.delta = updates(state, {{"s", "x"}});
    } else if (name == "Y0") {
      row.gamma = terms(vocab, {"d", "c", "b", "x", "y"});
      row.delta = updates(state, {{"t", "x"}, {"s", "y"}});
    } else if (name == "Y1") {
      row.gamma = terms(vocab, {"d", "c", "b", "x"});
      row.delta = updates(state, {{"t", "x"}});
    } else if (name == "Y2") {
      row.gamma = terms(vocab, {"d", "c", "b", "y"});
      row.delta = updates(state, {{"s", "y"}});
    } else {
      row.gamma = terms(vocab, {"d"});
      row.state = row.state.with_flags({.initial = false, .terminal = true});
    }
    rows.push_back(std::move(row));
  }
  return AlgorithmSpec(std::move(rows));
}

AlgorithmSpec remark3_spec() {
  static const VocabularyPtr vocab = std::make_shared<const Vocabulary>(
      std::vector<Symbol>{{"b", 0, SymbolKind::Dynamic},
                          {"c", 0, SymbolKind::Dynamic},
                          {"d", 0, SymbolKind::Dynamic}},
      std::vector<std::string>{});
  auto make = [](bool b, bool c, bool d) {
    auto tv = [](bool x) { return v(x ? "true" : "false"); };
    return StructureBuilder(vocab, with_builtin_values({}))
        .set("b", tv(b))
        .set("c", tv(c))
        .set("d", tv(d))
        .build();
  };
  auto none = UpdateOutcome::updates({});
  std::vector<SpecState> rows;
  rows.push_back({"X", make(false, false, true), terms(*vocab, {"b", "d"}), none});
  rows.push_back({"Y", make(true, true, false), terms(*vocab, {"b", "c"}), none});
  rows.push_back({"Z", make(true, false, false), terms(*vocab, {"c", "d"}), none});
  return AlgorithmSpec(std::move(rows));
}

std::vector<std::pair<std::string, PartialStructure>> partial_f_states() {
  static const VocabularyPtr vocab = std::make_shared<const Vocabulary>(
      std::vector<Symbol>{{"a", 0, SymbolKind::Static},
                          {"f", 1, SymbolKind::Static},
                          {"x", 0, SymbolKind::Dynamic},
                          {"y", 0, SymbolKind::Dynamic}},
      std::vector<std::string>{});
  auto make = [](std::string_view x) {
    return StructureBuilder(vocab, with_builtin_values({"a", "b", "c"}))
        .set("a", v("a"))
        .set("f", {v("b")}, v("c"))
        .set("x", v(x))
        .set("y", v("undef"))
        .build();
  };
  return {{"at-a", make("a")}, {"at-b", make("b")}};
}

std::vector<std::pair<std::string, PartialStructure>> magic_case_states() {
  static const VocabularyPtr vocab = std::make_shared<const Vocabulary>(
      std::vector<Symbol>{{"light", 0, SymbolKind::Dynamic}, {"go", 0, SymbolKind::Dynamic}},
      std::vector<std::string>{"red", "green"});
  auto make = [](std::string_view light) {
    return StructureBuilder(vocab, with_builtin_values({"red", "green", "amber"}))
        .set("light", v(light))
        .set("go", v("undef"))
        .build();
  };
  return {{"red", make("red")},
          {"green", make("green")},
          {"unset", make("undef")},
          {"amber", make("amber")}};
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> all{"sorting", "example6", "remark3", "partial-f",
                                            "magic-case"};
  return all;
}

std::vector<std::pair<std::string, std::string>> files(std::string_view name) {
  if (name == "sorting") {
    return {{"program.asm", std::string(kSortingProgram)},
            {"initial.json", dump(io::state_to_json(sorting_state(3, 0, 1, {2, 1, 0}, true)))},
            {"enumeration.json", dump(sorting_enumeration({2, 3}, 3))}};
  }
  if (name == "example6") {
    return {{"program.asm", std::string(kExample6Program)},
            {"states.json", dump(named_states(example6_states()))},
            {"spec.json", dump(io::spec_to_json(example6_spec()))}};
  }
  if (name == "remark3") return {{"spec.json", dump(io::spec_to_json(remark3_spec()))}};
  if (name == "partial-f") {
    return {{"program.asm", std::string(kPartialFProgram)},
            {"normal-form.asm", std::string(kPartialFNormalForm)},
            {"states.json", dump(named_states(partial_f_states()))}};
  }
  if (name == "magic-case") {
    return {{"program.asm", std::string(kMagicCaseProgram)},
            {"states.json", dump(named_states(magic_case_states()))}};
  }
  throw SpecificationError("unknown fixture '" + std::string(name) + "'");
}

}  // namespace exact_asm::fixtures
