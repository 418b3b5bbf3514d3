#include <cctype>
#include <optional>

#include "exact_asm/error.hpp"
#include "exact_asm/program.hpp"

namespace exact_asm {

namespace {

enum class Tok { Ident, Number, Op, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool is_keyword(std::string_view s) {
  return s == "if" || s == "then" || s == "case" || s == "of" || s == "when" || s == "end" ||
         s == "and" || s == "or" || s == "not";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n; ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (text_.substr(pos_, 2) == "//") {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool starts(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  Token next() {
    std::size_t line = line_, col = col_;
    unsigned char c = static_cast<unsigned char>(text_[pos_]);
    if (std::isalpha(c) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size()) {
        unsigned char d = static_cast<unsigned char>(text_[pos_]);
        if (!(std::isalnum(d) || d == '_' || d == '\'')) break;
        advance();
      }
      return {Tok::Ident, std::string(text_.substr(start, pos_ - start)), line, col};
    }
    if (std::isdigit(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        advance();
      return {Tok::Number, std::string(text_.substr(start, pos_ - start)), line, col};
    }
    // UTF-8 spellings of the ASCII operators.
    static const std::pair<std::string_view, std::string_view> kUnicode[] = {
        {"\xE2\x80\x96", "||"},  // ‖
        {"\xE2\x89\xA0", "!="},  // ≠
        {"\xE2\x89\xA4", "<="},  // ≤
        {"\xE2\x89\xA5", ">="},  // ≥
        {"\xC2\xAC", "not"},     // ¬
        {"\xE2\x88\xA7", "and"},  // ∧
        {"\xE2\x88\xA8", "or"},   // ∨
    };
    for (auto [spelling, canonical] : kUnicode) {
      if (starts(spelling)) {
        advance(spelling.size());
        Tok kind = std::isalpha(static_cast<unsigned char>(canonical[0])) ? Tok::Ident : Tok::Op;
        return {kind, std::string(canonical), line, col};
      }
    }
    static const std::string_view kOps[] = {":=", "||", "!=", "<=", ">=", "[", "]", "(", ")",
                                            ",",  ";",  "=",  "<",  ">",  "+", "-", "*"};
    for (auto op : kOps) {
      if (starts(op)) {
        advance(op.size());
        return {Tok::Op, std::string(op), line, col};
      }
    }
    throw ParseError("unexpected character '" + std::string(1, static_cast<char>(c)) + "'", line,
                     col);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary* vocabulary)
      : tokens_(Lexer(text).run()), vocabulary_(vocabulary) {}

  Program program_eof() {
    Program p = program();
    expect_end();
    return p;
  }

  Term term_eof() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at_op(std::string_view op) const { return peek().kind == Tok::Op && peek().text == op; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  [[noreturn]] void fail(const std::string& message, const Token& at) const {
    throw ParseError(message, at.line, at.column);
  }

  std::string describe(const Token& t) const {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  void expect_op(std::string_view op) {
    if (!at_op(op)) fail("expected '" + std::string(op) + "', found " + describe(peek()), peek());
    ++pos_;
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail("expected '" + std::string(w) + "', found " + describe(peek()), peek());
    ++pos_;
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected " + describe(peek()), peek());
  }

  Term checked(Term t, const Token& at) const {
    if (!vocabulary_) return t;
    const Symbol* s = vocabulary_->find(t.head());
    if (!s) fail("unknown symbol '" + t.head() + "'", at);
    if (s->arity != t.arity())
      fail("symbol '" + t.head() + "' expects " + std::to_string(s->arity) +
               " argument(s), got " + std::to_string(t.arity()),
           at);
    return t;
  }

  // ------------------------------------------------------------ programs

  Program program() {
    const Token& start = peek();
    if (at_op("[")) return block();
    if (at_word("if")) {
      ++pos_;
      Term cond = term();
      expect_word("then");
      return Program::guarded(cond, program());
    }
    if (at_word("case")) return case_statement();
    if (start.kind == Tok::End) fail("expected a program, found end of input", start);
    return assignment();
  }

  Program block() {
    expect_op("[");
    std::vector<Program> children;
    if (!at_op("]")) {
      children.push_back(program());
      while (at_op("||")) {
        ++pos_;
        children.push_back(program());
      }
    }
    expect_op("]");
    return Program::par(std::move(children));
  }

  Program case_statement() {
    expect_word("case");
    std::vector<Term> queries{term()};
    while (at_op(",")) {
      ++pos_;
      queries.push_back(term());
    }
    expect_word("of");
    std::vector<CaseRow> rows;
    if (!at_word("when")) fail("expected 'when', found " + describe(peek()), peek());
    while (at_word("when")) {
      ++pos_;
      std::vector<std::string> literals;
      do {
        if (!literals.empty()) ++pos_;
        const Token& lit = peek();
        if (lit.kind != Tok::Ident && lit.kind != Tok::Number)
          fail("expected a distinguished constant, found " + describe(lit), lit);
        if (is_keyword(lit.text)) fail("expected a distinguished constant, found " + describe(lit), lit);
        if (vocabulary_ && !vocabulary_->is_distinguished(lit.text))
          fail("case literal '" + lit.text + "' is not a distinguished constant", lit);
        literals.push_back(lit.text);
        ++pos_;
      } while (at_op(","));
      if (literals.size() != queries.size())
        fail("case row has " + std::to_string(literals.size()) + " literal(s) for " +
                 std::to_string(queries.size()) + " quer" + (queries.size() == 1 ? "y" : "ies"),
             peek());
      expect_word("then");
      rows.push_back(CaseRow{std::move(literals), program()});
      if (at_op(";")) ++pos_;
    }
    if (at_word("end")) ++pos_;
    return Program::cases(std::move(queries), std::move(rows));
  }

  Program assignment() {
    const Token& start = peek();
    Term lhs = term();
    if (!at_op(":=")) fail("expected ':=', found " + describe(peek()), peek());
    ++pos_;
    Term rhs = term();
    if (operator_info(lhs.head()).fixity != Fixity::Application)
      fail("left-hand side of ':=' must be a function application", start);
    if (vocabulary_) {
      const Symbol* s = vocabulary_->find(lhs.head());
      if (s && s->kind == SymbolKind::Static)
        fail("cannot assign to static symbol '" + lhs.head() + "'", start);
    }
    std::vector<Term> args(lhs.args().begin(), lhs.args().end());
    return Program::assign(lhs.head(), std::move(args), rhs);
  }

  // ------------------------------------------------------------ terms

  Term term() { return disjunction(); }

  Term disjunction() {
    const Token& start = peek();
    Term t = conjunction_();
    while (at_word("or")) {
      ++pos_;
      t = checked(Term::make(kOr, {t, conjunction_()}), start);
    }
    return t;
  }

  Term conjunction_() {
    const Token& start = peek();
    Term t = negation_();
    while (at_word("and")) {
      ++pos_;
      t = checked(Term::make(kAnd, {t, negation_()}), start);
    }
    return t;
  }

  Term negation_() {
    const Token& start = peek();
    if (at_word("not")) {
      ++pos_;
      return checked(Term::make(kNot, {negation_()}), start);
    }
    return comparison();
  }

  Term comparison() {
    const Token& start = peek();
    Term left = additive();
    static const std::string_view kCmp[] = {"=", "!=", "<", ">", "<=", ">="};
    for (auto op : kCmp) {
      if (at_op(op)) {
        ++pos_;
        Term right = additive();
        if (op == "!=") return checked(negation(checked(equals(left, right), start)), start);
        return checked(Term::make(op, {left, right}), start);
      }
    }
    return left;
  }

  Term additive() {
    const Token& start = peek();
    Term t = multiplicative();
    while (at_op("+") || at_op("-")) {
      std::string op = peek().text;
      ++pos_;
      t = checked(Term::make(op, {t, multiplicative()}), start);
    }
    return t;
  }

  Term multiplicative() {
    const Token& start = peek();
    Term t = primary();
    while (at_op("*")) {
      ++pos_;
      t = checked(Term::make("*", {t, primary()}), start);
    }
    return t;
  }

  Term primary() {
    const Token& tok = peek();
    if (at_op("(")) {
      ++pos_;
      Term t = term();
      expect_op(")");
      return t;
    }
    if (tok.kind == Tok::Number) {
      ++pos_;
      return checked(Term::make(tok.text), tok);
    }
    if (tok.kind == Tok::Ident && !is_keyword(tok.text)) {
      ++pos_;
      std::vector<Term> args;
      if (at_op("(")) {
        ++pos_;
        args.push_back(term());
        while (at_op(",")) {
          ++pos_;
          args.push_back(term());
        }
        expect_op(")");
      }
      return checked(Term::make(tok.text, std::move(args)), tok);
    }
    fail("expected a term, found " + describe(tok), tok);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Vocabulary* vocabulary_;
};

}  // namespace

Program parse_program(std::string_view text, const Vocabulary* vocabulary) {
  return Parser(text, vocabulary).program_eof();
}

Term parse_term(std::string_view text, const Vocabulary* vocabulary) {
  return Parser(text, vocabulary).term_eof();
}

}  // namespace exact_asm
