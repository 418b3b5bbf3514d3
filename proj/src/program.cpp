#include "exact_asm/program.hpp"

#include "exact_asm/error.hpp"

namespace exact_asm {

Program Program::assign(std::string symbol, std::vector<Term> args, Term rhs) {
  return Program{Assign{std::move(symbol), std::move(args), rhs}};
}

Program Program::par(std::vector<Program> children) { return Program{Par{std::move(children)}}; }

Program Program::guarded(Term cond, Program body) { return Program{If{cond, std::move(body)}}; }

Program Program::cases(std::vector<Term> queries, std::vector<CaseRow> rows) {
  return Program{Case{std::move(queries), std::move(rows)}};
}

bool Program::is_skip() const {
  auto* p = std::get_if<Par>(&node);
  return p && p->children.empty();
}

namespace {

constexpr std::size_t kLineWidth = 72;

using Lines = std::vector<std::string>;

void indent_into(Lines& out, const Lines& body, const std::string& first, const std::string& rest) {
  for (std::size_t i = 0; i < body.size(); ++i) out.push_back((i == 0 ? first : rest) + body[i]);
}

Lines render(const Program& p);

Lines render_assign(const Assign& a) { return {a.lhs().str() + " := " + a.rhs.str()}; }

Lines render_par(const Par& par) {
  if (par.children.empty()) return {"[ ]"};
  std::vector<Lines> parts;
  bool flat = true;
  std::size_t width = 4;
  for (const Program& c : par.children) {
    parts.push_back(render(c));
    flat = flat && parts.back().size() == 1;
    width += parts.back()[0].size() + 4;
  }
  if (flat && width <= kLineWidth) {
    std::string line = "[ ";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) line += " || ";
      line += parts[i][0];
    }
    return {line + " ]"};
  }
  Lines out;
  for (std::size_t i = 0; i < parts.size(); ++i) indent_into(out, parts[i], i == 0 ? "[ " : "|| ", "   ");
  out.back() += " ]";
  return out;
}

Lines render_guarded(const std::string& head, const Program& body) {
  Lines inner = render(body);
  if (inner.size() == 1 && head.size() + 1 + inner[0].size() <= kLineWidth)
    return {head + " " + inner[0]};
  Lines out{head};
  indent_into(out, inner, "  ", "  ");
  return out;
}

std::string join_terms(const std::vector<Term>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += ", ";
    out += terms[i].str();
  }
  return out;
}

Lines render_case(const Case& c) {
  Lines out{"case " + join_terms(c.queries) + " of"};
  for (const CaseRow& row : c.rows) {
    std::string head = "when ";
    for (std::size_t i = 0; i < row.literals.size(); ++i) {
      if (i) head += ", ";
      head += row.literals[i];
    }
    indent_into(out, render_guarded(head + " then", *row.body), "  ", "  ");
  }
  out.push_back("end");
  return out;
}

Lines render(const Program& p) {
  return std::visit(
      [](const auto& n) -> Lines {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Assign>) return render_assign(n);
        else if constexpr (std::is_same_v<N, Par>) return render_par(n);
        else if constexpr (std::is_same_v<N, If>) return render_guarded("if " + n.cond.str() + " then", *n.body);
        else return render_case(n);
      },
      p.node);
}

void flatten_into(const Program& p, std::vector<Program>& out) {
  if (std::holds_alternative<Assign>(p.node)) {
    out.push_back(p);
  } else if (auto* par = std::get_if<Par>(&p.node)) {
    for (const Program& c : par->children) flatten_into(c, out);
  } else if (auto* g = std::get_if<If>(&p.node)) {
    std::vector<Program> branches;
    flatten_into(*g->body, branches);
    // An empty body keeps its guard so the condition is still explored.
    if (branches.empty()) out.push_back(Program::guarded(g->cond, Program::skip()));
    for (const Program& b : branches) out.push_back(Program::guarded(g->cond, b));
  } else {
    throw ContractViolation("flatten: case statements are not supported");
  }
}

void collect(const Program& p, std::vector<Term>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Assign>) {
          out.insert(out.end(), n.args.begin(), n.args.end());
          out.push_back(n.rhs);
        } else if constexpr (std::is_same_v<N, Par>) {
          for (const Program& c : n.children) collect(c, out);
        } else if constexpr (std::is_same_v<N, If>) {
          out.push_back(n.cond);
          collect(*n.body, out);
        } else {
          out.insert(out.end(), n.queries.begin(), n.queries.end());
          for (const CaseRow& r : n.rows) collect(*r.body, out);
        }
      },
      p.node);
}

}  // namespace

std::string print_program(const Program& p) {
  std::string out;
  for (const std::string& line : render(p)) {
    if (!out.empty()) out += '\n';
    out += line;
  }
  return out;
}

Program flatten(const Program& p) {
  std::vector<Program> out;
  flatten_into(p, out);
  return Program::par(std::move(out));
}

TermSet critical_terms(const Program& p) {
  std::vector<Term> terms;
  collect(p, terms);
  return TermSet(std::move(terms)).closed();
}

void check_program(const Program& p, const Vocabulary& vocabulary) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Assign>) {
          const Symbol* s = vocabulary.find(n.symbol);
          if (!s) throw SpecificationError("unknown symbol '" + n.symbol + "'");
          if (s->kind != SymbolKind::Dynamic)
            throw SpecificationError("cannot assign to static symbol '" + n.symbol + "'");
          vocabulary.check(n.lhs());
          vocabulary.check(n.rhs);
        } else if constexpr (std::is_same_v<N, Par>) {
          for (const Program& c : n.children) check_program(c, vocabulary);
        } else if constexpr (std::is_same_v<N, If>) {
          vocabulary.check(n.cond);
          check_program(*n.body, vocabulary);
        } else {
          for (Term q : n.queries) vocabulary.check(q);
          for (const CaseRow& r : n.rows) {
            if (r.literals.size() != n.queries.size())
              throw SpecificationError("case row literal count does not match the queries");
            for (const std::string& lit : r.literals)
              if (!vocabulary.is_distinguished(lit))
                throw SpecificationError("case literal '" + lit + "' is not a distinguished constant");
            check_program(*r.body, vocabulary);
          }
        }
      },
      p.node);
}

}  // namespace exact_asm
