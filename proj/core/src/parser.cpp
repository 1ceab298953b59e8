#include "pkit/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace pkit {

TermPtr TermExpr::constant(const Integer &v) {
  auto t = std::make_shared<TermExpr>();
  t->op = Op::Const;
  t->value = v;
  return t;
}

TermPtr TermExpr::variable(const std::string &n) {
  auto t = std::make_shared<TermExpr>();
  t->op = Op::Var;
  t->name = n;
  return t;
}

TermPtr TermExpr::add(TermPtr a, TermPtr b) {
  auto t = std::make_shared<TermExpr>();
  t->op = Op::Add;
  t->args = {std::move(a), std::move(b)};
  return t;
}

TermPtr TermExpr::sub(TermPtr a, TermPtr b) {
  auto t = std::make_shared<TermExpr>();
  t->op = Op::Sub;
  t->args = {std::move(a), std::move(b)};
  return t;
}

TermPtr TermExpr::neg(TermPtr a) {
  auto t = std::make_shared<TermExpr>();
  t->op = Op::Neg;
  t->args = {std::move(a)};
  return t;
}

TermPtr TermExpr::scale(const Integer &k, TermPtr a) {
  auto t = std::make_shared<TermExpr>();
  t->op = Op::Scale;
  t->value = k;
  t->args = {std::move(a)};
  return t;
}

LinearTerm normalize_term(const TermExpr &t) {
  switch (t.op) {
  case TermExpr::Op::Const: return LinearTerm(t.value);
  case TermExpr::Op::Var: return LinearTerm::var(t.name);
  case TermExpr::Op::Add: return normalize_term(*t.args[0]) + normalize_term(*t.args[1]);
  case TermExpr::Op::Sub: return normalize_term(*t.args[0]) - normalize_term(*t.args[1]);
  case TermExpr::Op::Neg: return -normalize_term(*t.args[0]);
  case TermExpr::Op::Scale: return normalize_term(*t.args[0]) * t.value;
  }
  return {};
}

Integer eval_raw(const TermExpr &t, const std::map<std::string, Integer> &env) {
  switch (t.op) {
  case TermExpr::Op::Const: return t.value;
  case TermExpr::Op::Var: {
    auto it = env.find(t.name);
    if (it == env.end()) throw DomainError("unbound variable '" + t.name + "'");
    return it->second;
  }
  case TermExpr::Op::Add: return eval_raw(*t.args[0], env) + eval_raw(*t.args[1], env);
  case TermExpr::Op::Sub: return eval_raw(*t.args[0], env) - eval_raw(*t.args[1], env);
  case TermExpr::Op::Neg: return -eval_raw(*t.args[0], env);
  case TermExpr::Op::Scale: return t.value * eval_raw(*t.args[0], env);
  }
  return 0;
}

namespace {

enum class Tok {
  End, Ident, Int, LParen, RParen, Dot, Comma, Plus, Minus, Star,
  Eq, Ne, Lt, Le, Gt, Ge, Cong, Arrow, DArrow, AndSym, OrSym, Bang,
  KwExists, KwForall, KwAnd, KwOr, KwNot, KwTrue, KwFalse, KwMod
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                              s[j] == '_' || s[j] == '\''))
        ++j;
      t.text = std::string(s.substr(i, j - i));
      static const std::pair<const char *, Tok> kws[] = {
          {"exists", Tok::KwExists}, {"forall", Tok::KwForall}, {"and", Tok::KwAnd},
          {"or", Tok::KwOr},         {"not", Tok::KwNot},       {"true", Tok::KwTrue},
          {"false", Tok::KwFalse},   {"mod", Tok::KwMod}};
      t.kind = Tok::Ident;
      for (const auto &[w, k] : kws)
        if (t.text == w) t.kind = k;
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
      out.push_back(t);
      continue;
    }
    static const std::pair<const char *, Tok> syms[] = {
        {"<->", Tok::DArrow}, {"===", Tok::Cong}, {"==", Tok::Eq}, {"!=", Tok::Ne},
        {"<=", Tok::Le},      {">=", Tok::Ge},    {"->", Tok::Arrow}, {"&&", Tok::AndSym},
        {"||", Tok::OrSym},   {"<", Tok::Lt},     {">", Tok::Gt},   {"(", Tok::LParen},
        {")", Tok::RParen},   {".", Tok::Dot},    {",", Tok::Comma}, {"+", Tok::Plus},
        {"-", Tok::Minus},    {"*", Tok::Star},   {"!", Tok::Bang},  {"=", Tok::Eq},
        {"&", Tok::AndSym},   {"|", Tok::OrSym}};
    bool matched = false;
    for (const auto &[w, k] : syms) {
      std::string_view sw(w);
      if (s.substr(i, sw.size()) == sw) {
        t.kind = k;
        t.text = std::string(sw);
        advance(sw.size());
        matched = true;
        break;
      }
    }
    if (!matched)
      throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula formula_top() {
    Formula f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

  TermPtr term_top() {
    TermPtr t = term();
    expect(Tok::End, "end of input");
    return t;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token &peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string &what) const {
    const Token &t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError("expected " + what + ", got " + got, t.line, t.col);
  }
  const Token &expect(Tok k, const std::string &what) {
    if (!at(k)) fail(what);
    return toks_[pos_++];
  }

  Formula formula() {
    if (at(Tok::KwExists) || at(Tok::KwForall)) return quantified();
    Formula a = implication();
    if (accept(Tok::DArrow)) {
      Formula b = implication();
      return Formula::conj({Formula::disj({Formula::negate(a), b}),
                            Formula::disj({Formula::negate(b), a})});
    }
    return a;
  }

  Formula implication() {
    Formula a = disjunction();
    if (accept(Tok::Arrow)) {
      Formula b = at(Tok::KwExists) || at(Tok::KwForall) ? quantified() : implication();
      return Formula::disj({Formula::negate(a), b});
    }
    return a;
  }

  Formula quantified() {
    bool ex = at(Tok::KwExists);
    ++pos_;
    std::vector<std::string> names;
    names.push_back(expect(Tok::Ident, "variable name").text);
    while (accept(Tok::Comma)) names.push_back(expect(Tok::Ident, "variable name").text);
    expect(Tok::Dot, "'.'");
    Formula body = formula();
    for (auto it = names.rbegin(); it != names.rend(); ++it)
      body = ex ? Formula::exists(*it, body) : Formula::forall(*it, body);
    return body;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (accept(Tok::KwOr) || accept(Tok::OrSym)) parts.push_back(conjunction());
    return parts.size() == 1 ? parts[0] : Formula::disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (accept(Tok::KwAnd) || accept(Tok::AndSym)) parts.push_back(unary());
    return parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));
  }

  Formula unary() {
    if (accept(Tok::KwNot) || accept(Tok::Bang)) return Formula::negate(unary());
    if (at(Tok::KwExists) || at(Tok::KwForall)) return quantified();
    if (accept(Tok::KwTrue)) return Formula::truth(true);
    if (accept(Tok::KwFalse)) return Formula::truth(false);
    if (at(Tok::LParen)) {
      std::size_t save = pos_;
      try {
        return atom();
      } catch (const SyntaxError &) {
        pos_ = save;
      }
      ++pos_;
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  static bool is_rel(Tok k) {
    return k == Tok::Eq || k == Tok::Ne || k == Tok::Lt || k == Tok::Le ||
           k == Tok::Gt || k == Tok::Ge;
  }

  Formula atom() {
    LinearTerm lhs = normalize_term(*term());
    if (accept(Tok::Cong)) {
      LinearTerm rhs = normalize_term(*term());
      expect(Tok::KwMod, "'mod'");
      const Token &n = expect(Tok::Int, "modulus");
      Integer m = parse_integer(n.text);
      if (m < 2) throw SyntaxError("modulus must be at least 2", n.line, n.col);
      return Formula::cong(lhs, rhs, m);
    }
    if (!is_rel(peek().kind)) fail("comparison operator");
    std::vector<Formula> chain;
    while (is_rel(peek().kind)) {
      Tok op = peek().kind;
      ++pos_;
      LinearTerm rhs = normalize_term(*term());
      switch (op) {
      case Tok::Eq: chain.push_back(Formula::rel(Rel::Eq, lhs, rhs)); break;
      case Tok::Ne: chain.push_back(Formula::negate(Formula::rel(Rel::Eq, lhs, rhs))); break;
      case Tok::Lt: chain.push_back(Formula::rel(Rel::Lt, lhs, rhs)); break;
      case Tok::Le: chain.push_back(Formula::rel(Rel::Le, lhs, rhs)); break;
      case Tok::Gt: chain.push_back(Formula::rel(Rel::Gt, lhs, rhs)); break;
      case Tok::Ge: chain.push_back(Formula::rel(Rel::Ge, lhs, rhs)); break;
      default: break;
      }
      lhs = rhs;
    }
    return chain.size() == 1 ? chain[0] : Formula::conj(std::move(chain));
  }

  TermPtr term() {
    TermPtr t;
    if (accept(Tok::Minus)) t = TermExpr::neg(product());
    else {
      accept(Tok::Plus);
      t = product();
    }
    while (true) {
      if (accept(Tok::Plus)) t = TermExpr::add(t, product());
      else if (accept(Tok::Minus)) t = TermExpr::sub(t, product());
      else break;
    }
    return t;
  }

  TermPtr product() {
    if (accept(Tok::Minus)) return TermExpr::neg(product());
    if (at(Tok::Int)) {
      Integer k = parse_integer(peek().text);
      ++pos_;
      if (accept(Tok::Star)) {
        if (at(Tok::Ident)) return TermExpr::scale(k, TermExpr::variable(toks_[pos_++].text));
        if (accept(Tok::LParen)) {
          TermPtr inner = term();
          expect(Tok::RParen, "')'");
          return TermExpr::scale(k, inner);
        }
        fail("variable or '(' after '*'");
      }
      return TermExpr::constant(k);
    }
    if (at(Tok::Ident)) return TermExpr::variable(toks_[pos_++].text);
    if (accept(Tok::LParen)) {
      TermPtr inner = term();
      expect(Tok::RParen, "')'");
      return inner;
    }
    fail("term");
  }
};

} // namespace

Formula parse(std::string_view text) { return Parser(lex(text)).formula_top(); }

TermPtr parse_raw_term(std::string_view text) { return Parser(lex(text)).term_top(); }

LinearTerm parse_term(std::string_view text) { return normalize_term(*parse_raw_term(text)); }

Document parse_document(std::string_view text) {
  Document doc;
  std::string body;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t p = line.find_first_not_of(" \t");
    if (p != std::string::npos && line.compare(p, 4, "let ") == 0) {
      std::size_t eq = line.find('=', p);
      if (eq == std::string::npos)
        throw SyntaxError("expected '=' in let binding", lineno, static_cast<int>(p + 1));
      std::string name = line.substr(p + 4, eq - p - 4);
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      std::string value = line.substr(eq + 1);
      auto hash = value.find('#');
      if (hash != std::string::npos) value.erase(hash);
      try {
        doc.params[name] = parse_element(value);
      } catch (const DomainError &e) {
        throw SyntaxError(e.what(), lineno, static_cast<int>(eq + 2));
      }
      body += "\n";
    } else {
      body += line + "\n";
    }
  }
  doc.formula = parse(body);
  return doc;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Document load_document(const std::string &path) { return parse_document(read_file(path)); }

} // namespace pkit
