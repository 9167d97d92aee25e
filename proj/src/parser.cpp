#include "setcard/parser.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "setcard/error.hpp"

namespace setcard {

namespace {

struct Token {
  enum class Kind { Ident, Var, Int, Sym, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(const std::string& src) {
  static const char* const kSymbols[] = {":=", ":-", "=<", "<=", ">=", "\\=", "=", "<", ">", "(",
                                         ")",  "{",  "}",  "[",  "]",  ",",   "/", "|", "&", ".",
                                         "+",  "-",  "*"};
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    std::size_t j = i;
    if (std::isalpha(c) || c == '_') {
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = (std::isupper(c) || c == '_') ? Token::Kind::Var : Token::Kind::Ident;
    } else if (std::isdigit(c)) {
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::Int;
    } else {
      for (const char* s : kSymbols) {
        std::size_t n = std::char_traits<char>::length(s);
        if (src.compare(i, n, s) == 0) {
          j = i + n;
          break;
        }
      }
      if (j == i) throw ParseError(std::string("unexpected character '") + src[i] + "'", line, col);
      t.kind = Token::Kind::Sym;
    }
    t.text = src.substr(i, j - i);
    advance(j - i);
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

const std::set<std::string> kPrefixPreds = {"un",     "disj", "size", "inters",
                                            "subset", "diff", "nun",  "ndisj"};

bool infix_op(const Token& t) {
  if (t.kind == Token::Kind::Sym) {
    return t.text == "=" || t.text == "\\=" || t.text == "=<" || t.text == "<=" || t.text == "<" ||
           t.text == ">" || t.text == ">=";
  }
  if (t.kind == Token::Kind::Ident) {
    return t.text == "neq" || t.text == "in" || t.text == "nin" || t.text == "is";
  }
  return false;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  SourceScript script() {
    SourceScript s;
    bool have_goal = false;
    while (peek().kind != Token::Kind::End) {
      if (at_macro_def()) {
        s.macros.push_back(macro_def());
        continue;
      }
      if (have_goal) error("only one goal is allowed");
      s.goal = formula();
      expect_sym(".");
      have_goal = true;
    }
    if (!have_goal) error("missing goal");
    return s;
  }

  SyntaxTerm lone_term() {
    SyntaxTerm t = term();
    if (peek().kind == Token::Kind::Sym && peek().text == ".") ++pos_;
    if (peek().kind != Token::Kind::End) error("unexpected '" + peek().text + "'");
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Sym && peek(k).text == s;
  }
  [[noreturn]] void error(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }
  void expect_sym(const char* s) {
    if (!at_sym(s)) {
      error(std::string("expected '") + s + "'" +
            (peek().kind == Token::Kind::End ? " at end of input" : " before '" + peek().text + "'"));
    }
    ++pos_;
  }

  bool at_macro_def() const {
    if (peek().kind != Token::Kind::Ident) return false;
    if (at_sym(":=", 1) || at_sym(":-", 1)) return true;
    if (!at_sym("(", 1)) return false;
    int depth = 0;
    for (std::size_t k = 1; peek(k).kind != Token::Kind::End; ++k) {
      if (at_sym("(", k)) ++depth;
      if (at_sym(")", k) && --depth == 0) return at_sym(":=", k + 1) || at_sym(":-", k + 1);
    }
    return false;
  }

  MacroDef macro_def() {
    MacroDef m;
    m.name = peek().text;
    ++pos_;
    if (at_sym("(")) {
      ++pos_;
      std::set<std::string> seen;
      while (!at_sym(")")) {
        if (peek().kind != Token::Kind::Var) error("macro parameters must be variables");
        if (!seen.insert(peek().text).second) error("duplicate parameter " + peek().text);
        m.params.push_back(peek().text);
        ++pos_;
        if (!at_sym(")")) expect_sym(",");
      }
      ++pos_;
    }
    ++pos_;  // := or :-
    m.body = formula();
    expect_sym(".");
    return m;
  }

  SyntaxFormula formula() {
    SyntaxFormula first = conj();
    if (!(peek().kind == Token::Kind::Ident && peek().text == "or")) return first;
    SyntaxFormula f;
    f.kind = SyntaxFormula::Kind::Or;
    f.line = first.line;
    f.column = first.column;
    f.children.push_back(std::move(first));
    while (peek().kind == Token::Kind::Ident && peek().text == "or") {
      ++pos_;
      f.children.push_back(conj());
    }
    return f;
  }

  SyntaxFormula conj() {
    SyntaxFormula first = unit();
    if (!at_sym("&")) return first;
    SyntaxFormula f;
    f.kind = SyntaxFormula::Kind::And;
    f.line = first.line;
    f.column = first.column;
    f.children.push_back(std::move(first));
    while (at_sym("&")) {
      ++pos_;
      f.children.push_back(unit());
    }
    return f;
  }

  SyntaxFormula unit() {
    if (!at_sym("(")) return atom();
    // "(" opens either a nested formula or a parenthesised integer term.
    std::size_t start = pos_;
    std::optional<ParseError> nested_err;
    try {
      ++pos_;
      SyntaxFormula f = formula();
      expect_sym(")");
      if (!infix_op(peek()) && !at_sym("+") && !at_sym("-") && !at_sym("*")) return f;
    } catch (const ParseError& e) {
      nested_err = e;
    }
    std::size_t nested_pos = pos_;
    pos_ = start;
    try {
      return atom();
    } catch (const ParseError& e) {
      if (nested_err && nested_pos > pos_) throw *nested_err;
      throw;
    }
  }

  SyntaxFormula atom() {
    const Token& t = peek();
    SyntaxFormula f;
    f.line = t.line;
    f.column = t.column;
    if (t.kind == Token::Kind::Ident && !infix_op(peek(1)) && !at_sym("(", 1)) {
      if (t.text == "true" || t.text == "false") {
        f.kind = t.text == "true" ? SyntaxFormula::Kind::True : SyntaxFormula::Kind::False;
        ++pos_;
        return f;
      }
      if (!kPrefixPreds.count(t.text)) {
        f.kind = SyntaxFormula::Kind::Call;
        f.name = t.text;
        ++pos_;
        return f;
      }
    }
    if (t.kind == Token::Kind::Ident && at_sym("(", 1)) {
      std::size_t start = pos_;
      std::string name = t.text;
      pos_ += 2;
      std::vector<SyntaxTerm> args = term_list(")");
      if (!infix_op(peek()) && !at_sym("+") && !at_sym("-") && !at_sym("*")) {
        f.kind = kPrefixPreds.count(name) ? SyntaxFormula::Kind::Atom : SyntaxFormula::Kind::Call;
        f.name = name;
        f.args = std::move(args);
        return f;
      }
      pos_ = start;
    }
    SyntaxTerm lhs = term();
    if (!infix_op(peek())) {
      error(peek().kind == Token::Kind::End ? "expected a predicate at end of input"
                                            : "expected a predicate before '" + peek().text + "'");
    }
    std::string op = peek().text;
    ++pos_;
    if (op == "\\=") op = "neq";
    if (op == "<=") op = "=<";
    SyntaxTerm rhs = term();
    f.kind = SyntaxFormula::Kind::Atom;
    f.name = op;
    f.args = {std::move(lhs), std::move(rhs)};
    return f;
  }

  // Terms separated by commas up to the closing symbol, which is consumed.
  std::vector<SyntaxTerm> term_list(const char* close) {
    std::vector<SyntaxTerm> out;
    if (at_sym(close)) {
      ++pos_;
      return out;
    }
    for (;;) {
      out.push_back(term());
      if (at_sym(close)) {
        ++pos_;
        return out;
      }
      expect_sym(",");
    }
  }

  SyntaxTerm make(SyntaxTerm::Kind k, const Token& at) {
    SyntaxTerm t;
    t.kind = k;
    t.line = at.line;
    t.column = at.column;
    return t;
  }

  SyntaxTerm term() {
    SyntaxTerm l = product();
    while (at_sym("+") || at_sym("-")) {
      SyntaxTerm n = make(at_sym("+") ? SyntaxTerm::Kind::Add : SyntaxTerm::Kind::Sub, peek());
      ++pos_;
      n.args.push_back(std::move(l));
      n.args.push_back(product());
      l = std::move(n);
    }
    return l;
  }

  SyntaxTerm product() {
    SyntaxTerm l = unary();
    while (at_sym("*")) {
      SyntaxTerm n = make(SyntaxTerm::Kind::Mul, peek());
      ++pos_;
      n.args.push_back(std::move(l));
      n.args.push_back(unary());
      l = std::move(n);
    }
    return l;
  }

  SyntaxTerm unary() {
    if (!at_sym("-")) return primary();
    const Token& minus = peek();
    ++pos_;
    if (peek().kind == Token::Kind::Int) {
      SyntaxTerm t = make(SyntaxTerm::Kind::Int, minus);
      t.value = -Integer(peek().text);
      ++pos_;
      return t;
    }
    SyntaxTerm t = make(SyntaxTerm::Kind::Neg, minus);
    t.args.push_back(unary());
    return t;
  }

  SyntaxTerm primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::Int: {
        SyntaxTerm n = make(SyntaxTerm::Kind::Int, t);
        n.value = Integer(t.text);
        ++pos_;
        return n;
      }
      case Token::Kind::Var: {
        SyntaxTerm n = make(SyntaxTerm::Kind::Var, t);
        n.name = t.text == "_" ? "_L0_" + std::to_string(++anonymous_) : t.text;
        ++pos_;
        return n;
      }
      case Token::Kind::Ident: {
        SyntaxTerm n = make(SyntaxTerm::Kind::Ur, t);
        n.name = t.text;
        ++pos_;
        if (at_sym("(")) {
          ++pos_;
          n.args = term_list(")");
        }
        return n;
      }
      case Token::Kind::Sym:
        if (t.text == "(") {
          ++pos_;
          SyntaxTerm inner = term();
          expect_sym(")");
          return inner;
        }
        if (t.text == "{") return set_term();
        if (t.text == "[") {
          SyntaxTerm n = make(SyntaxTerm::Kind::Ur, t);
          n.name = "list";
          ++pos_;
          n.args = term_list("]");
          return n;
        }
        break;
      case Token::Kind::End:
        error("unexpected end of input");
    }
    error("unexpected '" + t.text + "'");
  }

  SyntaxTerm set_term() {
    const Token open = peek();
    ++pos_;
    if (at_sym("}")) {
      ++pos_;
      return make(SyntaxTerm::Kind::Empty, open);
    }
    std::vector<SyntaxTerm> elems;
    for (;;) {
      elems.push_back(term());
      if (!at_sym(",")) break;
      ++pos_;
    }
    SyntaxTerm tail = make(SyntaxTerm::Kind::Empty, open);
    if (at_sym("/") || at_sym("|")) {
      ++pos_;
      tail = term();
    }
    expect_sym("}");
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
      SyntaxTerm c = make(SyntaxTerm::Kind::Cons, open);
      c.args.push_back(std::move(*it));
      c.args.push_back(std::move(tail));
      tail = std::move(c);
    }
    return tail;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int anonymous_ = 0;
};

std::string where(int line, int column) {
  return std::to_string(line) + ":" + std::to_string(column) + ": ";
}

// ---- macro expansion ------------------------------------------------------

using TermMap = std::map<std::string, SyntaxTerm>;

SyntaxTerm subst(const SyntaxTerm& t, const TermMap& m) {
  if (t.kind == SyntaxTerm::Kind::Var) {
    auto it = m.find(t.name);
    return it == m.end() ? t : it->second;
  }
  SyntaxTerm out = t;
  for (auto& a : out.args) a = subst(a, m);
  return out;
}

void term_vars(const SyntaxTerm& t, std::set<std::string>& out) {
  if (t.kind == SyntaxTerm::Kind::Var) out.insert(t.name);
  for (const auto& a : t.args) term_vars(a, out);
}

void formula_vars(const SyntaxFormula& f, std::set<std::string>& out) {
  for (const auto& a : f.args) term_vars(a, out);
  for (const auto& c : f.children) formula_vars(c, out);
}

SyntaxFormula subst(const SyntaxFormula& f, const TermMap& m) {
  SyntaxFormula out = f;
  for (auto& a : out.args) a = subst(a, m);
  for (auto& c : out.children) c = subst(c, m);
  return out;
}

class Expander {
 public:
  explicit Expander(const SourceScript& s) {
    for (const auto& m : s.macros) {
      if (!macros_.emplace(m.name, &m).second) {
        throw ParseError("macro " + m.name + " defined twice", m.body.line, m.body.column);
      }
    }
  }

  SyntaxFormula expand(const SyntaxFormula& f) {
    if (f.kind == SyntaxFormula::Kind::Call) return call(f);
    SyntaxFormula out = f;
    for (auto& c : out.children) c = expand(c);
    return out;
  }

 private:
  SyntaxFormula call(const SyntaxFormula& f) {
    auto it = macros_.find(f.name);
    if (it == macros_.end()) {
      throw UnknownMacro(where(f.line, f.column) + "unknown predicate or macro " + f.name + "/" +
                         std::to_string(f.args.size()));
    }
    const MacroDef& m = *it->second;
    if (m.params.size() != f.args.size()) {
      throw ArityMismatch(where(f.line, f.column) + m.name + " expects " +
                          std::to_string(m.params.size()) + " arguments, got " +
                          std::to_string(f.args.size()));
    }
    if (active_.count(m.name)) {
      throw ParseError("recursive macro " + m.name, f.line, f.column);
    }
    int site = ++sites_;
    TermMap map;
    for (std::size_t i = 0; i < m.params.size(); ++i) map[m.params[i]] = f.args[i];
    std::set<std::string> vars;
    formula_vars(m.body, vars);
    for (const auto& v : vars) {
      if (map.count(v)) continue;
      SyntaxTerm local;
      local.kind = SyntaxTerm::Kind::Var;
      local.name = "_L" + std::to_string(site) + "_" + v;
      map[v] = local;
    }
    active_.insert(m.name);
    SyntaxFormula body = expand(subst(m.body, map));
    active_.erase(m.name);
    return body;
  }

  std::map<std::string, const MacroDef*> macros_;
  std::set<std::string> active_;
  int sites_ = 0;
};

// ---- sort inference -------------------------------------------------------

class Sorts {
 public:
  // A term's sort class: a variable's union-find node, or a fixed sort.
  struct Cls {
    int node = -1;
    Sort sort = Sort::Any;
  };

  Cls visit(const SyntaxTerm& t) {
    using K = SyntaxTerm::Kind;
    switch (t.kind) {
      case K::Var:
        return Cls{node(t.name), Sort::Any};
      case K::Empty:
        return Cls{-1, Sort::Set};
      case K::Cons:
        visit(t.args[0]);
        expect(t.args[1], Sort::Set);
        return Cls{-1, Sort::Set};
      case K::Int:
        return Cls{-1, Sort::Int};
      case K::Neg:
      case K::Add:
      case K::Sub:
      case K::Mul:
        for (const auto& a : t.args) expect(a, Sort::Int);
        return Cls{-1, Sort::Int};
      case K::Ur:
        for (const auto& a : t.args) visit(a);
        return Cls{-1, Sort::Ur};
    }
    return Cls{};
  }

  void expect(const SyntaxTerm& t, Sort s) {
    Cls c = visit(t);
    if (c.node >= 0) {
      require(c.node, s, t);
    } else if (c.sort != s) {
      throw SortError(where(t.line, t.column) + "term of sort " + sort_name(c.sort) +
                      " where " + sort_name(s) + " is required");
    }
  }

  void same(const SyntaxTerm& a, const SyntaxTerm& b) {
    Cls ca = visit(a);
    Cls cb = visit(b);
    if (ca.node >= 0 && cb.node >= 0) {
      unite(ca.node, cb.node, a);
    } else if (ca.node >= 0) {
      require(ca.node, cb.sort, a);
    } else if (cb.node >= 0) {
      require(cb.node, ca.sort, b);
    } else if (ca.sort != cb.sort) {
      throw SortError(where(a.line, a.column) + "comparing terms of sorts " + sort_name(ca.sort) +
                      " and " + sort_name(cb.sort));
    }
  }

  Sort sort_of_var(const std::string& name) {
    auto it = nodes_.find(name);
    if (it == nodes_.end()) return Sort::Any;
    return fixed_[find(it->second)];
  }

 private:
  int node(const std::string& name) {
    auto it = nodes_.find(name);
    if (it != nodes_.end()) return it->second;
    int n = static_cast<int>(parent_.size());
    parent_.push_back(n);
    fixed_.push_back(Sort::Any);
    names_.push_back(name);
    nodes_[name] = n;
    return n;
  }
  int find(int n) {
    while (parent_[n] != n) n = parent_[n] = parent_[parent_[n]];
    return n;
  }
  void require(int n, Sort s, const SyntaxTerm& at) {
    int r = find(n);
    if (fixed_[r] == Sort::Any) {
      fixed_[r] = s;
    } else if (fixed_[r] != s) {
      throw SortError(where(at.line, at.column) + "variable " + names_[n] + " used as " +
                      sort_name(s) + " and as " + sort_name(fixed_[r]));
    }
  }
  void unite(int a, int b, const SyntaxTerm& at) {
    int ra = find(a);
    int rb = find(b);
    if (ra == rb) return;
    if (fixed_[rb] != Sort::Any) require(ra, fixed_[rb], at);
    parent_[rb] = ra;
  }

  std::map<std::string, int> nodes_;
  std::vector<int> parent_;
  std::vector<Sort> fixed_;
  std::vector<std::string> names_;
};

struct PredInfo {
  Pred pred;
  std::vector<std::optional<Sort>> args;  // nullopt: unconstrained
};

std::optional<PredInfo> pred_info(const std::string& name) {
  const Sort S = Sort::Set;
  const Sort I = Sort::Int;
  static const std::map<std::string, PredInfo> table = {
      {"=", {Pred::Eq, {std::nullopt, std::nullopt}}},
      {"neq", {Pred::Neq, {std::nullopt, std::nullopt}}},
      {"is", {Pred::Eq, {I, I}}},
      {"in", {Pred::In, {std::nullopt, S}}},
      {"nin", {Pred::Nin, {std::nullopt, S}}},
      {"=<", {Pred::Leq, {I, I}}},
      {"<", {Pred::Lt, {I, I}}},
      {">", {Pred::Gt, {I, I}}},
      {">=", {Pred::Geq, {I, I}}},
      {"un", {Pred::Un, {S, S, S}}},
      {"disj", {Pred::Disj, {S, S}}},
      {"size", {Pred::Size, {S, I}}},
      {"inters", {Pred::Inters, {S, S, S}}},
      {"subset", {Pred::Subset, {S, S}}},
      {"diff", {Pred::Diff, {S, S, S}}},
      {"nun", {Pred::Nun, {S, S, S}}},
      {"ndisj", {Pred::Ndisj, {S, S}}},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

void infer(const SyntaxFormula& f, Sorts& sorts) {
  for (const auto& c : f.children) infer(c, sorts);
  if (f.kind != SyntaxFormula::Kind::Atom) return;
  auto info = pred_info(f.name);
  if (!info) throw ParseError("unknown predicate " + f.name, f.line, f.column);
  if (info->args.size() != f.args.size()) {
    throw ParseError(f.name + " expects " + std::to_string(info->args.size()) + " arguments",
                     f.line, f.column);
  }
  if (info->pred == Pred::Eq && !info->args[0]) {
    sorts.same(f.args[0], f.args[1]);
    return;
  }
  if (info->pred == Pred::Neq) {
    sorts.same(f.args[0], f.args[1]);
    return;
  }
  for (std::size_t i = 0; i < f.args.size(); ++i) {
    if (info->args[i]) {
      sorts.expect(f.args[i], *info->args[i]);
    } else {
      sorts.visit(f.args[i]);
    }
  }
}

Term build(const SyntaxTerm& t, Sorts& sorts) {
  using K = SyntaxTerm::Kind;
  switch (t.kind) {
    case K::Var:
      return Term::var(t.name, sorts.sort_of_var(t.name));
    case K::Empty:
      return Term::empty_set();
    case K::Cons:
      return Term::set_cons(build(t.args[0], sorts), build(t.args[1], sorts));
    case K::Int:
      return Term::int_const(t.value);
    case K::Neg:
      return Term::int_neg(build(t.args[0], sorts));
    case K::Add:
      return Term::int_add(build(t.args[0], sorts), build(t.args[1], sorts));
    case K::Sub:
      return Term::int_sub(build(t.args[0], sorts), build(t.args[1], sorts));
    case K::Mul:
      try {
        return int_mul(build(t.args[0], sorts), build(t.args[1], sorts));
      } catch (const NonLinearError& e) {
        throw NonLinearError(where(t.line, t.column) + e.what());
      }
    case K::Ur: {
      std::vector<Term> args;
      for (const auto& a : t.args) args.push_back(build(a, sorts));
      return Term::ur_atom(t.name, std::move(args));
    }
  }
  throw InternalError("bad syntax term");
}

Formula build(const SyntaxFormula& f, Sorts& sorts) {
  switch (f.kind) {
    case SyntaxFormula::Kind::True:
      return Formula::truth();
    case SyntaxFormula::Kind::False:
      return Formula::falsity();
    case SyntaxFormula::Kind::Atom: {
      std::vector<Term> args;
      for (const auto& a : f.args) args.push_back(build(a, sorts));
      try {
        return Formula::atom(Constraint::make(pred_info(f.name)->pred, std::move(args)));
      } catch (const SortError& e) {
        throw SortError(where(f.line, f.column) + e.what());
      }
    }
    case SyntaxFormula::Kind::And:
    case SyntaxFormula::Kind::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children) parts.push_back(build(c, sorts));
      return f.kind == SyntaxFormula::Kind::And ? Formula::conj(std::move(parts))
                                                : Formula::disj(std::move(parts));
    }
    case SyntaxFormula::Kind::Call:
      break;
  }
  throw InternalError("macro call survived expansion");
}

}  // namespace

SourceScript parse(const std::string& text) { return Parser(text).script(); }

Formula expand_macros(const SourceScript& s) {
  SyntaxFormula goal = Expander(s).expand(s.goal);
  Sorts sorts;
  infer(goal, sorts);
  return build(goal, sorts);
}

Formula parse_formula(const std::string& text) { return expand_macros(parse(text)); }

Term parse_term(const std::string& text) {
  SyntaxTerm t = Parser(text).lone_term();
  Sorts sorts;
  sorts.visit(t);
  return build(t, sorts);
}

}  // namespace setcard
