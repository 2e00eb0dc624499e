#pragma once

// Recursive-descent parser for the concrete formula syntax.
//
//   phi  ::= phi -> phi | phi '|' phi | phi & phi | ! phi | TT | FF | ident
//          | E(phi U [constr] phi) | A(phi U [constr] phi)
//          | (EF|AF|EG|AG) [constr] phi | (EX|AX) phi | N phi
//          | ident [ phi ] . phi | sum cmp int | ( phi )
//   constr ::= { bexpr }   with atoms  sum cmp int
//   sum  ::= [-] term ((+|-) term)*   term ::= [int *] (#(phi) | #ident | ident)
//
// Precedence from loose to tight: binder body and ->, |, &, prefix operators.

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cctl/formula.hpp"

namespace cctl {

namespace detail {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
      if (src[i] == '\n')
        ++line, col = 1;
      else
        ++col;
    }
  };
  while (i < src.size()) {
    unsigned char ch = static_cast<unsigned char>(src[i]);
    if (std::isspace(ch)) {
      adv(1);
      continue;
    }
    if (std::isalpha(ch) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), line, col});
      adv(j - i);
      continue;
    }
    if (std::isdigit(ch)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, src.substr(i, j - i), line, col});
      adv(j - i);
      continue;
    }
    static const char* two[] = {"->", "<=", ">=", "!="};
    bool matched = false;
    for (const char* t : two) {
      if (src.compare(i, 2, t) == 0) {
        out.push_back({Tok::Sym, t, line, col});
        adv(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("()[]{}.!&|<=>+-*#").find(static_cast<char>(ch)) != std::string::npos) {
      out.push_back({Tok::Sym, std::string(1, static_cast<char>(ch)), line, col});
      adv(1);
      continue;
    }
    throw parse_error(std::string("unexpected character '") + static_cast<char>(ch) + "'", line, col);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

inline const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"TT", "FF", "E", "A", "U", "EF", "AF", "EG", "AG", "EX", "AX", "N"};
  return k;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Formula parse_top() {
    Formula f = imp();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

  Constraint parse_constraint_top() {
    Constraint c = bor();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return c;
  }

  // Variable name -> number of textual binders.
  std::map<std::string, int> binders;

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool is_kw(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == s; }
  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, peek().line, peek().col); }
  void expect(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'" + (peek().kind == Tok::End ? " at end of input" : ", got '" + peek().text + "'"));
    next();
  }

  Formula imp() {
    Formula l = disj();
    if (is_sym("->")) {
      next();
      return mk_implies(l, imp());
    }
    return l;
  }
  Formula disj() {
    Formula l = conj();
    while (is_sym("|")) {
      next();
      l = mk_or(l, conj());
    }
    return l;
  }
  Formula conj() {
    Formula l = unary();
    while (is_sym("&")) {
      next();
      l = mk_and(l, unary());
    }
    return l;
  }

  Constraint opt_constraint() {
    if (!is_sym("{")) return {};
    next();
    Constraint c = bor();
    expect("}");
    return c;
  }

  bool starts_unary() const {
    const Token& t = peek();
    return t.kind != Tok::End && !(t.kind == Tok::Sym && (t.text == ")" || t.text == "]" || t.text == "}" ||
                                                          t.text == "&" || t.text == "|" || t.text == "->"));
  }

  Formula unary() {
    const Token& t = peek();
    if (t.kind == Tok::Sym) {
      if (t.text == "!") {
        next();
        return mk_not(unary());
      }
      if (t.text == "(") {
        next();
        Formula f = imp();
        expect(")");
        return f;
      }
      if (t.text == "-") return var_constraint();
      fail("unexpected '" + t.text + "'");
    }
    if (t.kind == Tok::Int) return var_constraint();
    if (t.kind == Tok::End) fail("unexpected end of input");
    const std::string& w = t.text;
    if (w == "TT") return next(), mk_true();
    if (w == "FF") return next(), mk_false();
    if (w == "E" || w == "A") {
      bool universal = w == "A";
      next();
      expect("(");
      Formula l = imp();
      if (!is_kw("U")) fail("expected 'U'");
      next();
      Constraint c = opt_constraint();
      Formula r = imp();
      expect(")");
      return mk_until(universal, l, r, c);
    }
    if (w == "EF" || w == "AF" || w == "EG" || w == "AG") {
      next();
      Constraint c = opt_constraint();
      Formula f = unary();
      if (w == "EF") return mk_ef(f, c);
      if (w == "AF") return mk_af(f, c);
      if (w == "EG") return mk_eg(f, c);
      return mk_ag(f, c);
    }
    if (w == "EX" || w == "AX") {
      next();
      Formula f = unary();
      return w == "EX" ? mk_ex(f) : mk_ax(f);
    }
    if (w == "N") {
      next();
      return mk_now(unary());
    }
    if (w == "U") fail("unexpected 'U'");
    // Identifier: binder, variable constraint, or proposition.
    if (is_sym("[", 1)) {
      Token z = next();
      next();
      Formula counted = imp();
      expect("]");
      expect(".");
      ++binders[z.text];
      Formula body = imp();
      return mk_bind(z.text, counted, body);
    }
    if (peek(1).kind == Tok::Sym &&
        (peek(1).text == "<" || peek(1).text == "<=" || peek(1).text == "=" || peek(1).text == ">=" ||
         peek(1).text == ">" || peek(1).text == "+" || peek(1).text == "-" || peek(1).text == "*"))
      return var_constraint();
    next();
    return mk_atom(w);
  }

  std::int64_t integer() {
    bool neg = false;
    if (is_sym("-")) neg = true, next();
    if (peek().kind != Tok::Int) fail("expected integer");
    Token t = next();
    std::int64_t v = 0;
    for (char ch : t.text) {
      if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, ch - '0', &v))
        throw parse_error("integer literal out of range", t.line, t.col);
    }
    return neg ? -v : v;
  }

  Cmp comparator() {
    const Token& t = peek();
    if (t.kind == Tok::Sym) {
      if (t.text == "<") return next(), Cmp::Lt;
      if (t.text == "<=") return next(), Cmp::Le;
      if (t.text == "=") return next(), Cmp::Eq;
      if (t.text == ">=") return next(), Cmp::Ge;
      if (t.text == ">") return next(), Cmp::Gt;
    }
    fail("expected comparator");
  }

  // One summand: either a counted formula or a variable.
  struct RawTerm {
    std::int64_t coeff;
    bool is_var;
    std::string var;
    Formula counted;
    int line, col;
  };

  std::vector<RawTerm> sum() {
    std::vector<RawTerm> out;
    bool neg = false;
    if (is_sym("-")) neg = true, next();
    for (;;) {
      RawTerm t{1, false, {}, {}, peek().line, peek().col};
      if (peek().kind == Tok::Int) {
        std::int64_t c = integer();
        t.coeff = c;
        expect("*");
      }
      if (neg) {
        if (t.coeff == std::numeric_limits<std::int64_t>::min()) fail("integer literal out of range");
        t.coeff = -t.coeff;
      }
      if (is_sym("#")) {
        next();
        if (is_sym("(")) {
          next();
          t.counted = imp();
          expect(")");
        } else if (peek().kind == Tok::Ident) {
          Token id = next();
          if (id.text == "TT")
            t.counted = mk_true();
          else if (id.text == "FF")
            t.counted = mk_false();
          else if (keywords().count(id.text))
            throw parse_error("keyword '" + id.text + "' after '#'", id.line, id.col);
          else
            t.counted = mk_atom(id.text);
        } else {
          fail("expected formula after '#'");
        }
      } else if (peek().kind == Tok::Ident && !keywords().count(peek().text)) {
        t.is_var = true;
        t.var = next().text;
      } else {
        fail("expected term");
      }
      out.push_back(t);
      if (is_sym("+"))
        neg = false;
      else if (is_sym("-"))
        neg = true;
      else
        break;
      next();
    }
    return out;
  }

  Formula var_constraint() {
    auto ts = sum();
    std::vector<VarTerm> vt;
    for (const auto& t : ts) {
      if (!t.is_var) throw parse_error("counting term outside a modality constraint", t.line, t.col);
      vt.push_back({t.coeff, t.var});
    }
    Cmp c = comparator();
    return mk_varcmp(std::move(vt), c, integer());
  }

  Constraint bor() {
    Constraint l = band();
    while (is_sym("|") || is_sym("->")) {
      bool imp = is_sym("->");
      next();
      Constraint r = band();
      l = imp ? c_implies(l, r) : c_or(l, r);
    }
    return l;
  }
  Constraint band() {
    Constraint l = bunary();
    while (is_sym("&")) {
      next();
      l = c_and(l, bunary());
    }
    return l;
  }
  Constraint bunary() {
    if (is_sym("!")) {
      next();
      return c_not(bunary());
    }
    if (is_sym("(")) {
      next();
      Constraint c = bor();
      expect(")");
      return c;
    }
    auto ts = sum();
    std::vector<Term> terms;
    for (const auto& t : ts) {
      if (t.is_var) throw parse_error("variable '" + t.var + "' inside a modality constraint", t.line, t.col);
      terms.push_back({t.coeff, t.counted});
    }
    Cmp c = comparator();
    return c_atom(std::move(terms), c, integer());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Checks that no variable has two distinct binders and that the binder
// dependency relation (variables used inside a binder's counted formula
// precede the bound variable) is acyclic. Throws wellformedness_error.
inline void check_wellformed(Formula f) {
  std::map<std::string, Formula> binder;
  std::map<std::string, std::set<std::string>> deps;
  for_each_subformula(f, [&](Formula g) {
    if (!g.is(FKind::Bind)) return;
    auto [it, fresh] = binder.emplace(g.name(), g);
    if (!fresh && it->second != g) throw wellformedness_error("variable '" + g.name() + "' is bound twice");
    std::set<std::string> used;
    for_each_subformula(g.counted(), [&](Formula h) {
      if (h.is(FKind::VarCmp))
        for (const auto& t : h.vterms()) used.insert(t.var);
    });
    deps[g.name()] = used;
  });
  std::map<std::string, int> color;
  std::function<void(const std::string&)> dfs = [&](const std::string& z) {
    color[z] = 1;
    for (const auto& y : deps[z]) {
      if (color[y] == 1) throw wellformedness_error("cyclic binder order through variable '" + y + "'");
      if (color[y] == 0) dfs(y);
    }
    color[z] = 2;
  };
  for (const auto& [z, _] : deps)
    if (color[z] == 0) dfs(z);
}

inline Formula parse_formula(const std::string& src) {
  detail::Parser p(src);
  Formula f = p.parse_top();
  for (const auto& [z, n] : p.binders)
    if (n > 1) throw wellformedness_error("variable '" + z + "' is bound twice");
  check_wellformed(f);
  return f;
}

inline Constraint parse_constraint(const std::string& src) {
  detail::Parser p(src);
  return p.parse_constraint_top();
}

}  // namespace cctl
