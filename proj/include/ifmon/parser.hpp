/*
 * Copyright (c) 2026, The ifmon authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ifmon/ast.hpp"

namespace ifmon {

class ParseError : public std::runtime_error {
public:
  ParseError(int line, int column, const std::string &msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + msg),
        line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

namespace detail {

enum class Tok {
  ident,
  number,
  assign,    // :=
  semicolon, // ;
  comma,     // ,
  lparen,
  rparen,
  lbrace,
  rbrace,
  plus,
  minus,
  star,
  less,       // <
  less_eq,    // <=
  greater,    // >
  greater_eq, // >=
  equal,      // =
  not_equal,  // !=
  bang,       // !
  and_and,    // &&
  implies,    // =>
  end,
};

inline const char *tok_name(Tok t) {
  switch (t) {
  case Tok::ident:
    return "identifier";
  case Tok::number:
    return "integer literal";
  case Tok::assign:
    return "':='";
  case Tok::semicolon:
    return "';'";
  case Tok::comma:
    return "','";
  case Tok::lparen:
    return "'('";
  case Tok::rparen:
    return "')'";
  case Tok::lbrace:
    return "'{'";
  case Tok::rbrace:
    return "'}'";
  case Tok::plus:
    return "'+'";
  case Tok::minus:
    return "'-'";
  case Tok::star:
    return "'*'";
  case Tok::less:
    return "'<'";
  case Tok::less_eq:
    return "'<='";
  case Tok::greater:
    return "'>'";
  case Tok::greater_eq:
    return "'>='";
  case Tok::equal:
    return "'='";
  case Tok::not_equal:
    return "'!='";
  case Tok::bang:
    return "'!'";
  case Tok::and_and:
    return "'&&'";
  case Tok::implies:
    return "'=>'";
  case Tok::end:
    return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<Token> tokenize(std::string_view src) {
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
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    const int tl = line;
    const int tc = col;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j]))
        ++j;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      if (j < src.size() && is_ident_start(src[j]))
        throw ParseError(tl, tc, "malformed integer literal");
      out.push_back({Tok::number, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    Tok kind;
    std::size_t len = 2;
    if (two(':', '='))
      kind = Tok::assign;
    else if (two('<', '='))
      kind = Tok::less_eq;
    else if (two('>', '='))
      kind = Tok::greater_eq;
    else if (two('!', '='))
      kind = Tok::not_equal;
    else if (two('&', '&'))
      kind = Tok::and_and;
    else if (two('=', '>'))
      kind = Tok::implies;
    else {
      len = 1;
      switch (c) {
      case ';':
        kind = Tok::semicolon;
        break;
      case ',':
        kind = Tok::comma;
        break;
      case '(':
        kind = Tok::lparen;
        break;
      case ')':
        kind = Tok::rparen;
        break;
      case '{':
        kind = Tok::lbrace;
        break;
      case '}':
        kind = Tok::rbrace;
        break;
      case '+':
        kind = Tok::plus;
        break;
      case '-':
        kind = Tok::minus;
        break;
      case '*':
        kind = Tok::star;
        break;
      case '<':
        kind = Tok::less;
        break;
      case '>':
        kind = Tok::greater;
        break;
      case '=':
        kind = Tok::equal;
        break;
      case '!':
        kind = Tok::bang;
        break;
      default:
        throw ParseError(tl, tc,
                         std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({kind, std::string(src.substr(i, len)), tl, tc});
    advance(len);
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

inline bool is_keyword(const std::string &s) {
  return s == "skip" || s == "if" || s == "then" || s == "else" ||
         s == "while" || s == "do" || s == "assume" || s == "assert";
}

// A parsed operand is either arithmetic or boolean until context decides.
using Term = std::variant<Expr, BoolExpr>;

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Cmd program() {
    Cmd c = sequence(Tok::end);
    expect(Tok::end);
    return c;
  }

  Expr standalone_expr() {
    Expr e = as_expr(term());
    expect(Tok::end);
    return e;
  }

  BoolExpr standalone_bool() {
    BoolExpr b = as_bool(term());
    expect(Tok::end);
    return b;
  }

  Formula standalone_formula() {
    Formula f = formula();
    expect(Tok::end);
    return f;
  }

private:
  const Token &peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(const char *w) const {
    return peek().kind == Tok::ident && peek().text == w;
  }

  [[noreturn]] void fail(const std::string &expected) const {
    const Token &t = peek();
    std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column,
                     "expected " + expected + ", found " + found);
  }

  Token expect(Tok k) {
    if (!at(k))
      fail(tok_name(k));
    return toks_[pos_++];
  }

  void expect_word(const char *w) {
    if (!at_word(w))
      fail(std::string("'") + w + "'");
    ++pos_;
  }

  bool accept(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }

  // sequence := command (';' command)* [';']   with ';' optional after '}'
  Cmd sequence(Tok closer) {
    std::vector<Cmd> parts;
    parts.push_back(command());
    for (;;) {
      bool had_sep = accept(Tok::semicolon);
      if (at(closer))
        break;
      if (!had_sep && toks_[pos_ - 1].kind != Tok::rbrace)
        fail("';'");
      parts.push_back(command());
    }
    Cmd out = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;)
      out = Cmd::seq(parts[i], out);
    return out;
  }

  Cmd block() {
    expect(Tok::lbrace);
    if (accept(Tok::rbrace))
      return Cmd::skip();
    Cmd c = sequence(Tok::rbrace);
    expect(Tok::rbrace);
    return c;
  }

  Cmd command() {
    if (at(Tok::lbrace))
      return block();
    if (!at(Tok::ident))
      fail("command");
    const std::string word = peek().text;
    if (word == "skip") {
      ++pos_;
      return Cmd::skip();
    }
    if (word == "if") {
      ++pos_;
      BoolExpr b = as_bool(term());
      expect_word("then");
      // A branch or loop body is a braced block or one unbraced command.
      Cmd t = command();
      Cmd e = Cmd::skip();
      if (at_word("else")) {
        ++pos_;
        e = command();
      }
      return Cmd::if_then_else(std::move(b), std::move(t), std::move(e));
    }
    if (word == "while") {
      ++pos_;
      BoolExpr b = as_bool(term());
      expect_word("do");
      return Cmd::while_do(std::move(b), command());
    }
    if (word == "assume") {
      ++pos_;
      return Cmd::assume(formula());
    }
    if (word == "assert") {
      ++pos_;
      return Cmd::assert_(formula());
    }
    if (is_keyword(word))
      fail("command");
    ++pos_;
    expect(Tok::assign);
    return Cmd::assign(word, as_expr(term()));
  }

  Formula formula() {
    Formula out;
    out.push_back(basic_formula());
    while (accept(Tok::comma))
      out.push_back(basic_formula());
    return out;
  }

  BasicFormula basic_formula() {
    if (at_word("A")) {
      ++pos_;
      return BasicFormula::agree(as_expr(term()));
    }
    if (at_word("B")) {
      ++pos_;
      BoolExpr b = as_bool(term());
      if (accept(Tok::implies)) {
        expect_word("A");
        return BasicFormula::cond_agree(std::move(b), as_expr(term()));
      }
      return BasicFormula::both(std::move(b));
    }
    fail("'A' or 'B'");
  }

  Expr as_expr(Term t) {
    if (auto *b = std::get_if<BoolExpr>(&t))
      return Expr::embed(*b);
    return std::get<Expr>(std::move(t));
  }

  BoolExpr as_bool(Term t) {
    if (auto *b = std::get_if<BoolExpr>(&t))
      return *b;
    const Token &prev = toks_[pos_ > 0 ? pos_ - 1 : 0];
    throw ParseError(prev.line, prev.column,
                     "expected boolean expression, found arithmetic expression");
  }

  // term := conj
  Term term() { return conj(); }

  // conj := negation ('&&' negation)*
  Term conj() {
    Term lhs = negation();
    while (at(Tok::and_and)) {
      BoolExpr l = as_bool(lhs);
      ++pos_;
      BoolExpr r = as_bool(negation());
      lhs = BoolExpr::logical_and(std::move(l), std::move(r));
    }
    return lhs;
  }

  // negation := '!' negation | comparison
  Term negation() {
    if (accept(Tok::bang))
      return BoolExpr::logical_not(as_bool(negation()));
    return comparison();
  }

  // comparison := sum [relop sum]   (non-associative)
  Term comparison() {
    Term lhs = sum();
    Tok k = peek().kind;
    if (k != Tok::less && k != Tok::less_eq && k != Tok::greater &&
        k != Tok::greater_eq && k != Tok::equal && k != Tok::not_equal)
      return lhs;
    ++pos_;
    Expr a = as_expr(std::move(lhs));
    Expr b = as_expr(sum());
    switch (k) {
    case Tok::less:
      return BoolExpr::less(a, b);
    case Tok::greater:
      return BoolExpr::less(b, a);
    case Tok::less_eq:
      return BoolExpr::logical_not(BoolExpr::less(b, a));
    case Tok::greater_eq:
      return BoolExpr::logical_not(BoolExpr::less(a, b));
    case Tok::equal:
      return BoolExpr::equal(a, b);
    default:
      return BoolExpr::logical_not(BoolExpr::equal(a, b));
    }
  }

  Term sum() {
    Term lhs = product();
    while (at(Tok::plus) || at(Tok::minus)) {
      ArithOp op = at(Tok::plus) ? ArithOp::add : ArithOp::sub;
      ++pos_;
      Expr r = as_expr(product());
      lhs = Expr::binary(op, as_expr(std::move(lhs)), std::move(r));
    }
    return lhs;
  }

  Term product() {
    Term lhs = unary();
    while (accept(Tok::star)) {
      Expr r = as_expr(unary());
      lhs = Expr::binary(ArithOp::mul, as_expr(std::move(lhs)), std::move(r));
    }
    return lhs;
  }

  Term unary() {
    if (accept(Tok::minus)) {
      if (at(Tok::number))
        return Expr::constant(literal(true));
      return Expr::binary(ArithOp::sub, Expr::constant(0), as_expr(unary()));
    }
    return atom();
  }

  Value literal(bool negative) {
    const Token t = expect(Tok::number);
    constexpr auto max = static_cast<std::uint64_t>(
        std::numeric_limits<Value>::max());
    std::uint64_t mag = 0;
    for (char ch : t.text) {
      std::uint64_t d = static_cast<std::uint64_t>(ch - '0');
      if (mag > (max + 1 - d) / 10)
        throw ParseError(t.line, t.column, "integer literal out of range");
      mag = mag * 10 + d;
    }
    if (!negative && mag > max)
      throw ParseError(t.line, t.column, "integer literal out of range");
    if (negative)
      return mag == max + 1 ? std::numeric_limits<Value>::min()
                            : -static_cast<Value>(mag);
    return static_cast<Value>(mag);
  }

  Term atom() {
    if (at(Tok::number))
      return Expr::constant(literal(false));
    if (at(Tok::ident)) {
      if (is_keyword(peek().text))
        fail("expression");
      return Expr::var(toks_[pos_++].text);
    }
    if (accept(Tok::lparen)) {
      Term t = term();
      expect(Tok::rparen);
      return t;
    }
    fail("expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace detail

inline Cmd parse_program(std::string_view text) {
  return detail::Parser(text).program();
}

inline Expr parse_expr(std::string_view text) {
  return detail::Parser(text).standalone_expr();
}

inline BoolExpr parse_bool(std::string_view text) {
  return detail::Parser(text).standalone_bool();
}

inline Formula parse_formula(std::string_view text) {
  return detail::Parser(text).standalone_formula();
}

inline BasicFormula parse_basic_formula(std::string_view text) {
  Formula f = parse_formula(text);
  if (f.size() != 1)
    throw ParseError(1, 1, "expected a single basic formula");
  return f.front();
}

} // namespace ifmon
