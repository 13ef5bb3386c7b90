#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cbaco/error.hpp"
#include "cbaco/strategy/ast.hpp"

namespace cbaco::strat {

namespace detail {

enum class Tok { ident, string, integer, lparen, rparen, comma, semi, eq, cup, diff, end };

struct Token {
  Tok type;
  std::string text;
  int line;
  int column;
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::string: return "string literal";
    case Tok::integer: return "integer";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::semi: return "';'";
    case Tok::eq: return "'=='";
    case Tok::cup: return "'[cup]'";
    case Tok::diff: return "'\\'";
    case Tok::end: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      int l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::end, "", l, c});
        return out;
      }
      char ch = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::string id;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_' || src_[pos_] == '-'))
          id += advance();
        out.push_back({Tok::ident, id, l, c});
      } else if (std::isdigit(static_cast<unsigned char>(ch)) ||
                 (ch == '-' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        std::string num(1, advance());
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          num += advance();
        out.push_back({Tok::integer, num, l, c});
      } else if (ch == '"') {
        advance();
        std::string s;
        while (true) {
          if (pos_ >= src_.size()) throw SyntaxError("unterminated string literal", l, c);
          char d = advance();
          if (d == '"') break;
          if (d == '\\' && pos_ < src_.size()) d = advance();
          s += d;
        }
        out.push_back({Tok::string, s, l, c});
      } else if (src_.substr(pos_, 5) == "[cup]") {
        for (int i = 0; i < 5; ++i) advance();
        out.push_back({Tok::cup, "[cup]", l, c});
      } else if (src_.substr(pos_, 2) == "==") {
        advance();
        advance();
        out.push_back({Tok::eq, "==", l, c});
      } else {
        advance();
        switch (ch) {
          case '(': out.push_back({Tok::lparen, "(", l, c}); break;
          case ')': out.push_back({Tok::rparen, ")", l, c}); break;
          case ',': out.push_back({Tok::comma, ",", l, c}); break;
          case ';': out.push_back({Tok::semi, ";", l, c}); break;
          case '\\': out.push_back({Tok::diff, "\\", l, c}); break;
          default:
            throw SyntaxError(std::string("unexpected character '") + ch + "'", l, c);
        }
      }
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  // Whitespace and // line comments.
  void skip_blank() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expr run() {
    Expr e = sequence();
    expect(Tok::end);
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, peek().line, peek().column);
  }

  const Token& expect(Tok t) {
    if (peek().type != t)
      fail(std::string("expected ") + describe(t) + ", found " + describe(peek().type) +
           (peek().text.empty() ? "" : " '" + peek().text + "'"));
    return next();
  }

  Expr sequence() {
    Expr first = set_term();
    if (peek().type != Tok::semi) return first;
    Expr s{Op::seq, {}, {std::move(first)}, {}, {}};
    while (peek().type == Tok::semi) {
      next();
      s.kids.push_back(set_term());
    }
    return s;
  }

  Expr set_term() {
    Expr left = primary();
    while (peek().type == Tok::cup || peek().type == Tok::diff) {
      Op op = next().type == Tok::cup ? Op::set_union : Op::set_diff;
      Expr right = primary();
      Expr e{op, {}, {}, {}, {}};
      e.kids.push_back(std::move(left));
      e.kids.push_back(std::move(right));
      left = std::move(e);
    }
    return left;
  }

  Expr unary(Op op) {
    expect(Tok::lparen);
    Expr e{op, {}, {}, {}, {}};
    e.kids.push_back(sequence());
    expect(Tok::rparen);
    return e;
  }

  ElementKind element_kind() {
    const Token& t = expect(Tok::ident);
    if (t.text == "node") return ElementKind::node;
    if (t.text == "edge") return ElementKind::edge;
    if (t.text == "port") return ElementKind::port;
    throw SyntaxError("expected node, edge or port, found '" + t.text + "'", t.line,
                      t.column);
  }

  Predicate predicate() {
    Predicate p;
    p.attr = expect(Tok::ident).text;
    expect(Tok::eq);
    const Token& t = peek();
    if (t.type == Tok::string) {
      p.literal = Value(next().text);
    } else if (t.type == Tok::integer) {
      p.literal = Value(static_cast<std::int64_t>(std::stoll(next().text)));
    } else if (t.type == Tok::ident && (t.text == "true" || t.text == "false")) {
      p.literal = Value(next().text == "true");
    } else {
      fail("expected a literal after '=='");
    }
    return p;
  }

  Expr neighbourhood(Op op) {
    expect(Tok::lparen);
    Expr e{op, {}, {}, {}, {}};
    e.kids.push_back(sequence());
    expect(Tok::comma);
    e.kind = element_kind();
    expect(Tok::comma);
    e.pred = predicate();
    expect(Tok::rparen);
    return e;
  }

  Expr primary() {
    if (peek().type == Tok::lparen) {
      next();
      Expr e = sequence();
      expect(Tok::rparen);
      return e;
    }
    const Token& t = peek();
    if (t.type != Tok::ident)
      fail(std::string("expected a strategy, found ") + describe(t.type));
    std::string word = next().text;
    static const std::map<std::string, Op> unary_ops = {
        {"one", Op::one},           {"all", Op::all},
        {"repeat", Op::repeat},     {"not", Op::not_},
        {"isEmpty", Op::is_empty},  {"setPos", Op::set_pos},
        {"setBan", Op::set_ban}};
    static const std::map<std::string, Op> constants = {
        {"crtGraph", Op::crt_graph}, {"crtPos", Op::crt_pos}, {"crtBan", Op::crt_ban}};
    if (auto it = unary_ops.find(word); it != unary_ops.end()) return unary(it->second);
    if (auto it = constants.find(word); it != constants.end())
      return Expr{it->second, {}, {}, {}, {}};
    if (word == "ngb") return neighbourhood(Op::ngb);
    if (word == "property") return neighbourhood(Op::property);
    if (word == "while") {
      Expr e{Op::while_do, {}, {}, {}, {}};
      expect(Tok::lparen);
      e.kids.push_back(sequence());
      expect(Tok::rparen);
      const Token& d = expect(Tok::ident);
      if (d.text != "do")
        throw SyntaxError("expected 'do' after while condition", d.line, d.column);
      expect(Tok::lparen);
      e.kids.push_back(sequence());
      expect(Tok::rparen);
      return e;
    }
    if (word == "do" || word == "node" || word == "edge" || word == "port")
      throw SyntaxError("unexpected keyword '" + word + "'", t.line, t.column);
    if (peek().type == Tok::lparen)
      throw SyntaxError("unknown construct '" + word + "'", t.line, t.column);
    return Expr{Op::rule, word, {}, {}, {}};
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace detail

// Parses a strategy script. Whitespace and newlines are insignificant.
inline Expr parse_strategy(std::string_view text) {
  return detail::Parser(detail::Lexer(text).run()).run();
}

}  // namespace cbaco::strat
