#include <cctype>
#include <cstdlib>
#include <string>

#include "levilab/expr.hpp"

namespace levilab {

namespace {

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '\n') {
        ++line;
        col = 1;
        ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col;
        ++pos;
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  char take() {
    char c = peek();
    ++pos;
    ++col;
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(line, col, msg); }
};

struct Parser {
  Lexer lex;

  explicit Parser(const std::string& t) : lex(t) {}

  Expr parse() {
    Expr e = expression();
    if (!lex.eof()) lex.fail("unexpected trailing input");
    return e;
  }

  Expr expression() {
    Expr e = term();
    while (true) {
      char c = lex.peek();
      if (c == '+') {
        lex.take();
        e = add(e, term());
      } else if (c == '-') {
        lex.take();
        e = sub(e, term());
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    while (true) {
      char c = lex.peek();
      if (c == '*') {
        lex.take();
        e = mul(e, unary());
      } else if (c == '/') {
        lex.take();
        e = div(e, unary());
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (lex.peek() == '-') {
      lex.take();
      return neg(unary());
    }
    if (lex.peek() == '+') {
      lex.take();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (lex.peek() == '^') {
      lex.take();
      int k = integer_exponent();
      return ipow(base, k);
    }
    return base;
  }

  int integer_exponent() {
    bool paren = false;
    if (lex.peek() == '(') {
      lex.take();
      paren = true;
    }
    int sign = 1;
    if (lex.peek() == '-') {
      lex.take();
      sign = -1;
    }
    if (!std::isdigit(static_cast<unsigned char>(lex.peek())))
      lex.fail("exponent must be an integer literal");
    long v = 0;
    while (lex.pos < lex.text.size() && std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
      v = v * 10 + (lex.text[lex.pos] - '0');
      if (v > 64) lex.fail("exponent too large (max 64)");
      ++lex.pos;
      ++lex.col;
    }
    if (paren) {
      if (lex.peek() != ')') lex.fail("expected ')' after exponent");
      lex.take();
    }
    return static_cast<int>(sign * v);
  }

  Expr atom() {
    char c = lex.peek();
    if (c == '(') {
      lex.take();
      Expr e = expression();
      if (lex.peek() != ')') lex.fail("expected ')'");
      lex.take();
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    lex.fail(std::string("unexpected character '") + c + "'");
  }

  Expr number() {
    lex.skip_ws();
    std::size_t start = lex.pos;
    const char* begin = lex.text.c_str() + start;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) lex.fail("malformed number");
    std::size_t len = static_cast<std::size_t>(end - begin);
    lex.pos += len;
    lex.col += static_cast<int>(len);
    return constant(v);
  }

  int complex_index_arg() {
    if (lex.peek() != '(') lex.fail("expected '('");
    lex.take();
    if (lex.peek() != 'z') lex.fail("expected a complex variable z<j>");
    lex.take();
    if (!std::isdigit(static_cast<unsigned char>(lex.peek()))) lex.fail("expected index after 'z'");
    int j = 0;
    while (lex.pos < lex.text.size() && std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
      j = j * 10 + (lex.text[lex.pos] - '0');
      ++lex.pos;
      ++lex.col;
    }
    if (j < 1) lex.fail("complex indices start at z1");
    if (lex.peek() != ')') lex.fail("expected ')'");
    lex.take();
    return j - 1;
  }

  Expr identifier() {
    lex.skip_ws();
    std::size_t start = lex.pos;
    while (lex.pos < lex.text.size() &&
           (std::isalnum(static_cast<unsigned char>(lex.text[lex.pos])) || lex.text[lex.pos] == '_')) {
      ++lex.pos;
      ++lex.col;
    }
    std::string name = lex.text.substr(start, lex.pos - start);
    if (name == "exp" || name == "log" || name == "sqrt") {
      if (lex.peek() != '(') lex.fail("expected '(' after " + name);
      lex.take();
      Expr arg = expression();
      if (lex.peek() != ')') lex.fail("expected ')'");
      lex.take();
      if (name == "exp") return exp_of(arg);
      if (name == "log") return log_of(arg);
      return sqrt_of(arg);
    }
    if (name == "re") return re_z(complex_index_arg());
    if (name == "im") return im_z(complex_index_arg());
    if (name == "absq") return abs_sq(complex_index_arg());
    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i)
        digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      if (digits) {
        int idx = std::atoi(name.c_str() + 1);
        if (idx < 1) lex.fail("variable indices start at x1");
        return variable(idx - 1);
      }
    }
    lex.fail("unknown identifier '" + name + "'");
  }
};

} // namespace

Expr parse_expr(const std::string& text) {
  Parser p(text);
  return p.parse();
}

} // namespace levilab
