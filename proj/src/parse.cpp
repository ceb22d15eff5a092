#include "ncrat/parse.hpp"

#include <cctype>
#include <charconv>
#include <complex>
#include <cstdlib>
#include <optional>
#include <vector>

namespace ncrat {

ParseException::ParseException(ParseError error) : error_(std::move(error)) {
  what_ = "parse error at byte " + std::to_string(error_.byte_offset) + ": " + error_.message;
  if (!error_.expected.empty()) what_ += " (expected " + error_.expected + ")";
}

namespace {

enum class TokKind { Number, Var, Quote, InvOp, Plus, Minus, Star, LParen, RParen, End };

struct Token {
  TokKind kind;
  std::size_t offset = 0;
  std::complex<double> number{0.0, 0.0};  // Number
  int var_index = 0;                      // Var
};

[[noreturn]] void fail(std::size_t offset, std::string message, std::string expected = {}) {
  throw ParseException(ParseError{offset, std::move(message), std::move(expected)});
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) {
        out.push_back({TokKind::End, pos_});
        return out;
      }
      const std::size_t start = pos_;
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(lex_number());
      } else if (c == 'x' || c == 'y' || c == 'z') {
        out.push_back(lex_variable());
      } else if (c == '\'') {
        ++pos_;
        out.push_back({TokKind::Quote, start});
      } else if (c == '^') {
        if (text_.substr(pos_, 3) != "^-1") fail(start, "malformed inverse marker", "\"^-1\"");
        pos_ += 3;
        out.push_back({TokKind::InvOp, start});
      } else if (c == '+') {
        ++pos_;
        out.push_back({TokKind::Plus, start});
      } else if (c == '-') {
        ++pos_;
        out.push_back({TokKind::Minus, start});
      } else if (c == '*') {
        ++pos_;
        out.push_back({TokKind::Star, start});
      } else if (c == '(') {
        ++pos_;
        out.push_back({TokKind::LParen, start});
      } else if (c == ')') {
        ++pos_;
        out.push_back({TokKind::RParen, start});
      } else {
        fail(start, std::string("unknown token '") + c + "'");
      }
    }
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Token lex_number() {
    const std::size_t start = pos_;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{}) fail(start, "malformed number literal");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    Token tok{TokKind::Number, start};
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      tok.number = {0.0, value};
    } else {
      tok.number = {value, 0.0};
    }
    return tok;
  }

  Token lex_variable() {
    const std::size_t start = pos_;
    const char c = text_[pos_];
    ++pos_;
    Token tok{TokKind::Var, start};
    if (c == 'x' && pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      long index = 0;
      const char* begin = text_.data() + pos_;
      const char* end = text_.data() + text_.size();
      auto res = std::from_chars(begin, end, index);
      if (res.ec != std::errc{}) fail(start, "variable index out of range");
      pos_ = static_cast<std::size_t>(res.ptr - text_.data());
      if (index < 1) fail(start, "variable index must be >= 1");
      if (index > (1 << 20)) fail(start, "variable index out of range");
      tok.var_index = static_cast<int>(index);
    } else {
      tok.var_index = c == 'x' ? 1 : (c == 'y' ? 2 : 3);  // named aliases
    }
    return tok;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Expression run() {
    Expression e = parse_sum();
    if (peek().kind != TokKind::End)
      fail(peek().offset, "trailing input after expression", "operator or end of input");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool match(TokKind k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  static bool both_scalar(const Expression& a, const Expression& b) {
    return a.is_scalar() && b.is_scalar();
  }

  Expression parse_sum() {
    Expression left = parse_prod();
    while (true) {
      if (match(TokKind::Plus)) {
        Expression right = parse_prod();
        left = both_scalar(left, right)
                   ? Expression::scalar(left.scalar_value() + right.scalar_value())
                   : Expression::sum(std::move(left), std::move(right));
      } else if (match(TokKind::Minus)) {
        Expression right = parse_prod();
        left = both_scalar(left, right)
                   ? Expression::scalar(left.scalar_value() - right.scalar_value())
                   : Expression::difference(std::move(left), std::move(right));
      } else {
        return left;
      }
    }
  }

  Expression parse_prod() {
    Expression left = parse_unary();
    while (match(TokKind::Star)) {
      Expression right = parse_unary();
      left = both_scalar(left, right)
                 ? Expression::scalar(left.scalar_value() * right.scalar_value())
                 : Expression::product(std::move(left), std::move(right));
    }
    return left;
  }

  Expression parse_unary() {
    if (match(TokKind::Minus)) {
      Expression inner = parse_unary();
      return inner.is_scalar() ? Expression::scalar(-inner.scalar_value())
                               : Expression::negation(std::move(inner));
    }
    return parse_postfix();
  }

  Expression parse_postfix() {
    Expression e = parse_atom();
    while (true) {
      if (peek().kind == TokKind::Quote) {
        const Token& tok = advance();
        if (e.kind() == ExprKind::Variable) {
          e = Expression::adjoint_variable(e.variable_index());
        } else if (e.kind() == ExprKind::AdjointVariable) {
          e = Expression::variable(e.variable_index());
        } else {
          fail(tok.offset, "adjoint applies only to variables",
               "\"'\" directly after x<k>");
        }
      } else if (match(TokKind::InvOp)) {
        e = Expression::inverse(std::move(e));
      } else {
        return e;
      }
    }
  }

  Expression parse_atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokKind::Number:
        advance();
        return Expression::scalar(tok.number);
      case TokKind::Var:
        advance();
        return Expression::variable(tok.var_index);
      case TokKind::LParen: {
        advance();
        Expression e = parse_sum();
        if (!match(TokKind::RParen))
          fail(peek().offset, "unbalanced parenthesis", "\")\"");
        return e;
      }
      default:
        fail(tok.offset, "expected expression atom", "number, variable, \"(\" or \"-\"");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse(std::string_view input) {
  Lexer lexer(input);
  Parser parser(lexer.run());
  return parser.run();
}

}  // namespace ncrat
