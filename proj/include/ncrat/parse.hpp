#pragma once

#include <cstddef>
#include <exception>
#include <string>
#include <string_view>

#include "ncrat/expr.hpp"

namespace ncrat {

struct ParseError {
  std::size_t byte_offset = 0;  // within [0, input length]
  std::string message;
  std::string expected;  // description of the acceptable tokens at the offset
};

class ParseException : public std::exception {
 public:
  explicit ParseException(ParseError error);
  const ParseError& error() const { return error_; }
  const char* what() const noexcept override { return what_.c_str(); }

 private:
  ParseError error_;
  std::string what_;
};

/// Parses the expression grammar:
///
///   expr    := sum
///   sum     := prod { ("+" | "-") prod }
///   prod    := unary { "*" unary }
///   unary   := "-" unary | postfix
///   postfix := atom { "'" | "^-1" }
///   atom    := NUMBER | VAR | "(" expr ")"
///   VAR     := "x" DIGITS | "x" | "y" | "z"      (x,y,z alias x1,x2,x3)
///   NUMBER  := decimal literal, "NUMBERi" for pure-imaginary values
///
/// "'" applies only to variables (repeated quotes toggle the adjoint), and
/// arithmetic between plain number literals is folded into a single scalar,
/// so complex constants like "1 + 2i" parse to one scalar node. Whitespace is
/// insignificant. Throws ParseException on malformed input.
Expression parse(std::string_view input);

}  // namespace ncrat
