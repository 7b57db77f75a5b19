#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "trxy/rational_function.hpp"

namespace trxy {

struct ExpressionAst {
  enum class Kind { Number, Symbol, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind = Kind::Number;
  Rational value;     // Number
  Var symbol = 0;     // Symbol
  long exponent = 0;  // Pow
  std::size_t offset = 0;
  std::unique_ptr<ExpressionAst> lhs, rhs;
};

// Grammar with precedence ^ > unary minus > * / > + -, binary operators
// left-associative, integer exponents only. Symbols come from the variable
// registry. Throws ParseError carrying the byte offset.
ExpressionAst parse_expression(std::string_view src);

// Throws ParseError for division by the zero polynomial or for symbols
// outside `allowed`.
RationalFunction lower(const ExpressionAst& ast, VarMask allowed = ~VarMask(0));

RationalFunction parse_rational_function(std::string_view src, VarMask allowed = ~VarMask(0));

}  // namespace trxy
