#include "trxy/expression.hpp"

#include <cctype>

#include "trxy/errors.hpp"

namespace trxy {

namespace {

using Node = std::unique_ptr<ExpressionAst>;

Node make(ExpressionAst::Kind k, std::size_t offset) {
  auto n = std::make_unique<ExpressionAst>();
  n->kind = k;
  n->offset = offset;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExpressionAst parse() {
    Node n = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return std::move(*n);
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node binary(ExpressionAst::Kind k, Node l, Node r, std::size_t at) {
    Node n = make(k, at);
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  Node expr() {
    Node l = term();
    while (true) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('+')) {
        l = binary(ExpressionAst::Kind::Add, std::move(l), term(), at);
      } else if (accept('-')) {
        l = binary(ExpressionAst::Kind::Sub, std::move(l), term(), at);
      } else {
        return l;
      }
    }
  }

  Node term() {
    Node l = unary();
    while (true) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('*')) {
        l = binary(ExpressionAst::Kind::Mul, std::move(l), unary(), at);
      } else if (accept('/')) {
        l = binary(ExpressionAst::Kind::Div, std::move(l), unary(), at);
      } else {
        return l;
      }
    }
  }

  Node unary() {
    skip_ws();
    std::size_t at = pos_;
    if (accept('-')) {
      Node n = make(ExpressionAst::Kind::Neg, at);
      n->lhs = unary();
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  Node power() {
    Node base = primary();
    skip_ws();
    std::size_t at = pos_;
    if (!accept('^')) return base;
    skip_ws();
    std::size_t exp_at = pos_;
    Node e = exponent_operand();
    RationalFunction v = lower(*e);
    if (!v.is_constant() || v.constant_value().get_den() != 1) {
      throw ParseError("non-integer exponent", exp_at);
    }
    const Integer num = v.constant_value().get_num();
    if (!num.fits_slong_p() || abs(num) > 100000) throw ParseError("exponent out of range", exp_at);
    Node n = make(ExpressionAst::Kind::Pow, at);
    n->lhs = std::move(base);
    n->exponent = num.get_si();
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '^') throw ParseError("chained exponents need parentheses", pos_);
    return n;
  }

  Node exponent_operand() {
    skip_ws();
    std::size_t at = pos_;
    if (accept('-')) {
      Node n = make(ExpressionAst::Kind::Neg, at);
      n->lhs = exponent_operand();
      return n;
    }
    return primary();
  }

  Node primary() {
    skip_ws();
    std::size_t at = pos_;
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (accept('(')) {
      Node n = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '.') throw ParseError("decimal literals are not supported", pos_);
      Node n = make(ExpressionAst::Kind::Number, at);
      n->value = Rational(Integer(std::string(src_.substr(start, pos_ - start)), 10));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      std::string_view name = src_.substr(start, pos_ - start);
      auto v = find_var(name);
      if (!v) throw ParseError("unknown symbol '" + std::string(name) + "'", start);
      Node n = make(ExpressionAst::Kind::Symbol, at);
      n->symbol = *v;
      return n;
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

ExpressionAst parse_expression(std::string_view src) { return Parser(src).parse(); }

RationalFunction lower(const ExpressionAst& ast, VarMask allowed) {
  using K = ExpressionAst::Kind;
  switch (ast.kind) {
    case K::Number:
      return RationalFunction(ast.value);
    case K::Symbol:
      if (!((allowed >> ast.symbol) & 1u)) {
        throw ParseError("symbol '" + var_name(ast.symbol) + "' is not allowed here", ast.offset);
      }
      return RationalFunction::variable(ast.symbol);
    case K::Neg:
      return -lower(*ast.lhs, allowed);
    case K::Add:
      return lower(*ast.lhs, allowed) + lower(*ast.rhs, allowed);
    case K::Sub:
      return lower(*ast.lhs, allowed) - lower(*ast.rhs, allowed);
    case K::Mul:
      return lower(*ast.lhs, allowed) * lower(*ast.rhs, allowed);
    case K::Div: {
      RationalFunction d = lower(*ast.rhs, allowed);
      if (d.is_zero()) throw ParseError("division by zero", ast.offset);
      return lower(*ast.lhs, allowed) / d;
    }
    case K::Pow: {
      RationalFunction b = lower(*ast.lhs, allowed);
      if (b.is_zero() && ast.exponent < 0) throw ParseError("zero raised to a negative power", ast.offset);
      return b.pow(static_cast<int>(ast.exponent));
    }
  }
  throw Error("internal: unknown expression node");
}

RationalFunction parse_rational_function(std::string_view src, VarMask allowed) {
  return lower(parse_expression(src), allowed);
}

}  // namespace trxy
