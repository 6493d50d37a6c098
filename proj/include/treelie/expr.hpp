#pragma once

// Scalar expressions in x1..xn: parsing, differentiation, evaluation.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "treelie/poly.hpp"
#include "treelie/rational.hpp"

namespace treelie {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Const, Pi, Var, Neg, Sin, Cos, Exp, Add, Sub, Mul, Div, Pow };

  Kind kind = Kind::Const;
  Rational value;    // Const
  int var = 0;       // Var, 1-based
  long exponent = 0;  // Pow
  ExprPtr a, b;

  bool is_const(long v) const { return kind == Kind::Const && value == Rational(v); }
};

namespace expr {
ExprPtr constant(Rational v);
ExprPtr pi();
ExprPtr var(int i);
ExprPtr neg(ExprPtr a);
ExprPtr unary(Expr::Kind k, ExprPtr a);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr a, long k);
}  // namespace expr

/// Precedence, tightest first: ^, unary minus, * and /, + and -. Binary
/// operators associate to the left; exponents must be integer literals.
/// Errors carry the byte offset of the offending token.
ExprPtr parse_expression(std::string_view text, int n);

ExprPtr diff_expr(const ExprPtr& e, int var);

double eval(const ExprPtr& e, const std::vector<double>& x);

/// No transcendental functions, no pi, no division by a non-constant, no negative powers.
bool is_polynomial(const ExprPtr& e);

/// Throws ValidationError when the expression is not polynomial.
MultiPoly to_polynomial(const ExprPtr& e);

std::string to_string(const ExprPtr& e);

}  // namespace treelie
