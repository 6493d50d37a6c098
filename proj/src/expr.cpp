#include "treelie/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "treelie/errors.hpp"

namespace treelie {

namespace expr {

namespace {
ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
bool is_num(const ExprPtr& e) { return e->kind == Expr::Kind::Const; }
}  // namespace

ExprPtr constant(Rational v) {
  Expr e;
  e.kind = Expr::Kind::Const;
  e.value = std::move(v);
  return make(std::move(e));
}

ExprPtr pi() {
  Expr e;
  e.kind = Expr::Kind::Pi;
  return make(std::move(e));
}

ExprPtr var(int i) {
  Expr e;
  e.kind = Expr::Kind::Var;
  e.var = i;
  return make(std::move(e));
}

ExprPtr neg(ExprPtr a) {
  if (is_num(a)) return constant(-a->value);
  if (a->kind == Expr::Kind::Neg) return a->a;
  Expr e;
  e.kind = Expr::Kind::Neg;
  e.a = std::move(a);
  return make(std::move(e));
}

ExprPtr unary(Expr::Kind k, ExprPtr a) {
  if (k == Expr::Kind::Neg) return neg(std::move(a));
  Expr e;
  e.kind = k;
  e.a = std::move(a);
  return make(std::move(e));
}

namespace {
ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = k;
  e.a = std::move(a);
  e.b = std::move(b);
  return make(std::move(e));
}
}  // namespace

ExprPtr add(ExprPtr a, ExprPtr b) {
  if (a->is_const(0)) return b;
  if (b->is_const(0)) return a;
  if (is_num(a) && is_num(b)) return constant(a->value + b->value);
  return binary(Expr::Kind::Add, std::move(a), std::move(b));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
  if (b->is_const(0)) return a;
  if (a->is_const(0)) return neg(std::move(b));
  if (is_num(a) && is_num(b)) return constant(a->value - b->value);
  return binary(Expr::Kind::Sub, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
  if (a->is_const(0) || b->is_const(0)) return constant(0);
  if (a->is_const(1)) return b;
  if (b->is_const(1)) return a;
  if (is_num(a) && is_num(b)) return constant(a->value * b->value);
  // keep numeric factors in front
  if ((is_num(b) || b->kind == Expr::Kind::Pi) && !(is_num(a) || a->kind == Expr::Kind::Pi)) std::swap(a, b);
  return binary(Expr::Kind::Mul, std::move(a), std::move(b));
}

ExprPtr div(ExprPtr a, ExprPtr b) {
  if (b->is_const(0)) throw ValidationError("division by zero constant");
  if (a->is_const(0)) return constant(0);
  if (b->is_const(1)) return a;
  if (is_num(a) && is_num(b)) return constant(a->value / b->value);
  return binary(Expr::Kind::Div, std::move(a), std::move(b));
}

ExprPtr pow(ExprPtr a, long k) {
  if (k == 0) return constant(1);
  if (k == 1) return a;
  if (is_num(a) && k > 0) return constant(a->value.pow(static_cast<unsigned>(k)));
  Expr e;
  e.kind = Expr::Kind::Pow;
  e.a = std::move(a);
  e.exponent = k;
  return make(std::move(e));
}

}  // namespace expr

namespace {

class Parser {
 public:
  Parser(std::string_view text, int n) : s_(text), n_(n) {}

  ExprPtr parse() {
    skip();
    if (pos_ == s_.size()) fail("empty expression", 0);
    auto e = parse_sum();
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw ValidationError(what + " at offset " + std::to_string(at));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_sum() {
    auto e = parse_product();
    while (true) {
      if (accept('+')) e = expr::add(e, parse_product());
      else if (accept('-')) e = expr::sub(e, parse_product());
      else return e;
    }
  }

  ExprPtr parse_product() {
    auto e = parse_unary();
    while (true) {
      if (accept('*')) {
        e = expr::mul(e, parse_unary());
      } else if (accept('/')) {
        skip();
        std::size_t at = pos_;
        auto d = parse_unary();
        if (d->is_const(0)) fail("division by zero", at);
        e = expr::div(e, d);
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_unary() {
    if (accept('-')) return expr::neg(parse_unary());
    return parse_power();
  }

  ExprPtr parse_power() {
    auto e = parse_primary();
    while (accept('^')) {
      skip();
      std::size_t at = pos_;
      bool negative = accept('-');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_ || pos_ - start > 6) fail("exponent must be an integer literal", at);
      long k = std::stol(std::string(s_.substr(start, pos_ - start)));
      e = expr::pow(e, negative ? -k : k);
    }
    return e;
  }

  ExprPtr parse_primary() {
    skip();
    if (pos_ == s_.size()) fail("unexpected end of expression", pos_);
    std::size_t at = pos_;
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = parse_sum();
      if (!accept(')')) fail("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t save = pos_++;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        } else {
          pos_ = save;
        }
      }
      try {
        return expr::constant(Rational::parse(s_.substr(at, pos_ - at)));
      } catch (const ValidationError&) {
        fail("malformed number", at);
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id(s_.substr(at, pos_ - at));
      if (id.size() > 1 && id[0] == 'x' &&
          id.find_first_not_of("0123456789", 1) == std::string::npos) {
        if (id.size() > 6) fail("variable out of range", at);
        int i = std::stoi(id.substr(1));
        if (i < 1 || i > n_) fail("variable out of range", at);
        return expr::var(i);
      }
      if (id == "pi") return expr::pi();
      Expr::Kind k;
      if (id == "sin") k = Expr::Kind::Sin;
      else if (id == "cos") k = Expr::Kind::Cos;
      else if (id == "exp") k = Expr::Kind::Exp;
      else fail("unknown identifier '" + id + "'", at);
      if (!accept('(')) fail("expected '(' after " + id, pos_);
      auto arg = parse_sum();
      if (!accept(')')) fail("expected ')'", pos_);
      return expr::unary(k, arg);
    }
    fail(std::string("unexpected '") + c + "'", at);
  }

  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expression(std::string_view text, int n) { return Parser(text, n).parse(); }

ExprPtr diff_expr(const ExprPtr& e, int v) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Const:
    case K::Pi: return expr::constant(0);
    case K::Var: return expr::constant(e->var == v ? 1 : 0);
    case K::Neg: return expr::neg(diff_expr(e->a, v));
    case K::Add: return expr::add(diff_expr(e->a, v), diff_expr(e->b, v));
    case K::Sub: return expr::sub(diff_expr(e->a, v), diff_expr(e->b, v));
    case K::Mul:
      return expr::add(expr::mul(diff_expr(e->a, v), e->b), expr::mul(e->a, diff_expr(e->b, v)));
    case K::Div: {
      auto num = expr::sub(expr::mul(diff_expr(e->a, v), e->b), expr::mul(e->a, diff_expr(e->b, v)));
      return expr::div(num, expr::pow(e->b, 2));
    }
    case K::Pow:
      return expr::mul(expr::mul(expr::constant(Rational(e->exponent)), expr::pow(e->a, e->exponent - 1)),
                       diff_expr(e->a, v));
    case K::Sin: return expr::mul(diff_expr(e->a, v), expr::unary(K::Cos, e->a));
    case K::Cos: return expr::neg(expr::mul(diff_expr(e->a, v), expr::unary(K::Sin, e->a)));
    case K::Exp: return expr::mul(diff_expr(e->a, v), e);
  }
  return expr::constant(0);
}

double eval(const ExprPtr& e, const std::vector<double>& x) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Const: return e->value.to_double();
    case K::Pi: return std::numbers::pi;
    case K::Var:
      if (e->var < 1 || e->var > static_cast<int>(x.size()))
        throw ValidationError("no value for x" + std::to_string(e->var));
      return x[e->var - 1];
    case K::Neg: return -eval(e->a, x);
    case K::Sin: return std::sin(eval(e->a, x));
    case K::Cos: return std::cos(eval(e->a, x));
    case K::Exp: return std::exp(eval(e->a, x));
    case K::Add: return eval(e->a, x) + eval(e->b, x);
    case K::Sub: return eval(e->a, x) - eval(e->b, x);
    case K::Mul: return eval(e->a, x) * eval(e->b, x);
    case K::Div: return eval(e->a, x) / eval(e->b, x);
    case K::Pow: return std::pow(eval(e->a, x), static_cast<double>(e->exponent));
  }
  return 0.0;
}

bool is_polynomial(const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Const:
    case K::Var: return true;
    case K::Pi:
    case K::Sin:
    case K::Cos:
    case K::Exp: return false;
    case K::Neg: return is_polynomial(e->a);
    case K::Add:
    case K::Sub:
    case K::Mul: return is_polynomial(e->a) && is_polynomial(e->b);
    case K::Div: return is_polynomial(e->a) && e->b->kind == K::Const;
    case K::Pow: return e->exponent >= 0 && is_polynomial(e->a);
  }
  return false;
}

MultiPoly to_polynomial(const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Const: return MultiPoly(e->value);
    case K::Var: return MultiPoly::var(Symbol::x(e->var));
    case K::Neg: return -to_polynomial(e->a);
    case K::Add: return to_polynomial(e->a) + to_polynomial(e->b);
    case K::Sub: return to_polynomial(e->a) - to_polynomial(e->b);
    case K::Mul: return to_polynomial(e->a) * to_polynomial(e->b);
    case K::Div:
      if (e->b->kind != K::Const) break;
      return to_polynomial(e->a).scaled(Rational(1) / e->b->value);
    case K::Pow:
      if (e->exponent < 0) break;
      return to_polynomial(e->a).pow(e->exponent);
    default: break;
  }
  throw ValidationError("expression is not a polynomial with rational coefficients: " + to_string(e));
}

namespace {

int precedence(const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Add:
    case K::Sub: return 1;
    case K::Mul:
    case K::Div: return 2;
    case K::Neg: return 3;
    case K::Pow: return 4;
    case K::Const: return e->value.sign() < 0 ? 3 : (e->value.is_integer() ? 5 : 2);
    default: return 5;
  }
}

std::string wrap(const ExprPtr& e, int min_prec) {
  std::string s = to_string(e);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Const: return e->value.to_string();
    case K::Pi: return "pi";
    case K::Var: return "x" + std::to_string(e->var);
    case K::Neg: return "-" + wrap(e->a, 4);
    case K::Sin: return "sin(" + to_string(e->a) + ")";
    case K::Cos: return "cos(" + to_string(e->a) + ")";
    case K::Exp: return "exp(" + to_string(e->a) + ")";
    case K::Add: return wrap(e->a, 1) + " + " + wrap(e->b, 2);
    case K::Sub: return wrap(e->a, 1) + " - " + wrap(e->b, 2);
    case K::Mul: return wrap(e->a, 2) + "*" + wrap(e->b, 3);
    case K::Div: return wrap(e->a, 2) + "/" + wrap(e->b, 3);
    case K::Pow: return wrap(e->a, 5) + "^" + std::to_string(e->exponent);
  }
  return "?";
}

}  // namespace treelie
