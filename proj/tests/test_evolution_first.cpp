#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "treelie/errors.hpp"
#include "treelie/first.hpp"

using namespace treelie;

namespace {
MultiPoly X(int i) { return MultiPoly::var(Symbol::x(i)); }
MultiPoly T() { return MultiPoly::var(Symbol::t()); }
MultiPoly Q(long p, long q) { return MultiPoly(Rational(p, q)); }

std::map<Symbol, std::complex<double>> point(double t, const std::vector<double>& x) {
  std::map<Symbol, std::complex<double>> at{{Symbol::t(), t}};
  for (std::size_t i = 0; i < x.size(); ++i) at[Symbol::x(static_cast<int>(i + 1))] = x[i];
  return at;
}

/// Random polynomial of total degree <= 3 in x1..xn.
MultiPoly random_f(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> var(1, n), coeff(-3, 3), deg(0, 3);
  MultiPoly f;
  for (int k = 0; k < 4; ++k) {
    MultiPoly term(coeff(rng));
    int d = deg(rng);
    for (int e = 0; e < d; ++e) term *= X(var(rng));
    f += term;
  }
  return f;
}
}  // namespace

TEST_CASE("bch coefficients") {
  auto c = bch_coefficients(6);
  REQUIRE(c.a.size() == 7);
  CHECK(c.a[0] == Rational(1));
  CHECK(c.a[1] == Rational(1, 2));
  CHECK(c.a[2] == Rational(1, 12));
  CHECK(c.a[3] == Rational(0));
  CHECK(c.a[4] == Rational(-1, 720));
  CHECK(c.a[6] == Rational(1, 30240));
  CHECK(c.theta[0] == Rational(1));
  CHECK(c.theta[1] == Rational(-1, 2));
  CHECK(c.theta[2] == Rational(1, 6));
  CHECK(c.theta[3] == Rational(-1, 24));
  CHECK_THROWS_AS(bch_coefficients(-1), ValidationError);
  CHECK(bch_coefficients(0).a == std::vector<Rational>{Rational(1)});
}

TEST_CASE("bch coefficients match the double sum") {
  auto c = bch_coefficients(8);
  for (int k = 0; k <= 8; ++k) {
    CAPTURE(k);
    CHECK(c.a[static_cast<std::size_t>(k)] == oracle::bch_double_sum(k));
  }
}

TEST_CASE("bch series identity") {
  for (int K = 0; K <= 10; ++K) {
    auto c = bch_coefficients(K);
    for (int d = 0; d <= K; ++d) {
      Rational s;
      for (int k = 0; k <= d; ++k) s += c.a[static_cast<std::size_t>(k)] * c.theta[static_cast<std::size_t>(d - k)];
      CHECK(s == Rational(d == 0 ? 1 : 0));
    }
  }
}

TEST_CASE("eta examples") {
  auto A2 = eta_family(corpus::all_ones_chain(2));
  CHECK(A2.eta_of(1) == T());
  CHECK(A2.eta_of(2) == X(1) * T() + Q(1, 2) * T().pow(2));
  auto A3 = eta_family(corpus::all_ones_chain(3));
  CHECK(A3.eta_of(3) == X(2) * T() + Q(1, 2) * X(1) * T().pow(2) + Q(1, 6) * T().pow(3));
  CHECK(A3.xi_of(2) == X(1) * T() - Q(1, 2) * T().pow(2));
}

TEST_CASE("corpus: eta vanishes at t=0 and only sees strict ancestors") {
  for (const auto& [name, t] : corpus::trees()) {
    CAPTURE(name);
    auto fam = eta_family(t);
    CHECK(fam.eta_of(1) == T());
    for (int i = 1; i <= t.size(); ++i) {
      CHECK(fam.eta_of(i).substitute(Symbol::t(), MultiPoly(0)).is_zero());
      auto c = clan(t, i);
      for (int r = 1; r <= t.size(); ++r) {
        bool allowed = r != i && std::find(c.begin(), c.end(), r) != c.end();
        if (!allowed) CHECK(fam.eta_of(i).derivative(Symbol::x(r)).is_zero());
      }
    }
  }
}

TEST_CASE("solve_first_order examples") {
  auto t = corpus::all_ones_chain(2);
  auto sol = solve_first_order(t, parse_expression("x2", 2));
  CHECK(sol(0.7, {0.3, -0.2}) == doctest::Approx(-0.2 + 0.3 * 0.7 + 0.49 / 2));
  auto u = first_order_polynomial(sol.family(), X(2));
  CHECK(u.derivative(Symbol::t()) == X(1) + T());
  CHECK(first_order_residual(t, u).is_zero());
  auto trig = solve_first_order(corpus::chain({1, 2}), parse_expression("sin(x3) + exp(x1*x2)", 3));
  std::vector<double> x{0.1, -0.4, 0.9};
  CHECK(trig(0.0, x) == std::sin(0.9) + std::exp(-0.04));
  auto konst = solve_first_order(corpus::chain({1, 2}), parse_expression("5/2", 3));
  CHECK(konst(0.8, x) == 2.5);
  CHECK_THROWS_AS(sol(0.1, {1.0}), ValidationError);
}

TEST_CASE("exact verification") {
  auto r = verify_first_order(corpus::chain({1, 2}), parse_expression("x3^2", 3), VerifyMode::Exact);
  CHECK(r.verified);
  CHECK(r.residual.is_zero());
  CHECK_THROWS_AS(verify_first_order(corpus::chain({1, 2}), parse_expression("sin(x3)", 3), VerifyMode::Exact),
                  ValidationError);
}

TEST_CASE("corpus: exact residual vanishes for random cubic f") {
  std::mt19937 rng(3);
  for (const auto& [name, t] : corpus::trees()) {
    CAPTURE(name);
    auto fam = eta_family(t);
    for (int trial = 0; trial < 5; ++trial) {
      auto f = random_f(rng, t.size());
      CHECK(first_order_residual(t, first_order_polynomial(fam, f)).is_zero());
    }
    // a perturbed shift must fail, so the residual check has teeth
    auto wrong = fam;
    wrong.eta.back() += T().pow(2);
    CHECK(!first_order_residual(t, first_order_polynomial(wrong, X(t.size()))).is_zero());
  }
}

TEST_CASE("rk4 flow example") {
  auto X = rk4_flow(corpus::all_ones_chain(2), {0.3, -0.2}, 0.7);
  CHECK(std::abs(X[0] - 1.0) <= 1e-12);
  CHECK(std::abs(X[1] - (-0.2 + 0.3 * 0.7 + 0.49 / 2)) <= 1e-6);
}

TEST_CASE("corpus: numeric verification against RK4") {
  for (const auto& [name, t] : corpus::trees()) {
    CAPTURE(name);
    auto r = verify_first_order(t, parse_expression("cos(x1)", t.size()), VerifyMode::Numeric, 17);
    CHECK(r.samples >= 100);
    CHECK(r.max_error <= kFlowTolerance);
    CHECK(r.verified);
  }
}

TEST_CASE("corpus: flow semigroup and xi factorization") {
  std::mt19937 rng(19);
  for (const auto& [name, t] : corpus::trees()) {
    CAPTURE(name);
    auto fam = eta_family(t);
    for (const auto& d : semigroup_defect(fam)) CHECK(d.is_zero());
    auto f = random_f(rng, t.size());
    CHECK(apply_xi_factorization(fam, f) == first_order_polynomial(fam, f));
  }
}

TEST_CASE("general g by nested quadrature") {
  auto A2 = corpus::all_ones_chain(2);
  GeneralEta ex(A2, {{1, [](double v) { return std::exp(v); }}});
  for (double t : {0.3, 0.7, -0.5})
    for (double x1 : {-0.4, 0.2}) CHECK(std::abs(ex(2, t, {x1, 0.0}) - std::exp(x1) * (std::exp(t) - 1)) <= 1e-9);
  GeneralEta one(A2, {{1, [](double) { return 1.0; }}});
  CHECK(std::abs(one(2, 0.6, {0.3, 0.1}) - 0.6) <= 1e-12);
  CHECK_THROWS_AS(GeneralEta(A2, {{2, [](double v) { return v; }}}), ValidationError);
}

TEST_CASE("corpus: quadrature with monomial g matches exact eta") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& [name, t] : corpus::trees()) {
    CAPTURE(name);
    auto fam = eta_family(t);
    GeneralEta ge(t, {});
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> x(static_cast<std::size_t>(t.size()));
      for (auto& v : x) v = u(rng);
      double time = u(rng);
      for (int i = 1; i <= t.size(); ++i)
        CHECK(std::abs(ge(i, time, x) - fam.eta_of(i).eval_complex(point(time, x)).real()) <= 1e-8);
    }
  }
}

TEST_CASE("quadrature failure reports the nesting level") {
  auto A2 = corpus::all_ones_chain(2);
  GeneralEta bad(A2, {{1, [](double v) { return 1.0 / v; }}});
  try {
    bad(2, 1.0, {-0.5, 0.0});
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(std::string(e.what()).find("nesting level 1") != std::string::npos);
  }
}
