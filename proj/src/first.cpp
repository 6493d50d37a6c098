#include "treelie/first.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "treelie/errors.hpp"

namespace treelie {

BchCoefficients bch_coefficients(int K) {
  if (K < 0) throw ValidationError("order must be nonnegative");
  BchCoefficients r;
  for (int i = 1; i <= K + 1; ++i) {
    Rational th = Rational(1) / factorial(static_cast<unsigned>(i));
    r.theta.push_back(i % 2 == 1 ? th : -th);
  }
  r.a.push_back(Rational(1) / r.theta[0]);
  for (int k = 1; k <= K; ++k) {
    Rational s;
    for (int j = 1; j <= k; ++j) s += r.theta[static_cast<std::size_t>(j)] * r.a[static_cast<std::size_t>(k - j)];
    r.a.push_back(-s / r.theta[0]);
  }
  return r;
}

namespace {

MultiPoly negate_time(const MultiPoly& p) {
  return p.substitute(Symbol::t(), MultiPoly(-1) * MultiPoly::var(Symbol::t()));
}

std::map<Symbol, MultiPoly> shift_map(const EtaFamily& family, const std::vector<MultiPoly>& by) {
  std::map<Symbol, MultiPoly> m;
  for (int i = 1; i <= family.tree.size(); ++i)
    m[Symbol::x(i)] = MultiPoly::var(Symbol::x(i)) + by[static_cast<std::size_t>(i - 1)];
  return m;
}

}  // namespace

EtaFamily eta_family(const TreeDiagram& tree) {
  EtaFamily fam{tree, {}, {}};
  const int n = tree.size();
  fam.eta.resize(static_cast<std::size_t>(n));
  fam.eta[0] = MultiPoly::var(Symbol::t());
  std::vector<int> depth(static_cast<std::size_t>(n + 1), 0);
  for (int i = 2; i <= n; ++i) {
    const int p = tree.parent(i);
    depth[static_cast<std::size_t>(i)] = depth[static_cast<std::size_t>(p)] + 1;
    const Symbol y = Symbol::y(depth[static_cast<std::size_t>(i)]);
    MultiPoly inner = fam.eta_of(p).substitute(Symbol::t(), MultiPoly::var(y));
    MultiPoly integrand = (MultiPoly::var(Symbol::x(p)) + inner).pow(tree.weight(i));
    fam.eta[static_cast<std::size_t>(i - 1)] = integrand.integrate_from_zero(y, Symbol::t());
  }
  for (const auto& e : fam.eta) fam.xi.push_back(-negate_time(e));
  return fam;
}

FirstOrderSolution::FirstOrderSolution(EtaFamily family, ExprPtr f)
    : family_(std::move(family)), f_(std::move(f)) {}

std::vector<double> FirstOrderSolution::shifted(double t, const std::vector<double>& x) const {
  const int n = family_.tree.size();
  if (static_cast<int>(x.size()) != n)
    throw ValidationError("expected " + std::to_string(n) + " coordinates, got " + std::to_string(x.size()));
  std::map<Symbol, std::complex<double>> at{{Symbol::t(), t}};
  for (int i = 1; i <= n; ++i) at[Symbol::x(i)] = x[static_cast<std::size_t>(i - 1)];
  std::vector<double> out(x);
  for (int i = 1; i <= n; ++i) out[static_cast<std::size_t>(i - 1)] += family_.eta_of(i).eval_complex(at).real();
  return out;
}

double FirstOrderSolution::operator()(double t, const std::vector<double>& x) const {
  if (t == 0.0) return eval(f_, x);
  return eval(f_, shifted(t, x));
}

FirstOrderSolution solve_first_order(const TreeDiagram& tree, const ExprPtr& f) {
  return FirstOrderSolution(eta_family(tree), f);
}

MultiPoly first_order_polynomial(const EtaFamily& family, const MultiPoly& f) {
  return f.substitute(shift_map(family, family.eta));
}

MultiPoly first_order_residual(const TreeDiagram& tree, const MultiPoly& u) {
  MultiPoly r = u.derivative(Symbol::t()) - u.derivative(Symbol::x(1));
  for (int j = 2; j <= tree.size(); ++j) {
    MultiPoly coeff = MultiPoly::var(Symbol::x(tree.parent(j))).pow(tree.weight(j));
    r -= coeff * u.derivative(Symbol::x(j));
  }
  return r;
}

std::vector<double> rk4_flow(const TreeDiagram& tree, const std::vector<double>& x, double t, int steps) {
  const int n = tree.size();
  auto field = [&](const std::vector<double>& X) {
    std::vector<double> d(static_cast<std::size_t>(n));
    d[0] = 1.0;
    for (int j = 2; j <= n; ++j)
      d[static_cast<std::size_t>(j - 1)] = std::pow(X[static_cast<std::size_t>(tree.parent(j) - 1)], tree.weight(j));
    return d;
  };
  auto axpy = [](const std::vector<double>& a, double h, const std::vector<double>& b) {
    std::vector<double> r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += h * b[i];
    return r;
  };
  std::vector<double> X(x);
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    auto k1 = field(X);
    auto k2 = field(axpy(X, h / 2, k1));
    auto k3 = field(axpy(X, h / 2, k2));
    auto k4 = field(axpy(X, h, k3));
    for (std::size_t i = 0; i < X.size(); ++i) X[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return X;
}

std::vector<MultiPoly> semigroup_defect(const EtaFamily& family) {
  const MultiPoly t_plus_s = MultiPoly::var(Symbol::t()) + MultiPoly::var(Symbol::s());
  const auto shift = shift_map(family, family.eta);
  std::vector<MultiPoly> out;
  for (const auto& e : family.eta) {
    MultiPoly lhs = e.substitute(Symbol::t(), t_plus_s);
    MultiPoly in_s = e.substitute(Symbol::t(), MultiPoly::var(Symbol::s()));
    out.push_back(lhs - e - in_s.substitute(shift));
  }
  return out;
}

MultiPoly apply_xi_factorization(const EtaFamily& family, const MultiPoly& f) {
  MultiPoly r = f;
  for (int i = family.tree.size(); i >= 1; --i)
    r = r.substitute(Symbol::x(i), MultiPoly::var(Symbol::x(i)) + family.xi_of(i));
  return r;
}

FirstOrderReport verify_first_order(const TreeDiagram& tree, const ExprPtr& f, VerifyMode mode, unsigned seed) {
  FirstOrderReport rep;
  rep.mode = mode;
  const EtaFamily fam = eta_family(tree);
  if (mode == VerifyMode::Exact) {
    if (!is_polynomial(f)) throw ValidationError("exact verification requires a polynomial f");
    rep.residual = first_order_residual(tree, first_order_polynomial(fam, to_polynomial(f)));
    rep.verified = rep.residual.is_zero();
    return rep;
  }
  const int n = tree.size();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  FirstOrderSolution sol(fam, f);
  for (int s = 0; s < kFlowSamples; ++s) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = unit(rng);
    const double t = unit(rng);
    auto X = rk4_flow(tree, x, t);
    auto Y = sol.shifted(t, x);
    for (int i = 0; i < n; ++i)
      rep.max_error = std::max(rep.max_error, std::abs(X[static_cast<std::size_t>(i)] - Y[static_cast<std::size_t>(i)]));
    ++rep.samples;
  }
  rep.verified = rep.max_error <= kFlowTolerance;
  return rep;
}

GeneralEta::GeneralEta(TreeDiagram tree, std::map<int, ScalarFunction> g, double tol)
    : tree_(std::move(tree)), g_(std::move(g)), tol_(tol) {
  for (const auto& [node, fn] : g_) {
    if (node < 1 || node > tree_.size() || tree_.is_tip(node))
      throw ValidationError("g must be attached to a non-tip node (node " + std::to_string(node) + ")");
  }
}

double GeneralEta::integrand(int node, double y, const std::vector<double>& x) const {
  const int p = tree_.parent(node);
  const double arg = x[static_cast<std::size_t>(p - 1)] + (*this)(p, y, x);
  auto it = g_.find(p);
  return it != g_.end() ? it->second(arg) : std::pow(arg, tree_.weight(node));
}

double GeneralEta::simpson(int node, const std::vector<double>& x, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) const {
  const double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = integrand(node, lm, x), frm = integrand(node, rm, x);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  if (depth >= kMaxSimpsonDepth || !std::isfinite(delta)) {
    int level = 0;
    for (int v = node; v != 1; v = tree_.parent(v)) ++level;
    throw ConvergenceError("quadrature did not converge at nesting level " + std::to_string(level) + " (node " +
                           std::to_string(node) + ")");
  }
  return simpson(node, x, a, m, fa, flm, fm, left, tol / 2, depth + 1) +
         simpson(node, x, m, b, fm, frm, fb, right, tol / 2, depth + 1);
}

double GeneralEta::operator()(int node, double t, const std::vector<double>& x) const {
  if (node < 1 || node > tree_.size()) throw ValidationError("node out of range (node " + std::to_string(node) + ")");
  if (static_cast<int>(x.size()) != tree_.size()) throw ValidationError("coordinate count does not match the tree");
  if (node == 1) return t;
  if (t == 0.0) return 0.0;
  const double fa = integrand(node, 0.0, x), fm = integrand(node, t / 2, x), fb = integrand(node, t, x);
  const double whole = t / 6 * (fa + 4 * fm + fb);
  return simpson(node, x, 0.0, t, fa, fm, fb, whole, tol_, 0);
}

}  // namespace treelie
