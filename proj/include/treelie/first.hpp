#pragma once

// First-order evolution u_t = (d1 + sum x_i^{d} dj) u along the tree.

#include <functional>
#include <map>
#include <vector>

#include "treelie/expr.hpp"
#include "treelie/poly.hpp"
#include "treelie/rational.hpp"
#include "treelie/tree.hpp"

namespace treelie {

inline constexpr double kFlowTolerance = 1e-6;
inline constexpr double kQuadratureTolerance = 1e-9;
inline constexpr int kRk4Steps = 1000;
inline constexpr int kFlowSamples = 100;
inline constexpr int kMaxSimpsonDepth = 50;

struct BchCoefficients {
  std::vector<Rational> a;      // a_0..a_K
  std::vector<Rational> theta;  // theta_1..theta_{K+1}, stored from index 0
};

/// a_k from inverting (1 - e^{-x})/x = sum theta_i x^{i-1}.
BchCoefficients bch_coefficients(int K);

struct EtaFamily {
  TreeDiagram tree;
  std::vector<MultiPoly> eta;  // slot i-1 holds eta_i
  std::vector<MultiPoly> xi;   // xi_i(t) = -eta_i(-t)

  const MultiPoly& eta_of(int i) const { return eta.at(static_cast<std::size_t>(i - 1)); }
  const MultiPoly& xi_of(int i) const { return xi.at(static_cast<std::size_t>(i - 1)); }
};

EtaFamily eta_family(const TreeDiagram& tree);

/// u(t, x) = f(x + eta(t, x)).
class FirstOrderSolution {
 public:
  FirstOrderSolution(EtaFamily family, ExprPtr f);

  double operator()(double t, const std::vector<double>& x) const;
  /// x + eta(t, x).
  std::vector<double> shifted(double t, const std::vector<double>& x) const;
  const EtaFamily& family() const { return family_; }
  const ExprPtr& f() const { return f_; }

 private:
  EtaFamily family_;
  ExprPtr f_;
};

FirstOrderSolution solve_first_order(const TreeDiagram& tree, const ExprPtr& f);

/// f(x + eta) as a polynomial.
MultiPoly first_order_polynomial(const EtaFamily& family, const MultiPoly& f);

/// u_t - (d1 + sum x_p^{d} dj) u.
MultiPoly first_order_residual(const TreeDiagram& tree, const MultiPoly& u);

/// Fixed-step RK4 on the characteristic system from X(0) = x.
std::vector<double> rk4_flow(const TreeDiagram& tree, const std::vector<double>& x, double t,
                             int steps = kRk4Steps);

/// eta(t+s, x) - eta(t, x) - eta(s, x + eta(t, x)) for each node; all zero when the flow composes.
std::vector<MultiPoly> semigroup_defect(const EtaFamily& family);

/// Applies exp(xi_n dn) first, then outward to exp(xi_1 d1).
MultiPoly apply_xi_factorization(const EtaFamily& family, const MultiPoly& f);

enum class VerifyMode { Exact, Numeric };

struct FirstOrderReport {
  VerifyMode mode = VerifyMode::Exact;
  bool verified = false;
  MultiPoly residual;      // exact mode
  double max_error = 0.0;  // numeric mode
  int samples = 0;
};

/// Exact mode throws ValidationError unless f is polynomial.
FirstOrderReport verify_first_order(const TreeDiagram& tree, const ExprPtr& f, VerifyMode mode,
                                    unsigned seed = 1);

using ScalarFunction = std::function<double(double)>;

/// eta with x_p^{d} replaced by g_p(x_p), by nested adaptive Simpson quadrature.
/// Nodes without an entry in g use x^{d}. Throws ConvergenceError naming the nesting level.
class GeneralEta {
 public:
  GeneralEta(TreeDiagram tree, std::map<int, ScalarFunction> g, double tol = kQuadratureTolerance);

  double operator()(int node, double t, const std::vector<double>& x) const;

 private:
  double integrand(int node, double y, const std::vector<double>& x) const;
  double simpson(int node, const std::vector<double>& x, double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) const;

  TreeDiagram tree_;
  std::map<int, ScalarFunction> g_;
  double tol_;
};

}  // namespace treelie
