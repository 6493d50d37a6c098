#pragma once

// Spectral solution of u_t = (d1^{m_1} + sum x_i dj^{m_j}) u on a periodic box.

#include <complex>
#include <functional>
#include <vector>

#include "treelie/expr.hpp"
#include "treelie/poly.hpp"
#include "treelie/tree.hpp"

namespace treelie {

struct XiFamily {
  TreeDiagram tree;
  std::vector<int> orders;             // m_1..m_n
  std::vector<MultiPoly> xi_tilde;     // slot i-1; polynomials in t and z_s
  std::vector<MultiPoly> xi;           // x_{p(i)} * xi_tilde_i, xi_1 = xi_tilde_1

  const MultiPoly& xi_tilde_of(int i) const { return xi_tilde.at(static_cast<std::size_t>(i - 1)); }
  const MultiPoly& xi_of(int i) const { return xi.at(static_cast<std::size_t>(i - 1)); }
};

XiFamily xi_family(const TreeDiagram& tree, const std::vector<int>& orders);

/// E(t, x, kappa) = sum xi_i with z_r -> i*kappa_r, kappa_r left symbolic.
GaussPoly mode_exponent_symbolic(const XiFamily& xi);

/// Exponent at fixed t and wave numbers: A(x) = a0 + sum a[j] x_j, B(x) = b0 + sum b[j] x_j.
struct ModeExponent {
  double a0 = 0.0, b0 = 0.0;
  std::vector<double> a, b;  // length n, indexed by x_j - 1

  double A(const std::vector<double>& x) const;
  double B(const std::vector<double>& x) const;
};

/// kappa_r = 2 pi k_r / a_r.
std::vector<double> wave_numbers(const std::vector<int>& k, const std::vector<double>& box);

ModeExponent mode_exponent(const XiFamily& xi, const std::vector<int>& k, const std::vector<double>& box, double t);

struct ModeCheck {
  bool ok = false;
  GaussPoly residual;
};

/// dE/dt - (c_1 + i kappa_1)^{m_1} - sum_{edges (i,j)} x_i (c_j + i kappa_j)^{m_j}, c_j the x_j coefficient of E.
ModeCheck verify_modes(const TreeDiagram& tree, const std::vector<int>& orders);

struct FourierMode {
  std::vector<int> k;  // first nonzero entry positive
  double b = 0.0, c = 0.0;
  double weight = 1.0;  // 2^{1-n} for k != 0, 2^{-n} for k = 0
};

/// Coefficients smaller than this fraction of the largest one are set to zero.
/// Modes with k_j != 0 off the root can grow like exp(t^3 kappa^4), so sampling
/// noise left in them would swamp the solution.
inline constexpr double kCoefficientFloor = 1e-13;

/// Real Fourier coefficients of f on the box [-a_r, a_r] for the a_r-periodic basis
/// cos/sin(2 pi k.x/a), k over a half lattice with |k|_inf <= K. N samples per axis, N a power of two > 4K.
std::vector<FourierMode> fourier_coefficients(const std::function<double(const std::vector<double>&)>& f,
                                              const std::vector<double>& box, int K, int N);

class HeatSolution {
 public:
  HeatSolution(XiFamily xi, std::vector<double> box, std::vector<FourierMode> modes);

  double operator()(double t, const std::vector<double>& x) const;
  /// e^{A} cos(kappa.x + B) and e^{A} sin(kappa.x + B).
  std::pair<double, double> mode_values(const FourierMode& m, double t, const std::vector<double>& x) const;

  const XiFamily& xi() const { return xi_; }
  const std::vector<double>& box() const { return box_; }
  const std::vector<FourierMode>& modes() const { return modes_; }

 private:
  XiFamily xi_;
  std::vector<double> box_;
  std::vector<FourierMode> modes_;
  std::vector<GaussPoly> parts_;  // E = parts_[0] + sum parts_[j] x_j
};

HeatSolution solve_heat(const TreeDiagram& tree, const std::vector<int>& orders, const ExprPtr& f,
                        const std::vector<double>& box, int K, int N);

}  // namespace treelie
