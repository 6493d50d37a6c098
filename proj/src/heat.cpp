#include "treelie/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "treelie/errors.hpp"

namespace treelie {

namespace {

void check_orders(const TreeDiagram& tree, const std::vector<int>& orders) {
  if (static_cast<int>(orders.size()) != tree.size())
    throw ValidationError("expected " + std::to_string(tree.size()) + " orders, got " + std::to_string(orders.size()));
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] < 1) throw ValidationError("order must be at least 1 (node " + std::to_string(i + 1) + ")");
}

GaussPoly imaginary_unit() { return GaussPoly(GaussianRational::i()); }

/// E = e0 + sum e_j x_j.
std::vector<GaussPoly> split_affine(const GaussPoly& E, int n) {
  std::map<Symbol, GaussPoly> zero;
  for (int j = 1; j <= n; ++j) zero[Symbol::x(j)] = GaussPoly();
  std::vector<GaussPoly> parts{E.substitute(zero)};
  for (int j = 1; j <= n; ++j) parts.push_back(E.coefficient(Symbol::x(j), 1).substitute(zero));
  return parts;
}

ModeExponent evaluate_parts(const std::vector<GaussPoly>& parts, const std::vector<double>& kappa, double t) {
  std::map<Symbol, std::complex<double>> at{{Symbol::t(), t}};
  for (std::size_t r = 0; r < kappa.size(); ++r) at[Symbol::kappa(static_cast<int>(r + 1))] = kappa[r];
  ModeExponent m;
  auto c0 = parts[0].eval_complex(at);
  m.a0 = c0.real();
  m.b0 = c0.imag();
  for (std::size_t j = 1; j < parts.size(); ++j) {
    auto c = parts[j].eval_complex(at);
    m.a.push_back(c.real());
    m.b.push_back(c.imag());
  }
  return m;
}

}  // namespace

XiFamily xi_family(const TreeDiagram& tree, const std::vector<int>& orders) {
  check_orders(tree, orders);
  const int n = tree.size();
  XiFamily fam{tree, orders, std::vector<MultiPoly>(static_cast<std::size_t>(n)), {}};
  const Symbol y = Symbol::y(1);
  for (int i = n; i >= 1; --i) {
    MultiPoly base = MultiPoly::var(Symbol::z(i));
    for (int s : tree.children(i)) base += fam.xi_tilde_of(s).substitute(Symbol::t(), MultiPoly::var(y));
    fam.xi_tilde[static_cast<std::size_t>(i - 1)] =
        base.pow(orders[static_cast<std::size_t>(i - 1)]).integrate_from_zero(y, Symbol::t());
  }
  for (int i = 1; i <= n; ++i) {
    const MultiPoly& xt = fam.xi_tilde_of(i);
    fam.xi.push_back(i == 1 ? xt : MultiPoly::var(Symbol::x(tree.parent(i))) * xt);
  }
  return fam;
}

GaussPoly mode_exponent_symbolic(const XiFamily& xi) {
  std::map<Symbol, GaussPoly> subst;
  for (int r = 1; r <= xi.tree.size(); ++r) subst[Symbol::z(r)] = imaginary_unit() * GaussPoly::var(Symbol::kappa(r));
  GaussPoly E;
  for (const auto& p : xi.xi) E += to_gaussian(p).substitute(subst);
  return E;
}

double ModeExponent::A(const std::vector<double>& x) const {
  double v = a0;
  for (std::size_t j = 0; j < a.size(); ++j) v += a[j] * x[j];
  return v;
}

double ModeExponent::B(const std::vector<double>& x) const {
  double v = b0;
  for (std::size_t j = 0; j < b.size(); ++j) v += b[j] * x[j];
  return v;
}

std::vector<double> wave_numbers(const std::vector<int>& k, const std::vector<double>& box) {
  if (k.size() != box.size()) throw ValidationError("wave vector and box dimensions differ");
  std::vector<double> kappa;
  for (std::size_t r = 0; r < k.size(); ++r) {
    if (!(box[r] > 0)) throw ValidationError("box half-widths must be positive");
    kappa.push_back(2 * std::numbers::pi * k[r] / box[r]);
  }
  return kappa;
}

ModeExponent mode_exponent(const XiFamily& xi, const std::vector<int>& k, const std::vector<double>& box, double t) {
  if (static_cast<int>(k.size()) != xi.tree.size()) throw ValidationError("wave vector dimension does not match the tree");
  return evaluate_parts(split_affine(mode_exponent_symbolic(xi), xi.tree.size()), wave_numbers(k, box), t);
}

ModeCheck verify_modes(const TreeDiagram& tree, const std::vector<int>& orders) {
  XiFamily xi = xi_family(tree, orders);
  const int n = tree.size();
  GaussPoly E = mode_exponent_symbolic(xi);
  auto shifted = [&](int j) {
    return E.coefficient(Symbol::x(j), 1) + imaginary_unit() * GaussPoly::var(Symbol::kappa(j));
  };
  GaussPoly rhs = shifted(1).pow(orders[0]);
  for (int j = 2; j <= n; ++j)
    rhs += GaussPoly::var(Symbol::x(tree.parent(j))) * shifted(j).pow(orders[static_cast<std::size_t>(j - 1)]);
  ModeCheck mc;
  mc.residual = E.derivative(Symbol::t()) - rhs;
  mc.ok = mc.residual.is_zero();
  return mc;
}

std::vector<FourierMode> fourier_coefficients(const std::function<double(const std::vector<double>&)>& f,
                                              const std::vector<double>& box, int K, int N) {
  const int n = static_cast<int>(box.size());
  if (n < 1) throw ValidationError("box must have at least one axis");
  for (double a : box)
    if (!(a > 0) || !std::isfinite(a)) throw ValidationError("box half-widths must be positive");
  if (K < 0) throw ValidationError("mode cutoff must be nonnegative");
  if (N < 1 || (N & (N - 1)) != 0) throw ValidationError("sample count must be a power of two");
  if (N <= 4 * K) throw ValidationError("sample count must exceed 4K");
  double total = std::pow(static_cast<double>(N), n);
  if (total > static_cast<double>(1 << 24)) throw GuardError("sample grid too large: N^n exceeds 2^24");

  using cd = std::complex<double>;
  const int F = 2 * K + 1;
  // data laid out row-major; axes before `axis` already hold frequencies
  std::vector<int> shape(static_cast<std::size_t>(n), N);
  std::vector<cd> data(static_cast<std::size_t>(total));
  {
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::size_t lin = 0; lin < data.size(); ++lin) {
      for (int r = 0; r < n; ++r)
        x[static_cast<std::size_t>(r)] = -box[static_cast<std::size_t>(r)] + 2 * box[static_cast<std::size_t>(r)] * idx[static_cast<std::size_t>(r)] / N;
      double v = f(x);
      if (!std::isfinite(v)) throw ValidationError("f is not finite on the sample grid");
      data[lin] = v;
      for (int r = n - 1; r >= 0; --r) {
        if (++idx[static_cast<std::size_t>(r)] < N) break;
        idx[static_cast<std::size_t>(r)] = 0;
      }
    }
  }
  for (int axis = 0; axis < n; ++axis) {
    std::size_t outer = 1, inner = 1;
    for (int r = 0; r < axis; ++r) outer *= static_cast<std::size_t>(shape[static_cast<std::size_t>(r)]);
    for (int r = axis + 1; r < n; ++r) inner *= static_cast<std::size_t>(shape[static_cast<std::size_t>(r)]);
    std::vector<cd> phase(static_cast<std::size_t>(F * N));
    for (int k = -K; k <= K; ++k)
      for (int j = 0; j < N; ++j) {
        // x_j = -a + 2a j/N, so exp(-2 pi i k x_j / a) = exp(-4 pi i k j / N)
        double ang = -4 * std::numbers::pi * k * j / N;
        phase[static_cast<std::size_t>((k + K) * N + j)] = cd(std::cos(ang), std::sin(ang)) / static_cast<double>(N);
      }
    std::vector<cd> next(outer * static_cast<std::size_t>(F) * inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (int k = 0; k < F; ++k)
        for (int j = 0; j < N; ++j) {
          const cd w = phase[static_cast<std::size_t>(k * N + j)];
          const cd* src = &data[(o * static_cast<std::size_t>(N) + static_cast<std::size_t>(j)) * inner];
          cd* dst = &next[(o * static_cast<std::size_t>(F) + static_cast<std::size_t>(k)) * inner];
          for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
        }
    data.swap(next);
    shape[static_cast<std::size_t>(axis)] = F;
  }

  std::vector<FourierMode> modes;
  std::vector<int> k(static_cast<std::size_t>(n), -K);
  for (std::size_t lin = 0; lin < data.size(); ++lin) {
    int first = 0;
    for (int v : k)
      if (v != 0) {
        first = v;
        break;
      }
    if (first >= 0) {
      FourierMode m;
      m.k = k;
      if (first == 0) {
        m.b = data[lin].real();
        m.weight = std::ldexp(1.0, -n);
      } else {
        m.b = 2 * data[lin].real();
        m.c = -2 * data[lin].imag();
        m.weight = std::ldexp(1.0, 1 - n);
      }
      modes.push_back(std::move(m));
    }
    for (int r = n - 1; r >= 0; --r) {
      if (++k[static_cast<std::size_t>(r)] <= K) break;
      k[static_cast<std::size_t>(r)] = -K;
    }
  }
  double largest = 0.0;
  for (const auto& m : modes) largest = std::max({largest, std::abs(m.b), std::abs(m.c)});
  const double floor = kCoefficientFloor * largest;
  for (auto& m : modes) {
    if (std::abs(m.b) <= floor) m.b = 0.0;
    if (std::abs(m.c) <= floor) m.c = 0.0;
  }
  return modes;
}

HeatSolution::HeatSolution(XiFamily xi, std::vector<double> box, std::vector<FourierMode> modes)
    : xi_(std::move(xi)), box_(std::move(box)), modes_(std::move(modes)) {
  if (static_cast<int>(box_.size()) != xi_.tree.size()) throw ValidationError("box dimension does not match the tree");
  parts_ = split_affine(mode_exponent_symbolic(xi_), xi_.tree.size());
}

std::pair<double, double> HeatSolution::mode_values(const FourierMode& m, double t, const std::vector<double>& x) const {
  const auto kappa = wave_numbers(m.k, box_);
  const ModeExponent e = evaluate_parts(parts_, kappa, t);
  double phase = e.B(x);
  for (std::size_t r = 0; r < kappa.size(); ++r) phase += kappa[r] * x[r];
  const double amp = std::exp(e.A(x));
  return {amp * std::cos(phase), amp * std::sin(phase)};
}

double HeatSolution::operator()(double t, const std::vector<double>& x) const {
  if (x.size() != box_.size())
    throw ValidationError("expected " + std::to_string(box_.size()) + " coordinates, got " + std::to_string(x.size()));
  double u = 0.0;
  for (const auto& m : modes_) {
    if (m.b == 0.0 && m.c == 0.0) continue;
    auto [phi, psi] = mode_values(m, t, x);
    u += m.b * phi + m.c * psi;
  }
  return u;
}

HeatSolution solve_heat(const TreeDiagram& tree, const std::vector<int>& orders, const ExprPtr& f,
                        const std::vector<double>& box, int K, int N) {
  check_orders(tree, orders);
  if (static_cast<int>(box.size()) != tree.size()) throw ValidationError("box dimension does not match the tree");
  auto modes = fourier_coefficients([&](const std::vector<double>& x) { return eval(f, x); }, box, K, N);
  return HeatSolution(xi_family(tree, orders), box, std::move(modes));
}

}  // namespace treelie
