#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "treelie/rational.hpp"
#include "treelie/tree.hpp"

namespace oracle {

using treelie::Rational;

/// a_k from the double sum over m <= k+1 and compositions p_1 + ... + p_m = k+1-m
/// of (-1)^{m-1}/m / ((p_1+1)! ... (p_{m-1}+1)! p_m!).
inline Rational bch_double_sum(int k) {
  Rational total;
  for (int m = 1; m <= k + 1; ++m) {
    const int budget = k + 1 - m;
    Rational inner;
    std::vector<int> p(static_cast<std::size_t>(m), 0);
    std::function<void(int, int)> rec = [&](int slot, int left) {
      if (slot == m - 1) {
        p[static_cast<std::size_t>(slot)] = left;
        Rational den(1);
        for (int s = 0; s + 1 < m; ++s) den *= treelie::factorial(static_cast<unsigned>(p[static_cast<std::size_t>(s)] + 1));
        den *= treelie::factorial(static_cast<unsigned>(left));
        inner += Rational(1) / den;
        return;
      }
      for (int v = 0; v <= left; ++v) {
        p[static_cast<std::size_t>(slot)] = v;
        rec(slot + 1, left - v);
      }
    };
    rec(0, budget);
    Rational term = inner / Rational(m);
    total += (m % 2 == 1) ? term : -term;
  }
  return total;
}

/// Binomial coefficient; exact for the small arguments used here.
inline long long choose(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Abelian-ideal count for the E-tree example with one weight-2 edge.
inline long long e_tree_ideal_count(int n0, int n1, int n2) {
  long long inner = 1LL << n2;
  for (int i = 1; i <= n2; ++i)
    for (int r = 1; r <= i; ++r) inner += choose(i, r) * choose(n0, r) * (1LL << (n2 - i));
  return (1LL << (n0 + n1)) * inner;
}

/// Up dimension of A_n with d = (1,...,1,m).
inline long long chain_up_dim(int n, int m) { return choose(n + m - 1, m) + n * (n - 1) / 2; }

/// Down dimensions of E^{n0}_{n1,n2}: all weights 1, or weight m on the first edge.
inline long long e_tree_down_dim(int n0, int n1, int n2) {
  return n0 * (n1 + n2) + (n0 * n0 + n1 * n1 + n2 * n2 + n0 + n1 + n2) / 2;
}
inline long long e_tree_down_dim_heavy(int n0, int n1, int n2, int m) {
  return choose(n0 + n1 + n2 + m - 1, m) + (n0 - 1) * (n1 + n2) + (n0 * n0 + n1 * n1 + n2 * n2 - n0 + n1 + n2) / 2;
}

/// Central difference of order 6 for the first derivative.
inline double d1_central6(const std::function<double(double)>& f, double x, double h) {
  return (f(x + 3 * h) - 9 * f(x + 2 * h) + 45 * f(x + h) - 45 * f(x - h) + 9 * f(x - 2 * h) - f(x - 3 * h)) / (60 * h);
}

/// Central difference of order 6 for the second derivative.
inline double d2_central6(const std::function<double(double)>& f, double x, double h) {
  return (2 * f(x + 3 * h) - 27 * f(x + 2 * h) + 270 * f(x + h) - 490 * f(x) + 270 * f(x - h) - 27 * f(x - 2 * h) +
          2 * f(x - 3 * h)) / (180 * h * h);
}

/// Relative residual of u_t = u_{x1x1} + x1 u_{x2x2} by sixth-order differences.
/// Steps are scaled so that h times the local rate stays near 0.05.
inline double chain22_residual(const std::function<double(double, double, double)>& u, double t, double x1, double x2,
                               double rate_t, double rate_x) {
  const double ht = 0.05 / std::max(rate_t, 1.0), hx = 0.05 / std::max(rate_x, 1.0);
  double u_t = d1_central6([&](double s) { return u(s, x1, x2); }, t, ht);
  double u11 = d2_central6([&](double a) { return u(t, a, x2); }, x1, hx);
  double u22 = d2_central6([&](double b) { return u(t, x1, b); }, x2, hx);
  double scale = std::max({std::abs(u_t), std::abs(u11), std::abs(x1 * u22), 1.0});
  return std::abs(u_t - u11 - x1 * u22) / scale;
}

}  // namespace oracle
