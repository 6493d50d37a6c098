#pragma once

// Sparse multivariate polynomials over Q or Q(i).

#include <algorithm>
#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treelie/errors.hpp"
#include "treelie/rational.hpp"

namespace treelie {

// Declaration order fixes the variable precedence used by the term order.
enum class SymbolKind : std::uint8_t { X, Z, Kappa, T, S, Y };

struct Symbol {
  SymbolKind kind = SymbolKind::T;
  std::uint16_t index = 0;

  static Symbol x(int i) { return {SymbolKind::X, static_cast<std::uint16_t>(i)}; }
  /// Commuting stand-in for the derivative operator d/dx_i.
  static Symbol z(int i) { return {SymbolKind::Z, static_cast<std::uint16_t>(i)}; }
  static Symbol kappa(int i) { return {SymbolKind::Kappa, static_cast<std::uint16_t>(i)}; }
  static Symbol t() { return {SymbolKind::T, 0}; }
  static Symbol s() { return {SymbolKind::S, 0}; }
  /// Integration temporaries.
  static Symbol y(int i) { return {SymbolKind::Y, static_cast<std::uint16_t>(i)}; }

  std::string name() const;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

class Monomial {
 public:
  using Factor = std::pair<Symbol, unsigned>;

  Monomial() = default;
  explicit Monomial(Symbol v, unsigned e = 1);
  explicit Monomial(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  unsigned degree() const;
  unsigned exponent(Symbol v) const;
  Monomial without(Symbol v) const;
  Monomial with_exponent(Symbol v, unsigned e) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;

  std::string to_string() const;

 private:
  std::vector<Factor> factors_;  // sorted by symbol, no zero exponents
};

/// Graded lexicographic order, largest first: total degree decides, then the
/// exponent of the earliest symbol where the two differ.
struct GradedLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

namespace detail {
inline bool coeff_is_zero(const Rational& c) { return c.is_zero(); }
inline bool coeff_is_zero(const GaussianRational& c) { return c.is_zero(); }
inline bool coeff_is_one(const Rational& c) { return c.is_one(); }
inline bool coeff_is_one(const GaussianRational& c) { return c.is_one(); }
inline std::complex<double> coeff_to_complex(const Rational& c) { return {c.to_double(), 0.0}; }
inline std::complex<double> coeff_to_complex(const GaussianRational& c) { return c.to_complex(); }
std::string format_term(const std::string& coeff, bool negative, const Monomial& m, bool first);
inline bool coeff_is_negative(const Rational& c) { return c.sign() < 0; }
inline bool coeff_is_negative(const GaussianRational& c) { return c.im().is_zero() && c.re().sign() < 0; }
}  // namespace detail

template <class Coeff>
class BasicPoly {
 public:
  using coeff_type = Coeff;
  using TermMap = std::map<Monomial, Coeff, GradedLexGreater>;

  BasicPoly() = default;
  BasicPoly(Coeff c) { add_term(Monomial(), std::move(c)); }  // NOLINT(google-explicit-constructor)
  BasicPoly(long c) : BasicPoly(Coeff(c)) {}  // NOLINT(google-explicit-constructor)
  BasicPoly(int c) : BasicPoly(Coeff(c)) {}  // NOLINT(google-explicit-constructor)

  static BasicPoly var(Symbol v) {
    BasicPoly p;
    p.add_term(Monomial(v), Coeff(1));
    return p;
  }
  static BasicPoly term(Coeff c, Monomial m) {
    BasicPoly p;
    p.add_term(std::move(m), std::move(c));
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, const Coeff& c) {
    if (detail::coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (detail::coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  Coeff constant_term() const {
    auto it = terms_.find(Monomial());
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  std::vector<Symbol> variables() const {
    std::vector<Symbol> vars;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m.factors()) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
  }

  bool contains(Symbol v) const {
    for (const auto& [m, c] : terms_)
      if (m.exponent(v) > 0) return true;
    return false;
  }

  unsigned degree(Symbol v) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(v));
    return d;
  }

  unsigned total_degree() const {
    return terms_.empty() ? 0 : terms_.begin()->first.degree();
  }

  BasicPoly operator-() const {
    BasicPoly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, -c);
    return r;
  }
  BasicPoly& operator+=(const BasicPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  BasicPoly& operator-=(const BasicPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  BasicPoly& operator*=(const BasicPoly& o) { return *this = *this * o; }

  friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
  friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
  friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
    BasicPoly r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  friend bool operator==(const BasicPoly&, const BasicPoly&) = default;

  BasicPoly scaled(const Coeff& c) const {
    if (detail::coeff_is_zero(c)) return {};
    BasicPoly r;
    for (const auto& [m, k] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, k * c);
    return r;
  }

  BasicPoly pow(long k) const {
    if (k < 0) throw ValidationError("polynomial power with negative exponent");
    BasicPoly result(Coeff(1)), base = *this;
    auto e = static_cast<unsigned long>(k);
    while (e > 0) {
      if (e & 1ul) result *= base;
      e >>= 1ul;
      if (e > 0) base *= base;
    }
    return result;
  }

  BasicPoly derivative(Symbol v) const {
    BasicPoly r;
    for (const auto& [m, c] : terms_) {
      unsigned e = m.exponent(v);
      if (e == 0) continue;
      r.add_term(m.with_exponent(v, e - 1), c * Coeff(static_cast<long>(e)));
    }
    return r;
  }

  /// Coefficient of v^k, as a polynomial free of v.
  BasicPoly coefficient(Symbol v, unsigned k) const {
    BasicPoly r;
    for (const auto& [m, c] : terms_)
      if (m.exponent(v) == k) r.add_term(m.without(v), c);
    return r;
  }

  /// Simultaneous substitution of every listed symbol.
  BasicPoly substitute(const std::map<Symbol, BasicPoly>& subst) const {
    // powers[v][e] caches subst[v]^e
    std::map<Symbol, std::vector<BasicPoly>> powers;
    auto power_of = [&](Symbol v, unsigned e) -> const BasicPoly& {
      auto& cache = powers[v];
      if (cache.empty()) cache.emplace_back(Coeff(1));
      while (cache.size() <= e) cache.push_back(cache.back() * subst.at(v));
      return cache[e];
    };
    BasicPoly r;
    for (const auto& [m, c] : terms_) {
      std::vector<Monomial::Factor> kept;
      std::vector<std::pair<Symbol, unsigned>> replaced;
      for (const auto& f : m.factors()) {
        if (subst.count(f.first)) replaced.push_back(f);
        else kept.push_back(f);
      }
      if (replaced.empty()) {
        r.add_term(m, c);
        continue;
      }
      BasicPoly piece = BasicPoly::term(c, Monomial(std::move(kept)));
      for (const auto& [v, e] : replaced) piece = piece * power_of(v, e);
      r += piece;
    }
    return r;
  }

  BasicPoly substitute(Symbol v, const BasicPoly& value) const {
    return substitute(std::map<Symbol, BasicPoly>{{v, value}});
  }

  /// Integral of the polynomial in `v` from 0 to `upper`.
  BasicPoly integrate_from_zero(Symbol v, Symbol upper) const {
    if (v == upper && contains(v))
      throw ValidationError("integration variable and upper limit coincide: " + v.name());
    BasicPoly r;
    for (const auto& [m, c] : terms_) {
      unsigned e = m.exponent(v);
      Coeff scaled = c;
      scaled /= Coeff(static_cast<long>(e + 1));
      r += BasicPoly::term(scaled, m.without(v)) * BasicPoly::term(Coeff(1), Monomial(upper, e + 1));
    }
    return r;
  }

  std::complex<double> eval_complex(const std::map<Symbol, std::complex<double>>& at) const {
    std::map<Symbol, std::vector<std::complex<double>>> powers;
    auto power_of = [&](Symbol v, unsigned e) -> std::complex<double> {
      auto& cache = powers[v];
      if (cache.empty()) {
        auto it = at.find(v);
        if (it == at.end()) throw ValidationError("no value assigned to variable " + v.name());
        cache.push_back(1.0);
        cache.push_back(it->second);
      }
      while (cache.size() <= e) cache.push_back(cache.back() * cache[1]);
      return cache[e];
    };
    std::complex<double> sum = 0.0;
    for (const auto& [m, c] : terms_) {
      std::complex<double> term = detail::coeff_to_complex(c);
      for (const auto& [v, e] : m.factors()) term *= power_of(v, e);
      sum += term;
    }
    return sum;
  }

  template <class F>
  auto map_coeffs(F&& f) const -> BasicPoly<decltype(f(std::declval<const Coeff&>()))> {
    BasicPoly<decltype(f(std::declval<const Coeff&>()))> r;
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      bool negative = detail::coeff_is_negative(c);
      Coeff magnitude = negative ? -c : c;
      std::string coeff = detail::coeff_is_one(magnitude) ? std::string() : magnitude.to_string();
      out += detail::format_term(coeff, negative, m, first);
      first = false;
    }
    return out;
  }

 private:
  TermMap terms_;
};

using MultiPoly = BasicPoly<Rational>;
using GaussPoly = BasicPoly<GaussianRational>;

GaussPoly to_gaussian(const MultiPoly& p);
MultiPoly real_part(const GaussPoly& p);
MultiPoly imag_part(const GaussPoly& p);

/// Exact evaluation at rational values; every occurring variable must be assigned.
Rational eval_exact(const MultiPoly& p, const std::map<Symbol, Rational>& at);

/// One factor (1 - t^m)^mult of the denominator of a generating function.
struct SeriesFactor {
  unsigned m = 1;
  unsigned multiplicity = 1;
};

/// Coefficient of t^k in the product of 1/(1 - t^m)^mult over all factors,
/// by truncated power-series convolution.
BigInt series_coeff(const std::vector<SeriesFactor>& factors, unsigned k);

/// Dimension count for one node of the upward algebra: the coefficient of
/// t^{m_1...m_r m} in 1/((1-t)^2 (1-t^{m_1}) ... (1-t^{m_1...m_r})).
/// `weights` lists (m_1, ..., m_r, m); a single weight m_1 gives m_1 + 1.
BigInt ell_coefficient(const std::vector<unsigned>& weights);

}  // namespace treelie
