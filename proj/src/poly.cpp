#include "treelie/poly.hpp"

namespace treelie {

std::string Symbol::name() const {
  switch (kind) {
    case SymbolKind::X: return "x" + std::to_string(index);
    case SymbolKind::Z: return "z" + std::to_string(index);
    case SymbolKind::Kappa: return "k" + std::to_string(index);
    case SymbolKind::T: return "t";
    case SymbolKind::S: return "s";
    case SymbolKind::Y: return "y" + std::to_string(index);
  }
  return "?";
}

Monomial::Monomial(Symbol v, unsigned e) {
  if (e > 0) factors_.emplace_back(v, e);
}

Monomial::Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::sort(factors_.begin(), factors_.end(),
            [](const Factor& a, const Factor& b) { return a.first < b.first; });
  std::vector<Factor> merged;
  for (const auto& f : factors_) {
    if (!merged.empty() && merged.back().first == f.first) merged.back().second += f.second;
    else merged.push_back(f);
  }
  std::erase_if(merged, [](const Factor& f) { return f.second == 0; });
  factors_ = std::move(merged);
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

unsigned Monomial::exponent(Symbol v) const {
  for (const auto& f : factors_)
    if (f.first == v) return f.second;
  return 0;
}

Monomial Monomial::without(Symbol v) const {
  Monomial m;
  for (const auto& f : factors_)
    if (f.first != v) m.factors_.push_back(f);
  return m;
}

Monomial Monomial::with_exponent(Symbol v, unsigned e) const {
  Monomial m = without(v);
  if (e > 0) {
    auto pos = std::lower_bound(m.factors_.begin(), m.factors_.end(), v,
                                [](const Factor& f, Symbol s) { return f.first < s; });
    m.factors_.insert(pos, {v, e});
  }
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  auto ia = a.factors_.begin(), ib = b.factors_.begin();
  while (ia != a.factors_.end() || ib != b.factors_.end()) {
    if (ib == b.factors_.end() || (ia != a.factors_.end() && ia->first < ib->first)) {
      r.factors_.push_back(*ia++);
    } else if (ia == a.factors_.end() || ib->first < ia->first) {
      r.factors_.push_back(*ib++);
    } else {
      r.factors_.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return r;
}

std::string Monomial::to_string() const {
  std::string out;
  for (const auto& [v, e] : factors_) {
    if (!out.empty()) out += '*';
    out += v.name();
    if (e != 1) out += '^' + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

bool GradedLexGreater::operator()(const Monomial& a, const Monomial& b) const {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  auto ia = a.factors().begin(), ib = b.factors().begin();
  while (ia != a.factors().end() && ib != b.factors().end()) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia;
    ++ib;
  }
  // Equal degree and one list exhausted means both are exhausted.
  return false;
}

namespace detail {

std::string format_term(const std::string& coeff, bool negative, const Monomial& m, bool first) {
  std::string out;
  if (first) out = negative ? "-" : "";
  else out = negative ? " - " : " + ";
  if (m.is_one()) return out + (coeff.empty() ? "1" : coeff);
  if (!coeff.empty()) out += coeff + "*";
  return out + m.to_string();
}

}  // namespace detail

GaussPoly to_gaussian(const MultiPoly& p) {
  return p.map_coeffs([](const Rational& c) { return GaussianRational(c); });
}

MultiPoly real_part(const GaussPoly& p) {
  return p.map_coeffs([](const GaussianRational& c) { return c.re(); });
}

MultiPoly imag_part(const GaussPoly& p) {
  return p.map_coeffs([](const GaussianRational& c) { return c.im(); });
}

Rational eval_exact(const MultiPoly& p, const std::map<Symbol, Rational>& at) {
  Rational sum;
  for (const auto& [m, c] : p.terms()) {
    Rational term = c;
    for (const auto& [v, e] : m.factors()) {
      auto it = at.find(v);
      if (it == at.end()) throw ValidationError("no value assigned to variable " + v.name());
      term *= it->second.pow(e);
    }
    sum += term;
  }
  return sum;
}

BigInt series_coeff(const std::vector<SeriesFactor>& factors, unsigned k) {
  std::vector<BigInt> series(k + 1, BigInt(0));
  series[0] = 1;
  for (const auto& f : factors) {
    if (f.m == 0) throw ValidationError("series factor with exponent 0");
    for (unsigned rep = 0; rep < f.multiplicity; ++rep)
      // multiply in place by 1/(1 - t^m)
      for (unsigned d = f.m; d <= k; ++d) series[d] += series[d - f.m];
  }
  return series[k];
}

BigInt ell_coefficient(const std::vector<unsigned>& weights) {
  if (weights.empty()) throw ValidationError("ell coefficient needs at least one weight");
  if (weights.size() == 1) return BigInt(weights[0] + 1);
  std::vector<SeriesFactor> factors{{1, 2}};
  unsigned prefix = 1;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    prefix *= weights[i];
    factors.push_back({prefix, 1});
  }
  return series_coeff(factors, prefix * weights.back());
}

}  // namespace treelie
