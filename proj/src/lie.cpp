#include "treelie/lie.hpp"

#include <algorithm>
#include <numeric>

#include "treelie/errors.hpp"
#include "treelie/poly.hpp"

namespace treelie {

Direction parse_direction(std::string_view text) {
  if (text == "up") return Direction::Up;
  if (text == "down") return Direction::Down;
  throw ValidationError("direction must be 'up' or 'down', got '" + std::string(text) + "'");
}

const char* direction_name(Direction d) { return d == Direction::Up ? "up" : "down"; }

int DiffOpMonomial::degree() const { return std::accumulate(exps.begin(), exps.end(), 0); }

std::string DiffOpMonomial::name() const {
  std::string out;
  for (std::size_t k = 0; k < exps.size(); ++k) {
    if (exps[k] == 0) continue;
    out += "x" + std::to_string(k + 1);
    if (exps[k] > 1) out += "^" + std::to_string(exps[k]);
    out += "*";
  }
  return out + "d" + std::to_string(dvar);
}

bool basis_less(const DiffOpMonomial& a, const DiffOpMonomial& b) {
  if (a.dvar != b.dvar) return a.dvar < b.dvar;
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  return a.exps > b.exps;
}

Root root_of(const DiffOpMonomial& m) {
  Root r(m.exps.begin(), m.exps.end());
  r[m.dvar - 1] -= 1;
  return r;
}

std::string root_to_string(const Root& r) {
  std::string out = "[";
  for (std::size_t k = 0; k < r.size(); ++k) out += (k ? "," : "") + std::to_string(r[k]);
  return out + "]";
}

LieElement LieElement::monomial(const DiffOpMonomial& m, Rational c) {
  LieElement e(static_cast<int>(m.exps.size()));
  e.add_term(m, c);
  return e;
}

void LieElement::add_term(const DiffOpMonomial& m, const Rational& c) {
  if (c.is_zero()) return;
  if (static_cast<int>(m.exps.size()) != n_) throw ValidationError("operator has wrong number of variables");
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

LieElement& LieElement::operator+=(const LieElement& o) {
  if (o.n_ != n_) throw ValidationError("mismatched variable counts");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

LieElement& LieElement::operator-=(const LieElement& o) {
  if (o.n_ != n_) throw ValidationError("mismatched variable counts");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

LieElement LieElement::scaled(const Rational& c) const {
  LieElement r(n_);
  for (const auto& [m, k] : terms_) r.add_term(m, k * c);
  return r;
}

std::string LieElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    bool neg = c.sign() < 0;
    Rational mag = neg ? -c : c;
    if (!out.empty()) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    if (!mag.is_one()) out += mag.to_string() + "*";
    out += m.name();
  }
  return out;
}

LieElement bracket(const DiffOpMonomial& a, const DiffOpMonomial& b) {
  if (a.exps.size() != b.exps.size()) throw ValidationError("mismatched variable counts in bracket");
  const int n = static_cast<int>(a.exps.size());
  LieElement r(n);
  const int i = a.dvar - 1, j = b.dvar - 1;
  if (b.exps[i] > 0) {
    DiffOpMonomial m{a.exps, b.dvar};
    for (int k = 0; k < n; ++k) m.exps[k] += b.exps[k];
    m.exps[i] -= 1;
    r.add_term(m, Rational(b.exps[i]));
  }
  if (a.exps[j] > 0) {
    DiffOpMonomial m{a.exps, a.dvar};
    for (int k = 0; k < n; ++k) m.exps[k] += b.exps[k];
    m.exps[j] -= 1;
    r.add_term(m, Rational(-a.exps[j]));
  }
  return r;
}

LieElement bracket(const LieElement& a, const LieElement& b) {
  if (a.n() != b.n()) throw ValidationError("mismatched variable counts in bracket");
  LieElement r(a.n());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) r += bracket(ma, mb).scaled(ca * cb);
  return r;
}

SimplexShape basis_shape(const TreeDiagram& tree, Direction dir, int node) {
  SimplexShape shape;
  if (dir == Direction::Up) {
    auto path = clan(tree, node);
    long long prefix = 1;
    for (std::size_t e = 0; e + 1 < path.size(); ++e) {
      if (e > 0) prefix *= tree.weight(path[e]);
      shape.positions.push_back(path[e]);
      shape.weights.push_back(prefix);
    }
    shape.bound = path.size() > 1 ? prefix * tree.weight(node) : 0;
  } else {
    auto w = weights(tree, node);
    for (const auto& [s, k] : w.kappa_map) {
      shape.positions.push_back(s);
      shape.weights.push_back(k);
    }
    shape.bound = shape.positions.empty() ? 0 : w.kappa;
  }
  return shape;
}

std::vector<std::vector<int>> simplex_points(int n, const SimplexShape& shape) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, std::size_t k, long long budget) -> void {
    if (k == shape.positions.size()) {
      out.push_back(cur);
      return;
    }
    int pos = shape.positions[k] - 1;
    for (int e = 0; e * shape.weights[k] <= budget; ++e) {
      cur[pos] = e;
      self(self, k + 1, budget - e * shape.weights[k]);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, shape.bound);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int da = std::accumulate(a.begin(), a.end(), 0), db = std::accumulate(b.begin(), b.end(), 0);
    return da != db ? da < db : a > b;
  });
  return out;
}

std::vector<DiffOpMonomial> enumerate_basis(const TreeDiagram& tree, Direction dir) {
  std::vector<DiffOpMonomial> basis;
  const int n = tree.size();
  for (int i = 1; i <= n; ++i)
    for (auto& e : simplex_points(n, basis_shape(tree, dir, i))) basis.push_back({std::move(e), i});
  return basis;
}

std::vector<DiffOpMonomial> generators(const TreeDiagram& tree, Direction dir) {
  const int n = tree.size();
  std::vector<DiffOpMonomial> gens;
  auto unit = [&](int dvar) { return DiffOpMonomial{std::vector<int>(n, 0), dvar}; };
  if (dir == Direction::Up) {
    gens.push_back(unit(1));
    for (int j = 2; j <= n; ++j) {
      auto g = unit(j);
      g.exps[tree.parent(j) - 1] = tree.weight(j);
      gens.push_back(g);
    }
  } else {
    for (int i = 1; i <= n; ++i)
      if (tree.is_tip(i)) gens.push_back(unit(i));
    for (int j = 2; j <= n; ++j) {
      auto g = unit(tree.parent(j));
      g.exps[j - 1] = tree.weight(j);
      gens.push_back(g);
    }
  }
  std::sort(gens.begin(), gens.end(), basis_less);
  return gens;
}

DimNilpotence dim_and_nilpotence(const TreeDiagram& tree, Direction dir) {
  DimNilpotence r;
  const int n = tree.size();
  if (dir == Direction::Up) {
    BigInt dim = 1;
    for (int i = 2; i <= n; ++i) {
      auto path = clan(tree, i);
      std::vector<unsigned> ws;
      for (std::size_t e = 1; e < path.size(); ++e) ws.push_back(static_cast<unsigned>(tree.weight(path[e])));
      dim += ell_coefficient(ws);
    }
    r.dim = dim.get_si();
    for (int i = 1; i <= n; ++i)
      if (tree.is_tip(i)) r.nilpotence = std::max(r.nilpotence, weights(tree, i).N);
  } else {
    BigInt dim = 0;
    for (int i = 1; i <= n; ++i) {
      if (tree.is_tip(i)) {
        dim += 1;
        continue;
      }
      auto w = weights(tree, i);
      std::vector<SeriesFactor> factors{{1, 1}};
      for (const auto& [s, k] : w.kappa_map) factors.push_back({static_cast<unsigned>(k), 1});
      dim += series_coeff(factors, static_cast<unsigned>(w.kappa));
    }
    r.dim = dim.get_si();
    r.nilpotence = 1;
    for (int j : descendants(tree, 1)) r.nilpotence += path_product(tree, 1, j);
  }
  return r;
}

long long graded_nilpotence(const TreeDiagram& tree, Direction dir) {
  long long best = 1;
  for (int j = 1; j <= tree.size(); ++j) {
    if (!tree.is_tip(j)) continue;
    auto path = clan(tree, j);
    long long len = 1;
    if (dir == Direction::Up) {
      long long prod = 1;
      for (std::size_t e = path.size() - 1; e >= 1; --e) {
        prod *= tree.weight(path[e]);
        len += prod;
      }
    } else {
      for (std::size_t e = 1; e < path.size(); ++e) len += path_product(tree, 1, path[e]);
    }
    best = std::max(best, len);
  }
  return best;
}

std::vector<std::pair<Root, DiffOpMonomial>> roots(const TreeDiagram& tree, Direction dir) {
  std::vector<std::pair<Root, DiffOpMonomial>> out;
  for (auto& m : enumerate_basis(tree, dir)) out.emplace_back(root_of(m), std::move(m));
  return out;
}

TreeAlgebra::TreeAlgebra(const TreeDiagram& tree, Direction dir)
    : tree_(tree), dir_(dir), basis_(enumerate_basis(tree, dir)) {
  for (int k = 0; k < dim(); ++k) {
    roots_.push_back(root_of(basis_[k]));
    index_.emplace(basis_[k], k);
    if (!root_index_.emplace(roots_[k], k).second)
      throw std::logic_error("repeated root " + root_to_string(roots_[k]));
  }
  for (const auto& g : treelie::generators(tree, dir)) generators_.push_back(index_of(g));
}

int TreeAlgebra::index_of(const DiffOpMonomial& m) const {
  auto it = index_.find(m);
  return it == index_.end() ? -1 : it->second;
}

int TreeAlgebra::index_of_root(const Root& r) const {
  auto it = root_index_.find(r);
  return it == root_index_.end() ? -1 : it->second;
}

bool TreeAlgebra::coordinates(const LieElement& e, SparseVec& out) const {
  out.clear();
  for (const auto& [m, c] : e.terms()) {
    int k = index_of(m);
    if (k < 0) return false;
    out[k] = c;
  }
  return true;
}

LieElement TreeAlgebra::element(const SparseVec& v) const {
  LieElement e(n());
  for (const auto& [k, c] : v) e.add_term(basis_[k], c);
  return e;
}

const LieElement& TreeAlgebra::bracket_basis(int a, int b) const {
  auto key = std::make_pair(a, b);
  auto it = bracket_cache_.find(key);
  if (it == bracket_cache_.end()) it = bracket_cache_.emplace(key, bracket(basis_[a], basis_[b])).first;
  return it->second;
}

namespace {

// Coordinates of [e_k, v] for v given in basis coordinates.
bool bracket_with(const TreeAlgebra& alg, int k, const SparseVec& v, SparseVec& out) {
  LieElement acc(alg.n());
  for (const auto& [m, c] : v) acc += alg.bracket_basis(k, m).scaled(c);
  return alg.coordinates(acc, out);
}

int generated_dimension(const TreeAlgebra& alg) {
  // Iterated left-normed brackets of generators span the generated subalgebra.
  std::map<DiffOpMonomial, int> ambient;
  auto coords = [&](const LieElement& e) {
    SparseVec v;
    for (const auto& [m, c] : e.terms()) {
      auto [it, fresh] = ambient.try_emplace(m, static_cast<int>(ambient.size()));
      v[it->second] = c;
    }
    return v;
  };
  RowSpace span;
  std::vector<LieElement> gens, frontier;
  for (int g : alg.generator_indices()) {
    gens.push_back(alg.basis_element(g));
    if (span.insert(coords(gens.back()))) frontier.push_back(gens.back());
  }
  while (!frontier.empty()) {
    std::vector<LieElement> next;
    for (const auto& g : gens)
      for (const auto& f : frontier) {
        LieElement b = bracket(g, f);
        if (!b.is_zero() && span.insert(coords(b))) next.push_back(std::move(b));
      }
    frontier = std::move(next);
  }
  return span.rank();
}

}  // namespace

StructureReport verify_structure(const TreeDiagram& tree, Direction dir) {
  return verify_structure(TreeAlgebra(tree, dir));
}

StructureReport verify_structure(const TreeAlgebra& alg) {
  StructureReport rep;
  const int d = alg.dim();
  SparseVec scratch;

  rep.closure = true;
  for (int a = 0; a < d && rep.closure; ++a)
    for (int b = a + 1; b < d; ++b)
      if (!alg.coordinates(alg.bracket_basis(a, b), scratch)) {
        rep.closure = false;
        break;
      }

  if (rep.closure) {
    std::vector<SparseVec> current;
    for (int k = 0; k < d; ++k) current.push_back({{k, Rational(1)}});
    while (!current.empty()) {
      rep.central_series_dims.push_back(static_cast<int>(current.size()));
      RowSpace next;
      for (int k = 0; k < d; ++k)
        for (const auto& v : current)
          if (bracket_with(alg, k, v, scratch) && !scratch.empty()) next.insert(scratch);
      current = next.rows();
    }

    // Kernel of x -> ([e_b, x])_b, one equation per (b, output coordinate).
    RowSpace equations;
    for (int b = 0; b < d; ++b) {
      std::map<int, SparseVec> rows;
      for (int k = 0; k < d; ++k) {
        alg.coordinates(alg.bracket_basis(b, k), scratch);
        for (const auto& [m, c] : scratch) rows[m][k] = c;
      }
      for (auto& [m, row] : rows) equations.insert(std::move(row));
    }
    RowSpace center;
    for (auto& v : equations.nullspace(d)) {
      rep.center_basis.push_back(alg.element(v));
      center.insert(std::move(v));
    }
    std::vector<int> expected;
    if (alg.direction() == Direction::Up) {
      for (int i = 1; i <= alg.n(); ++i)
        if (alg.tree().is_tip(i)) expected.push_back(i);
    } else {
      expected.push_back(1);
    }
    rep.center_matches = center.rank() == static_cast<int>(expected.size());
    for (int i : expected) {
      int k = alg.index_of({std::vector<int>(alg.n(), 0), i});
      rep.center_matches = rep.center_matches && k >= 0 && center.contains({{k, Rational(1)}});
    }
  }

  rep.generated_dim = generated_dimension(alg);
  return rep;
}

}  // namespace treelie
