#include "treelie/ideals.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>

#include "treelie/errors.hpp"

namespace treelie {

namespace {

using Mask = std::uint64_t;

std::vector<int> ancestors_or_self_in(const TreeDiagram& tree, int r, const std::vector<int>& among) {
  std::vector<int> out;
  for (int v = r; v != 0; v = tree.parent(v))
    if (std::find(among.begin(), among.end(), v) != among.end()) out.push_back(v);
  return out;
}

bool is_ancestor_or_self(const TreeDiagram& tree, int a, int r) {
  for (int v = r; v != 0; v = tree.parent(v))
    if (v == a) return true;
  return false;
}

Root root_from(const std::vector<int>& exps, int dvar) { return root_of(DiffOpMonomial{exps, dvar}); }

std::vector<Root> sorted_roots(std::set<Root> s) { return {s.begin(), s.end()}; }

Mask downset_mask(const RootPoset& P, int j) {
  Mask m = 0;
  for (int l = 0; l < P.size(); ++l)
    if (P.leq[l][j]) m |= Mask{1} << l;
  return m;
}

// Antichains of the poset restricted to `allowed`, as element-index lists.
std::vector<std::vector<int>> antichains(const RootPoset& P, Mask allowed) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int k) {
    if (k == P.size()) {
      out.push_back(cur);
      return;
    }
    rec(k + 1);
    if (!(allowed >> k & 1)) return;
    for (int c : cur)
      if (P.leq[c][k] || P.leq[k][c]) return;
    cur.push_back(k);
    rec(k + 1);
    cur.pop_back();
  };
  rec(0);
  return out;
}

void check_poset_size(const RootPoset& P) {
  if (P.size() > 64) throw GuardError("root poset at node " + std::to_string(P.node) + " has more than 64 elements");
}

// Roots of I[r, j] for an up-direction anchor poset P (r equal to or below P.node).
void add_up_principal(const TreeDiagram& tree, const RootPoset& P, int r, int j, std::set<Root>& out) {
  const int n = tree.size();
  std::vector<int> targets{r};
  for (int t : descendants(tree, r)) targets.push_back(t);
  for (int l = 0; l < P.size(); ++l) {
    if (!P.leq[l][j]) continue;
    auto exps = P.exponents(n, P.elements[l]);
    for (int t : targets) out.insert(root_from(exps, t));
  }
}

// One anchor's antichain choices over its subtree.
using Assignment = std::map<int, std::vector<int>>;

std::vector<Assignment> anchor_assignments(const TreeDiagram& tree, const RootPoset& P) {
  const int i = P.node;
  std::vector<int> nodes{i};
  for (int s : descendants(tree, i)) nodes.push_back(s);
  const Mask all = P.size() == 64 ? ~Mask{0} : (Mask{1} << P.size()) - 1;
  std::vector<Assignment> out;
  Assignment cur;
  std::map<int, Mask> below;  // node -> downset of its chosen antichain
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == nodes.size()) {
      out.push_back(cur);
      return;
    }
    int r = nodes[k];
    Mask forbidden = 0;
    for (int v = tree.parent(r); v != 0 && r != i; v = tree.parent(v)) {
      forbidden |= below[v];
      if (v == i) break;
    }
    for (auto& A : antichains(P, all & ~forbidden)) {
      if (r == i && A.empty()) continue;
      Mask m = 0;
      for (int j : A) m |= downset_mask(P, j);
      below[r] = m;
      if (!A.empty()) cur[r] = A;
      rec(k + 1);
      cur.erase(r);
    }
    below.erase(r);
  };
  rec(0);
  return out;
}

BigInt anchor_count(const TreeDiagram& tree, const RootPoset& P) {
  const Mask all = P.size() == 64 ? ~Mask{0} : (Mask{1} << P.size()) - 1;
  std::map<std::pair<int, Mask>, BigInt> memo;
  std::function<BigInt(int, Mask, bool)> f = [&](int r, Mask forbidden, bool anchor) -> BigInt {
    auto key = std::make_pair(anchor ? -r : r, forbidden);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    BigInt total = 0;
    for (auto& A : antichains(P, all & ~forbidden)) {
      if (anchor && A.empty()) continue;
      Mask m = forbidden;
      for (int j : A) m |= downset_mask(P, j);
      BigInt prod = 1;
      for (int c : tree.children(r)) prod *= f(c, m, false);
      total += prod;
    }
    memo.emplace(key, total);
    return total;
  };
  return f(P.node, 0, true);
}

std::vector<std::vector<int>> independent_subsets(const TreeDiagram& tree, const std::vector<int>& nodes) {
  if (nodes.size() > 24) throw GuardError("too many candidate anchor nodes");
  std::vector<std::vector<int>> out;
  for (Mask m = 1; m < (Mask{1} << nodes.size()); ++m) {
    std::vector<int> S;
    for (std::size_t k = 0; k < nodes.size(); ++k)
      if (m >> k & 1) S.push_back(nodes[k]);
    bool ok = true;
    for (std::size_t a = 0; a < S.size() && ok; ++a)
      for (std::size_t b = a + 1; b < S.size() && ok; ++b) ok = independent(tree, S[a], S[b]);
    if (ok) out.push_back(std::move(S));
  }
  return out;
}

// Elements in an order where everything reachable from an element precedes it.
std::vector<int> bottom_up_order(const std::vector<std::vector<char>>& reach) {
  const int m = static_cast<int>(reach.size());
  std::vector<int> count(m, 0), order(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) count[a] += reach[a][b];
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b && reach[a][b] && reach[b][a]) throw std::logic_error("reachability has a cycle");
  for (int a = 0; a < m; ++a) order[a] = a;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return count[a] < count[b]; });
  return order;
}

// Enumerates downsets of `reach`; with `commute` set, only pairwise commuting ones.
void for_each_downset(const std::vector<std::vector<char>>& reach, const std::vector<std::vector<char>>* commute,
                      const std::function<void(const std::vector<int>&)>& visit) {
  const int m = static_cast<int>(reach.size());
  auto order = bottom_up_order(reach);
  std::vector<char> in(m, 0);
  std::vector<int> chosen;
  std::function<void(int)> rec = [&](int k) {
    if (k == m) {
      visit(chosen);
      return;
    }
    int e = order[k];
    rec(k + 1);
    for (int b = 0; b < m; ++b)
      if (b != e && reach[e][b] && !in[b]) return;
    if (commute)
      for (int c : chosen)
        if (!(*commute)[e][c]) return;
    in[e] = 1;
    chosen.push_back(e);
    rec(k + 1);
    chosen.pop_back();
    in[e] = 0;
  };
  rec(0);
}

std::vector<Root> roots_of_indices(const TreeAlgebra& alg, const std::vector<int>& idx) {
  std::vector<Root> out;
  for (int k : idx) out.push_back(alg.roots()[k]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<char>> commute_table(const TreeAlgebra& alg) {
  const int d = alg.dim();
  std::vector<std::vector<char>> c(d, std::vector<char>(d, 1));
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) c[a][b] = c[b][a] = alg.bracket_basis(a, b).is_zero();
  return c;
}

std::vector<int> all_indices(const TreeAlgebra& alg) {
  std::vector<int> v(alg.dim());
  for (int k = 0; k < alg.dim(); ++k) v[k] = k;
  return v;
}

}  // namespace

int RootPoset::index_of(const Tuple& t) const {
  auto it = std::find(elements.begin(), elements.end(), t);
  return it == elements.end() ? -1 : static_cast<int>(it - elements.begin());
}

std::vector<int> RootPoset::exponents(int n, const Tuple& t) const {
  std::vector<int> exps(n, 0);
  for (std::size_t k = 0; k < positions.size(); ++k) exps[positions[k] - 1] = t[k];
  return exps;
}

RootPoset root_poset(const TreeDiagram& tree, int node, Direction dir) {
  RootPoset P;
  P.node = node;
  P.direction = dir;
  auto shape = basis_shape(tree, dir, node);
  P.positions = shape.positions;
  for (const auto& exps : simplex_points(tree.size(), shape)) {
    Tuple t;
    for (int p : P.positions) t.push_back(exps[p - 1]);
    P.elements.push_back(std::move(t));
  }
  // Potentials: one cumulative weighted sum per checkpoint node; the order is
  // componentwise comparison of these sums.
  const auto& pos = P.positions;
  auto potentials = [&](const Tuple& t) {
    std::vector<long long> out;
    if (dir == Direction::Up) {
      for (std::size_t s = 0; s < pos.size(); ++s) {
        long long c = 0;
        for (std::size_t e = s; e < pos.size(); ++e) c += t[e] * path_product(tree, pos[s], pos[e]);
        out.push_back(c);
      }
    } else {
      for (int m : pos) {
        long long c = 0;
        for (std::size_t k = 0; k < pos.size(); ++k)
          if (is_ancestor_or_self(tree, pos[k], m)) c += t[k] * path_product(tree, pos[k], m);
        out.push_back(c);
      }
    }
    return out;
  };
  std::vector<std::vector<long long>> pot;
  for (const auto& t : P.elements) pot.push_back(potentials(t));
  const int m = P.size();
  P.leq.assign(m, std::vector<char>(m, 0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      bool le = true;
      for (std::size_t k = 0; k < pot[a].size() && le; ++k) le = pot[a][k] <= pot[b][k];
      P.leq[a][b] = le;
    }
  return P;
}

bool ideal_less(const std::vector<Root>& a, const std::vector<Root>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

AbelianIdeal principal_ideal(const TreeDiagram& tree, int node, const Tuple& j, Direction dir) {
  auto nc = classify_nodes(tree);
  const auto& allowed = dir == Direction::Up ? nc.upsilon : nc.phi;
  if (std::find(allowed.begin(), allowed.end(), node) == allowed.end())
    throw ValidationError(std::string("anchor node ") + std::to_string(node) + " is not in " +
                          (dir == Direction::Up ? "the multiplicity-free set" : "the unit-path set"));
  auto P = root_poset(tree, node, dir);
  int jdx = P.index_of(j);
  if (jdx < 0) throw ValidationError("tuple is not in the root poset of node " + std::to_string(node));
  std::set<Root> roots;
  if (dir == Direction::Up) {
    add_up_principal(tree, P, node, jdx, roots);
  } else {
    for (int l = 0; l < P.size(); ++l) {
      if (!P.leq[l][jdx]) continue;
      auto exps = P.exponents(tree.size(), P.elements[l]);
      for (int r : clan(tree, node)) roots.insert(root_from(exps, r));
    }
  }
  return {sorted_roots(std::move(roots)), std::nullopt};
}

std::vector<std::vector<int>> maximal_independent_subsets(const TreeDiagram& tree, const std::vector<int>& nodes) {
  std::vector<std::vector<int>> out;
  for (auto& S : independent_subsets(tree, nodes)) {
    bool maximal = true;
    for (int v : nodes) {
      if (std::find(S.begin(), S.end(), v) != S.end()) continue;
      bool fits = std::all_of(S.begin(), S.end(), [&](int s) { return independent(tree, s, v); });
      if (fits) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(std::move(S));
  }
  return out;
}

std::vector<AbelianIdeal> maximal_ideals(const TreeDiagram& tree, Direction dir) {
  auto nc = classify_nodes(tree);
  const int n = tree.size();
  std::vector<AbelianIdeal> out;
  for (const auto& S : maximal_independent_subsets(tree, dir == Direction::Up ? nc.upsilon : nc.phi)) {
    std::set<Root> roots;
    for (int i : S) {
      auto P = root_poset(tree, i, dir);
      std::vector<int> targets = dir == Direction::Up ? std::vector<int>{i} : clan(tree, i);
      if (dir == Direction::Up)
        for (int s : descendants(tree, i)) targets.push_back(s);
      for (const auto& t : P.elements) {
        auto exps = P.exponents(n, t);
        for (int s : targets) roots.insert(root_from(exps, s));
      }
    }
    out.push_back({sorted_roots(std::move(roots)), std::nullopt});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return ideal_less(a.roots, b.roots); });
  return out;
}

std::vector<AbelianIdeal> exact_maximal_ideals(const TreeDiagram& tree, Direction dir) {
  auto all = enumerate_ideals(tree, dir);
  std::vector<AbelianIdeal> out;
  for (const auto& I : all) {
    bool maximal = true;
    for (const auto& J : all)
      if (J.roots.size() > I.roots.size() &&
          std::includes(J.roots.begin(), J.roots.end(), I.roots.begin(), I.roots.end())) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back({I.roots, std::nullopt});
  }
  return out;
}

std::vector<std::vector<char>> reachability(const TreeAlgebra& alg, const std::vector<int>& ops) {
  const int d = alg.dim();
  std::vector<std::vector<char>> reach(d, std::vector<char>(d, 0));
  for (int a = 0; a < d; ++a) {
    reach[a][a] = 1;
    for (int g : ops)
      for (const auto& [m, c] : alg.bracket_basis(g, a).terms()) {
        int b = alg.index_of(m);
        if (b < 0) throw std::logic_error("bracket leaves the basis span: " + m.name());
        reach[a][b] = 1;
      }
  }
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a)
      if (reach[a][k])
        for (int b = 0; b < d; ++b)
          if (reach[k][b]) reach[a][b] = 1;
  return reach;
}

std::vector<AbelianIdeal> enumerate_ideals(const TreeDiagram& tree, Direction dir) {
  TreeAlgebra alg(tree, dir);
  if (alg.dim() > kListMaxRoots)
    throw GuardError("root set has " + std::to_string(alg.dim()) + " elements, above the list limit of " +
                     std::to_string(kListMaxRoots) + "; use count mode or disable the oracle");
  std::vector<AbelianIdeal> out{{{}, std::nullopt}};
  if (dir == Direction::Up) {
    auto nc = classify_nodes(tree);
    std::map<int, RootPoset> posets;
    std::map<int, std::vector<Assignment>> choices;
    for (int i : nc.upsilon) {
      posets.emplace(i, root_poset(tree, i, dir));
      check_poset_size(posets.at(i));
      choices.emplace(i, anchor_assignments(tree, posets.at(i)));
    }
    for (const auto& S : independent_subsets(tree, nc.upsilon)) {
      std::vector<std::size_t> pick(S.size(), 0);
      while (true) {
        AdmissiblePair pair{S, {}};
        std::set<Root> roots;
        for (std::size_t k = 0; k < S.size(); ++k) {
          const auto& P = posets.at(S[k]);
          for (const auto& [r, A] : choices.at(S[k])[pick[k]]) {
            for (int j : A) {
              pair.K[r].push_back(P.elements[j]);
              add_up_principal(tree, P, r, j, roots);
            }
          }
        }
        out.push_back({sorted_roots(std::move(roots)), std::move(pair)});
        std::size_t k = 0;
        while (k < S.size() && ++pick[k] == choices.at(S[k]).size()) pick[k++] = 0;
        if (k == S.size()) break;
      }
    }
  } else {
    auto reach = reachability(alg, all_indices(alg));
    auto commute = commute_table(alg);
    out.clear();
    for_each_downset(reach, &commute,
                     [&](const std::vector<int>& idx) { out.push_back({roots_of_indices(alg, idx), std::nullopt}); });
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return ideal_less(a.roots, b.roots); });
  return out;
}

BigInt count_ideals(const TreeDiagram& tree, Direction dir) {
  if (dir == Direction::Up) {
    auto nc = classify_nodes(tree);
    std::map<int, BigInt> per_anchor;
    for (int i : nc.upsilon) {
      auto P = root_poset(tree, i, dir);
      check_poset_size(P);
      per_anchor[i] = anchor_count(tree, P);
    }
    BigInt total = 1;
    for (const auto& S : independent_subsets(tree, nc.upsilon)) {
      BigInt prod = 1;
      for (int i : S) prod *= per_anchor[i];
      total += prod;
    }
    return total;
  }
  TreeAlgebra alg(tree, dir);
  auto reach = reachability(alg, all_indices(alg));
  auto commute = commute_table(alg);
  BigInt total = 0;
  for_each_downset(reach, &commute, [&](const std::vector<int>&) { total += 1; });
  return total;
}

std::vector<std::vector<Root>> brute_force_ideals(const TreeDiagram& tree, Direction dir) {
  TreeAlgebra alg(tree, dir);
  if (alg.dim() > kBruteForceMaxRoots)
    throw GuardError("root set has " + std::to_string(alg.dim()) + " elements, above the oracle limit of " +
                     std::to_string(kBruteForceMaxRoots));
  auto reach = reachability(alg, alg.generator_indices());
  std::vector<std::vector<Root>> out;
  for_each_downset(reach, nullptr, [&](const std::vector<int>& idx) {
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (!alg.bracket_basis(idx[a], idx[b]).is_zero()) return;
    auto roots = roots_of_indices(alg, idx);
    if (is_abelian_ideal(alg, roots).ok) out.push_back(std::move(roots));
  });
  std::sort(out.begin(), out.end(), ideal_less);
  return out;
}

IdealCheck is_abelian_ideal(const TreeDiagram& tree, Direction dir, const std::vector<Root>& roots) {
  return is_abelian_ideal(TreeAlgebra(tree, dir), roots);
}

IdealCheck is_abelian_ideal(const TreeAlgebra& alg, const std::vector<Root>& roots) {
  std::vector<int> idx;
  std::vector<char> in(alg.dim(), 0);
  for (const auto& r : roots) {
    int k = alg.index_of_root(r);
    if (k < 0) throw ValidationError("unknown root " + root_to_string(r));
    idx.push_back(k);
    in[k] = 1;
  }
  auto show = [&](int a, int b, const LieElement& v) {
    return "[" + alg.basis()[a].name() + ", " + alg.basis()[b].name() + "] = " + v.to_string();
  };
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const auto& v = alg.bracket_basis(idx[a], idx[b]);
      if (!v.is_zero()) return {false, show(idx[a], idx[b], v) + " is nonzero"};
    }
  // Spans of root vectors are stable under the Cartan part; check the rest.
  for (int g = 0; g < alg.dim(); ++g)
    for (int k : idx) {
      const auto& v = alg.bracket_basis(g, k);
      for (const auto& [m, c] : v.terms()) {
        int t = alg.index_of(m);
        if (t < 0 || !in[t]) return {false, show(g, k, v) + " leaves the span"};
      }
    }
  return {true, ""};
}

AdmissiblePair decompose_up(const TreeDiagram& tree, const std::vector<Root>& roots) {
  const int n = tree.size();
  std::map<int, std::vector<std::vector<int>>> by_node;  // dvar -> exponent vectors
  for (const auto& r : roots) {
    auto exps = r;
    int dvar = -1;
    for (int k = 0; k < n; ++k)
      if (exps[k] < 0) {
        dvar = k + 1;
        exps[k] = 0;
      }
    if (dvar < 0) throw ValidationError("malformed root " + root_to_string(r));
    by_node[dvar].push_back(exps);
  }
  std::vector<int> W;
  for (const auto& [v, e] : by_node) W.push_back(v);
  AdmissiblePair pair;
  for (int v : W)
    if (ancestors_or_self_in(tree, v, W).size() == 1) pair.S.push_back(v);
  std::map<int, RootPoset> posets;
  for (int i : pair.S) posets.emplace(i, root_poset(tree, i, Direction::Up));
  auto pi = [&](int r, const RootPoset& P) {
    std::set<int> out;
    auto it = by_node.find(r);
    if (it == by_node.end()) return out;
    for (const auto& exps : it->second) {
      Tuple t;
      for (int p : P.positions) t.push_back(exps[p - 1]);
      if (P.exponents(n, t) != exps) throw ValidationError("root at node " + std::to_string(r) + " uses a variable outside its anchor's clan");
      int k = P.index_of(t);
      if (k < 0) throw ValidationError("root at node " + std::to_string(r) + " is outside its anchor's poset");
      out.insert(k);
    }
    return out;
  };
  auto maxima = [](const RootPoset& P, const std::set<int>& s) {
    std::vector<Tuple> out;
    for (int a : s) {
      bool top = std::none_of(s.begin(), s.end(), [&](int b) { return b != a && P.leq[a][b]; });
      if (top) out.push_back(P.elements[a]);
    }
    return out;
  };
  for (int v : W) {
    auto anc = ancestors_or_self_in(tree, v, pair.S);
    if (anc.empty()) throw ValidationError("node " + std::to_string(v) + " has no anchor");
    const auto& P = posets.at(anc.front());
    auto here = pi(v, P);
    if (v != anc.front())
      for (int k : pi(tree.parent(v), P)) here.erase(k);
    auto K = maxima(P, here);
    if (!K.empty()) pair.K[v] = std::move(K);
  }
  return pair;
}

std::vector<Root> ideal_from_pair(const TreeDiagram& tree, const AdmissiblePair& pair) {
  std::set<Root> roots;
  std::map<int, RootPoset> posets;
  for (int i : pair.S) posets.emplace(i, root_poset(tree, i, Direction::Up));
  for (const auto& [r, K] : pair.K) {
    auto anc = ancestors_or_self_in(tree, r, pair.S);
    if (anc.empty()) throw ValidationError("node " + std::to_string(r) + " has no anchor in S");
    const auto& P = posets.at(anc.front());
    for (const auto& t : K) {
      int j = P.index_of(t);
      if (j < 0) throw ValidationError("tuple outside the anchor's poset at node " + std::to_string(r));
      add_up_principal(tree, P, r, j, roots);
    }
  }
  return sorted_roots(std::move(roots));
}

}  // namespace treelie
