#pragma once

// Fixed test corpus: chains, stars, E-trees and seeded random trees.

#include <random>
#include <string>
#include <vector>

#include "treelie/lie.hpp"
#include "treelie/tree.hpp"

namespace corpus {

using treelie::Edge;
using treelie::TreeDiagram;

struct Named {
  std::string name;
  TreeDiagram tree;
};

/// Chain 1-2-...-n with edge weights d (size n-1).
inline TreeDiagram chain(const std::vector<int>& d) {
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < d.size(); ++k)
    edges.push_back({static_cast<int>(k + 1), static_cast<int>(k + 2), d[k]});
  return TreeDiagram::build(static_cast<int>(d.size() + 1), edges);
}

inline TreeDiagram all_ones_chain(int n) { return chain(std::vector<int>(static_cast<std::size_t>(n - 1), 1)); }

/// Symplectic weighting d = (1, ..., 1, 2).
inline TreeDiagram symplectic_chain(int n) {
  std::vector<int> d(static_cast<std::size_t>(n - 1), 1);
  d.back() = 2;
  return chain(d);
}

/// Root 1 with leaves 2..k+1.
inline TreeDiagram star(const std::vector<int>& d) {
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < d.size(); ++k) edges.push_back({1, static_cast<int>(k + 2), d[k]});
  return TreeDiagram::build(static_cast<int>(d.size() + 1), edges);
}

/// E^{n0}_{n1,n2}: chain 1..n0, then the two branches hanging from n0 with
/// labels interleaved (first branch n0+1, n0+3, ...; second n0+2, n0+4, ...)
/// while both still have nodes. `heavy` lists (parent, child, weight) overrides.
inline TreeDiagram e_tree(int n0, int n1, int n2, const std::vector<Edge>& heavy = {}) {
  std::vector<Edge> edges;
  for (int i = 2; i <= n0; ++i) edges.push_back({i - 1, i, 1});
  int next = n0 + 1, tail1 = n0, tail2 = n0, left1 = n1, left2 = n2;
  while (left1 > 0 || left2 > 0) {
    if (left1 > 0) {
      edges.push_back({tail1, next, 1});
      tail1 = next++;
      --left1;
    }
    if (left2 > 0) {
      edges.push_back({tail2, next, 1});
      tail2 = next++;
      --left2;
    }
  }
  for (const auto& h : heavy)
    for (auto& e : edges)
      if (e.parent == h.parent && e.child == h.child) e.weight = h.weight;
  return TreeDiagram::build(n0 + n1 + n2, edges);
}

/// Random tree with parent(i) uniform below i and weights in 1..max_weight.
inline TreeDiagram random_tree(std::mt19937& rng, int n, int max_weight) {
  std::vector<Edge> edges;
  for (int i = 2; i <= n; ++i) {
    std::uniform_int_distribution<int> p(1, i - 1), w(1, max_weight);
    int parent = p(rng);
    edges.push_back({parent, i, w(rng)});
  }
  return TreeDiagram::build(n, edges);
}

inline int root_count(const TreeDiagram& t, treelie::Direction dir) {
  return static_cast<int>(treelie::enumerate_basis(t, dir).size());
}

/// Distinct seeded random trees, 4 <= n <= 6, weights <= 3, at most `max_roots` roots in both directions.
inline std::vector<Named> random_corpus(unsigned seed, int count, int max_roots) {
  std::mt19937 rng(seed);
  std::vector<Named> out;
  std::uniform_int_distribution<int> size(4, 6);
  while (static_cast<int>(out.size()) < count) {
    TreeDiagram t = random_tree(rng, size(rng), 3);
    if (root_count(t, treelie::Direction::Up) > max_roots || root_count(t, treelie::Direction::Down) > max_roots)
      continue;
    bool seen = false;
    for (const auto& o : out) seen = seen || o.tree == t;
    if (seen) continue;
    out.push_back({"random" + std::to_string(out.size()), t});
  }
  return out;
}

/// Every tree has at most 16 roots in both directions.
inline std::vector<Named> trees() {
  std::vector<Named> out{
      {"single", TreeDiagram::build(1, {})},
      {"A2", all_ones_chain(2)},
      {"A2(3)", chain({3})},
      {"A3", all_ones_chain(3)},
      {"A3(1,2)", chain({1, 2})},
      {"A3(2,1)", chain({2, 1})},
      {"A4", all_ones_chain(4)},
      {"star11", star({1, 1})},
      {"star22", star({2, 2})},
      {"star111", star({1, 1, 1})},
      {"E211", e_tree(2, 1, 1)},
      {"E311", e_tree(3, 1, 1)},
  };
  for (auto& r : random_corpus(20261016u, 4, 16)) out.push_back(std::move(r));
  return out;
}

}  // namespace corpus
