#pragma once

// Abelian ideals of the solvable extensions (tree algebra plus the diagonal Cartan).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treelie/lie.hpp"

namespace treelie {

inline constexpr int kBruteForceMaxRoots = 20;
inline constexpr int kListMaxRoots = 24;

using Tuple = std::vector<int>;

/// Exponent tuples attached to one anchor node, with their partial order.
struct RootPoset {
  int node = 1;
  Direction direction = Direction::Up;
  std::vector<int> positions;  // nodes carrying the exponents, ascending
  std::vector<Tuple> elements;
  std::vector<std::vector<char>> leq;  // leq[a][b]: elements[a] precedes or equals elements[b]

  int size() const { return static_cast<int>(elements.size()); }
  int index_of(const Tuple& t) const;
  /// Full exponent vector (length n) of a tuple.
  std::vector<int> exponents(int n, const Tuple& t) const;
};

RootPoset root_poset(const TreeDiagram& tree, int node, Direction dir);

/// Generator data: independent anchors S and antichains K_r (tuples of the anchor's poset).
struct AdmissiblePair {
  std::vector<int> S;
  std::map<int, std::vector<Tuple>> K;
  friend bool operator==(const AdmissiblePair&, const AdmissiblePair&) = default;
};

struct AbelianIdeal {
  std::vector<Root> roots;  // sorted
  std::optional<AdmissiblePair> generator_pair;
  int dim() const { return static_cast<int>(roots.size()); }
};

/// Canonical order for lists of ideals: by dimension, then root lists.
bool ideal_less(const std::vector<Root>& a, const std::vector<Root>& b);

AbelianIdeal principal_ideal(const TreeDiagram& tree, int node, const Tuple& j, Direction dir);

/// I(S) for every maximal independent subset S of Upsilon (up) or Phi (down).
/// Up, these are exactly the maximal abelian ideals. Down, they can miss
/// maximal ideals on branching trees; see exact_maximal_ideals.
std::vector<AbelianIdeal> maximal_ideals(const TreeDiagram& tree, Direction dir);

/// Inclusion-maximal members of enumerate_ideals; same size guard.
std::vector<AbelianIdeal> exact_maximal_ideals(const TreeDiagram& tree, Direction dir);

/// All abelian ideals including zero, in canonical order. Throws GuardError
/// when the root set exceeds kListMaxRoots.
std::vector<AbelianIdeal> enumerate_ideals(const TreeDiagram& tree, Direction dir);

/// Number of abelian ideals including zero.
BigInt count_ideals(const TreeDiagram& tree, Direction dir);

/// Independent oracle: downsets of the generator-reachability order, filtered
/// to abelian ideals. Throws GuardError above kBruteForceMaxRoots roots.
std::vector<std::vector<Root>> brute_force_ideals(const TreeDiagram& tree, Direction dir);

struct IdealCheck {
  bool ok = false;
  std::string certificate;  // a violating bracket when !ok
};

IdealCheck is_abelian_ideal(const TreeDiagram& tree, Direction dir, const std::vector<Root>& roots);
IdealCheck is_abelian_ideal(const TreeAlgebra& alg, const std::vector<Root>& roots);

/// Generator data of a nonzero up-direction ideal; throws ValidationError if
/// the roots do not have the expected shape.
AdmissiblePair decompose_up(const TreeDiagram& tree, const std::vector<Root>& roots);

/// Union of principal ideals named by an up-direction admissible pair.
std::vector<Root> ideal_from_pair(const TreeDiagram& tree, const AdmissiblePair& pair);

/// Independent subsets of `nodes` that cannot be enlarged inside `nodes`.
std::vector<std::vector<int>> maximal_independent_subsets(const TreeDiagram& tree, const std::vector<int>& nodes);

/// Transitive closure of v_a -> v_b whenever [g, v_a] has a v_b component,
/// over the given operators g. reach[a][b] includes a == b.
std::vector<std::vector<char>> reachability(const TreeAlgebra& alg, const std::vector<int>& ops);

}  // namespace treelie
