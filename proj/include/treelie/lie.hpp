#pragma once

// First-order differential operators x^a d_j and the upward/downward tree algebras.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "treelie/linalg.hpp"
#include "treelie/rational.hpp"
#include "treelie/tree.hpp"

namespace treelie {

enum class Direction { Up, Down };

Direction parse_direction(std::string_view text);
const char* direction_name(Direction d);

/// Unit monomial operator x^exps d/dx_dvar; exps[k] is the power of x_{k+1}.
struct DiffOpMonomial {
  std::vector<int> exps;
  int dvar = 1;

  int degree() const;
  /// e.g. "x1^2*x3*d2"; a bare derivative prints as "d2".
  std::string name() const;
  friend auto operator<=>(const DiffOpMonomial&, const DiffOpMonomial&) = default;
};

/// Basis order: derivative node, then total degree ascending, then exponent
/// vectors with larger leading powers first.
bool basis_less(const DiffOpMonomial& a, const DiffOpMonomial& b);

/// Root vector: exps with an extra -1 at the derivative position.
using Root = std::vector<int>;
Root root_of(const DiffOpMonomial& m);
std::string root_to_string(const Root& r);

class LieElement {
 public:
  using TermMap = std::map<DiffOpMonomial, Rational>;

  explicit LieElement(int n = 0) : n_(n) {}
  static LieElement monomial(const DiffOpMonomial& m, Rational c = Rational(1));

  int n() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const DiffOpMonomial& m, const Rational& c);
  LieElement& operator+=(const LieElement& o);
  LieElement& operator-=(const LieElement& o);
  LieElement scaled(const Rational& c) const;
  friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
  friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
  friend bool operator==(const LieElement&, const LieElement&) = default;

  std::string to_string() const;

 private:
  int n_;
  TermMap terms_;
};

/// [x^a d_i, x^b d_j] = b_i x^{a+b-e_i} d_j - a_j x^{a+b-e_j} d_i, extended bilinearly.
LieElement bracket(const LieElement& a, const LieElement& b);
LieElement bracket(const DiffOpMonomial& a, const DiffOpMonomial& b);

/// Closed-form basis, ordered by basis_less.
std::vector<DiffOpMonomial> enumerate_basis(const TreeDiagram& tree, Direction dir);

/// The defining generators: d_1 and x_p^d d_j (up); tip derivatives and x_j^d d_p (down).
std::vector<DiffOpMonomial> generators(const TreeDiagram& tree, Direction dir);

/// The constraint describing the admissible exponents at one derivative node:
/// exps supported on `positions` with sum exps[pos] * weight <= bound.
struct SimplexShape {
  std::vector<int> positions;  // 1-based nodes
  std::vector<long long> weights;
  long long bound = 0;
};
SimplexShape basis_shape(const TreeDiagram& tree, Direction dir, int node);

/// All exponent vectors (length n) of a simplex shape, in basis order.
std::vector<std::vector<int>> simplex_points(int n, const SimplexShape& shape);

struct DimNilpotence {
  long long dim = 0;
  long long nilpotence = 0;
};

/// Closed-form dimension and nilpotence from the node weights.
DimNilpotence dim_and_nilpotence(const TreeDiagram& tree, Direction dir);

/// Nilpotence read off the grading: the longest clan of a tip, each node
/// counted with its weight-product degree (suffix products up, prefix sums down).
long long graded_nilpotence(const TreeDiagram& tree, Direction dir);

std::vector<std::pair<Root, DiffOpMonomial>> roots(const TreeDiagram& tree, Direction dir);

/// Basis, root data and coordinates for one tree algebra.
class TreeAlgebra {
 public:
  TreeAlgebra(const TreeDiagram& tree, Direction dir);

  const TreeDiagram& tree() const { return tree_; }
  Direction direction() const { return dir_; }
  int n() const { return tree_.size(); }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<DiffOpMonomial>& basis() const { return basis_; }
  const std::vector<Root>& roots() const { return roots_; }
  const std::vector<int>& generator_indices() const { return generators_; }

  /// -1 when the monomial is not a basis element.
  int index_of(const DiffOpMonomial& m) const;
  int index_of_root(const Root& r) const;

  /// Coordinates in the basis; nullopt-like empty flag when some term falls outside.
  bool coordinates(const LieElement& e, SparseVec& out) const;
  LieElement element(const SparseVec& v) const;
  LieElement basis_element(int k) const { return LieElement::monomial(basis_[k]); }

  /// Bracket of two basis elements (cached).
  const LieElement& bracket_basis(int a, int b) const;

 private:
  TreeDiagram tree_;
  Direction dir_;
  std::vector<DiffOpMonomial> basis_;
  std::vector<Root> roots_;
  std::map<DiffOpMonomial, int> index_;
  std::map<Root, int> root_index_;
  std::vector<int> generators_;
  mutable std::map<std::pair<int, int>, LieElement> bracket_cache_;
};

struct StructureReport {
  bool closure = false;
  std::vector<int> central_series_dims;  // nonzero terms only
  std::vector<LieElement> center_basis;
  bool center_matches = false;  // equals the span of tip derivatives (up) or d_1 (down)
  int generated_dim = 0;        // dimension of the subalgebra generated by the generators
  int central_series_length() const { return static_cast<int>(central_series_dims.size()); }
};

StructureReport verify_structure(const TreeDiagram& tree, Direction dir);
StructureReport verify_structure(const TreeAlgebra& algebra);

}  // namespace treelie
