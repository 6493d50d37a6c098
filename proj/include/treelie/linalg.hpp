#pragma once

// Exact sparse row reduction over Q.

#include <map>
#include <vector>

#include "treelie/rational.hpp"

namespace treelie {

using SparseVec = std::map<int, Rational>;

/// Incrementally maintained reduced row echelon basis of a subspace.
class RowSpace {
 public:
  /// Reduces v against the current rows; adds it when independent.
  bool insert(SparseVec v);
  /// Reduced form of v; empty iff v lies in the span.
  SparseVec reduce(SparseVec v) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  int rank() const { return static_cast<int>(rows_.size()); }
  /// Rows in pivot order; each has leading coefficient 1 and is fully reduced.
  std::vector<SparseVec> rows() const;
  /// Basis of {x : row . x = 0 for every row} inside Q^dim.
  std::vector<SparseVec> nullspace(int dim) const;

 private:
  std::map<int, SparseVec> rows_;  // pivot column -> row
};

}  // namespace treelie
