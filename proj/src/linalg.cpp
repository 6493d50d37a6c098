#include "treelie/linalg.hpp"

namespace treelie {

namespace {

void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
  for (const auto& [k, v] : x) {
    auto [it, inserted] = y.try_emplace(k, a * v);
    if (!inserted) {
      it->second += a * v;
      if (it->second.is_zero()) y.erase(it);
    }
  }
}

}  // namespace

SparseVec RowSpace::reduce(SparseVec v) const {
  // Rows are fully reduced, so one pass in column order suffices.
  for (auto it = v.begin(); it != v.end();) {
    auto row = rows_.find(it->first);
    if (row == rows_.end()) {
      ++it;
      continue;
    }
    int col = it->first;
    Rational factor = -it->second;
    axpy(v, factor, row->second);
    it = v.upper_bound(col);
  }
  return v;
}

bool RowSpace::insert(SparseVec v) {
  v = reduce(std::move(v));
  if (v.empty()) return false;
  int pivot = v.begin()->first;
  Rational lead = v.begin()->second;
  for (auto& [k, x] : v) x /= lead;
  for (auto& [p, row] : rows_) {
    auto hit = row.find(pivot);
    if (hit != row.end()) {
      Rational factor = -hit->second;
      axpy(row, factor, v);
    }
  }
  rows_.emplace(pivot, std::move(v));
  return true;
}

std::vector<SparseVec> RowSpace::rows() const {
  std::vector<SparseVec> out;
  for (const auto& [p, row] : rows_) out.push_back(row);
  return out;
}

std::vector<SparseVec> RowSpace::nullspace(int dim) const {
  std::vector<SparseVec> basis;
  for (int free = 0; free < dim; ++free) {
    if (rows_.count(free)) continue;
    SparseVec x{{free, Rational(1)}};
    for (const auto& [p, row] : rows_) {
      auto hit = row.find(free);
      if (hit != row.end()) x[p] = -hit->second;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace treelie
