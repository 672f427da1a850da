#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace mdlvq {

/// Square integer cost matrix, row-major.
struct CostMatrix {
  int n = 0;
  std::vector<std::int64_t> c;

  explicit CostMatrix(int size = 0) : n(size), c(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0) {}
  std::int64_t& operator()(int r, int col) { return c[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col)]; }
  std::int64_t operator()(int r, int col) const { return c[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col)]; }
};

inline constexpr std::int64_t kForbidden = std::numeric_limits<std::int64_t>::max() / 4;

struct Assignment {
  std::vector<int> col_of_row;
  std::int64_t cost = 0;
  /// Optimal duals: c(r, col) - u[r] - v[col] >= 0, zero on the matching.
  std::vector<std::int64_t> u, v;
};

/// Exact min-cost perfect matching (Hungarian method, O(n^3)). Entries equal
/// to kForbidden are never used; throws ConstructionError if no perfect
/// matching avoids them.
Assignment solve_assignment(const CostMatrix& cost);

/// Among all optimal matchings, the one whose column vector is
/// lexicographically smallest (rows in order).
Assignment lexicographic_optimum(const CostMatrix& cost, const Assignment& opt);

/// Up to `limit` distinct optimal matchings, the given one first.
std::vector<std::vector<int>> enumerate_optimal(const CostMatrix& cost, const Assignment& opt, std::size_t limit);

std::int64_t matching_cost(const CostMatrix& cost, const std::vector<int>& col_of_row);

}  // namespace mdlvq
