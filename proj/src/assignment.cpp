#include "mdlvq/assignment.hpp"

#include <algorithm>

#include "mdlvq/error.hpp"

namespace mdlvq {

Assignment solve_assignment(const CostMatrix& cost) {
  const int n = cost.n;
  Assignment out;
  out.col_of_row.assign(static_cast<std::size_t>(n), -1);
  if (n == 0) return out;
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 2;
  // 1-based potentials; p[j] is the row matched to column j.
  std::vector<std::int64_t> u(static_cast<std::size_t>(n) + 1, 0), v(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::int64_t> minv(static_cast<std::size_t>(n) + 1);
  std::vector<char> used(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      std::int64_t delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const std::int64_t cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      if (delta >= kForbidden / 2) throw ConstructionError("assignment problem has no feasible perfect matching");
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  for (int j = 1; j <= n; ++j) out.col_of_row[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  out.u.assign(u.begin() + 1, u.end());
  out.v.assign(v.begin() + 1, v.end());
  out.cost = matching_cost(cost, out.col_of_row);
  return out;
}

std::int64_t matching_cost(const CostMatrix& cost, const std::vector<int>& col_of_row) {
  std::int64_t s = 0;
  for (int r = 0; r < cost.n; ++r) s += cost(r, col_of_row[static_cast<std::size_t>(r)]);
  return s;
}

namespace {

struct TightGraph {
  int n = 0;
  std::vector<char> edge;  // n x n
  bool operator()(int r, int c) const { return edge[static_cast<std::size_t>(r * n + c)] != 0; }
};

TightGraph tight_graph(const CostMatrix& cost, const Assignment& opt) {
  TightGraph g;
  g.n = cost.n;
  g.edge.assign(static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.n), 0);
  for (int r = 0; r < g.n; ++r)
    for (int c = 0; c < g.n; ++c)
      if (cost(r, c) < kForbidden && cost(r, c) - opt.u[static_cast<std::size_t>(r)] - opt.v[static_cast<std::size_t>(c)] == 0)
        g.edge[static_cast<std::size_t>(r * g.n + c)] = 1;
  return g;
}

// Alternating path from row `start` (leaving by a non-matching tight edge)
// to column `target`. Returns the rows on the path paired with their new
// columns, or empty when none exists.
std::vector<std::pair<int, int>> alternating_path(const TightGraph& g, const std::vector<int>& col_of_row,
                                                  const std::vector<int>& row_of_col, const std::vector<char>& fixed,
                                                  int start, int target) {
  const int n = g.n;
  std::vector<int> parent_col(static_cast<std::size_t>(n), -2);  // column -> previous row
  std::vector<int> stack{start};
  std::vector<char> seen_row(static_cast<std::size_t>(n), 0);
  seen_row[static_cast<std::size_t>(start)] = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int y = 0; y < n; ++y) {
      if (!g(x, y) || y == col_of_row[static_cast<std::size_t>(x)] || parent_col[static_cast<std::size_t>(y)] != -2) continue;
      const int owner = row_of_col[static_cast<std::size_t>(y)];
      if (y != target && fixed[static_cast<std::size_t>(owner)]) continue;
      parent_col[static_cast<std::size_t>(y)] = x;
      if (y == target) {
        std::vector<std::pair<int, int>> path;
        int col = y;
        while (true) {
          const int row = parent_col[static_cast<std::size_t>(col)];
          path.emplace_back(row, col);
          if (row == start) break;
          col = col_of_row[static_cast<std::size_t>(row)];
        }
        return path;
      }
      if (!seen_row[static_cast<std::size_t>(owner)]) {
        seen_row[static_cast<std::size_t>(owner)] = 1;
        stack.push_back(owner);
      }
    }
  }
  return {};
}

void apply_path(const std::vector<std::pair<int, int>>& path, std::vector<int>& col_of_row, std::vector<int>& row_of_col) {
  for (const auto& [r, c] : path) {
    col_of_row[static_cast<std::size_t>(r)] = c;
    row_of_col[static_cast<std::size_t>(c)] = r;
  }
}

std::vector<int> invert(const std::vector<int>& col_of_row) {
  std::vector<int> row_of_col(col_of_row.size());
  for (std::size_t r = 0; r < col_of_row.size(); ++r) row_of_col[static_cast<std::size_t>(col_of_row[r])] = static_cast<int>(r);
  return row_of_col;
}

}  // namespace

Assignment lexicographic_optimum(const CostMatrix& cost, const Assignment& opt) {
  const TightGraph g = tight_graph(cost, opt);
  Assignment out = opt;
  auto& col = out.col_of_row;
  auto row = invert(col);
  std::vector<char> fixed(static_cast<std::size_t>(g.n), 0);
  for (int r = 0; r < g.n; ++r) {
    for (int c = 0; c < col[static_cast<std::size_t>(r)]; ++c) {
      if (!g(r, c) || fixed[static_cast<std::size_t>(row[static_cast<std::size_t>(c)])]) continue;
      // Swap in (r, c): the row owning c must reach r's current column.
      const int owner = row[static_cast<std::size_t>(c)];
      fixed[static_cast<std::size_t>(r)] = 1;
      auto path = alternating_path(g, col, row, fixed, owner, col[static_cast<std::size_t>(r)]);
      fixed[static_cast<std::size_t>(r)] = 0;
      if (path.empty()) continue;
      apply_path(path, col, row);
      col[static_cast<std::size_t>(r)] = c;
      row[static_cast<std::size_t>(c)] = r;
      break;
    }
    fixed[static_cast<std::size_t>(r)] = 1;
  }
  out.cost = matching_cost(cost, col);
  if (out.cost != opt.cost) throw ConstructionError("lexicographic refinement changed the optimal cost");
  return out;
}

namespace {

void enumerate_rec(TightGraph g, std::vector<int> col, std::vector<char> forced, std::size_t limit,
                   std::vector<std::vector<int>>& out) {
  while (out.size() < limit) {
    auto row = invert(col);
    int pivot = -1;
    std::vector<std::pair<int, int>> path;
    for (int i = 0; i < g.n && pivot < 0; ++i) {
      if (forced[static_cast<std::size_t>(i)]) continue;
      path = alternating_path(g, col, row, forced, i, col[static_cast<std::size_t>(i)]);
      if (!path.empty()) pivot = i;
    }
    if (pivot < 0) {
      out.push_back(col);
      return;
    }
    // Branch 1: matchings that keep (pivot, col[pivot]).
    auto forced_in = forced;
    forced_in[static_cast<std::size_t>(pivot)] = 1;
    enumerate_rec(g, col, forced_in, limit, out);
    // Branch 2: matchings without it, starting from the flipped cycle.
    g.edge[static_cast<std::size_t>(pivot * g.n + col[static_cast<std::size_t>(pivot)])] = 0;
    apply_path(path, col, row);
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_optimal(const CostMatrix& cost, const Assignment& opt, std::size_t limit) {
  std::vector<std::vector<int>> out;
  if (limit == 0) return out;
  enumerate_rec(tight_graph(cost, opt), opt.col_of_row, std::vector<char>(static_cast<std::size_t>(cost.n), 0), limit,
                out);
  return out;
}

}  // namespace mdlvq
