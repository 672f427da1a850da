// Independent reference computations shared by the tests and the acceptance run.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mdlvq/labeling.hpp"

namespace mdlvq::oracle {

// Z2 points strictly nearer to 0 than to any other point of the lattice
// spanned by (a, b) and (-b, a).
inline std::vector<Coeffs> brute_voronoi_z2(std::int64_t a, std::int64_t b) {
  std::vector<Coeffs> out;
  const std::int64_t r = std::abs(a) + std::abs(b);
  for (std::int64_t x = -r; x <= r; ++x)
    for (std::int64_t y = -r; y <= r; ++y) {
      bool inside = true;
      for (int i = -2; i <= 2 && inside; ++i)
        for (int j = -2; j <= 2 && inside; ++j) {
          if (i == 0 && j == 0) continue;
          const std::int64_t sx = i * a - j * b, sy = i * b + j * a;
          if ((x - sx) * (x - sx) + (y - sy) * (y - sy) <= x * x + y * y) inside = false;
        }
      if (inside) out.push_back(Coeffs{x, y});
    }
  return out;
}

// Per-point cost for a class, minimised over shifts by brute force over a
// box of domain translates.
inline std::int64_t brute_cost(const Sublattice& domain, const GramForm& form, const Coeffs& lam, const Edge& e,
                        const IntWeights& w) {
  const int L = domain.dim();
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  const int side = 5;
  int total = 1;
  for (int i = 0; i < L; ++i) total *= side;
  for (int k = 0; k < total; ++k) {
    Coeffs c{};
    int t = k;
    for (int i = 0; i < L; ++i) {
      c[i] = t % side - side / 2;
      t /= side;
    }
    Coeffs d{};
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) d[j] += c[i] * domain.basis()(i, j);
    best = std::min(best, w.g1 * form.norm(lam - e.lam1 - d) + w.g2 * form.norm(lam - e.lam2 - d));
  }
  return best;
}

inline std::vector<std::int64_t> brute_matrix(const EdgeSets& sets, const GramForm& form, const IntWeights& w) {
  const std::size_t n = sets.voronoi.size();
  std::vector<std::int64_t> m(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m[r * n + c] = brute_cost(sets.domain, form, sets.voronoi[r], sets.classes[c], w);
  return m;
}

// Exact optimum by dynamic programming over subsets of columns.
inline std::int64_t bitmask_optimum(const std::vector<std::int64_t>& m, int n) {
  std::vector<std::int64_t> dp(std::size_t{1} << n, std::numeric_limits<std::int64_t>::max());
  dp[0] = 0;
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask] == std::numeric_limits<std::int64_t>::max()) continue;
    const int r = std::popcount(mask);
    if (r == n) continue;
    for (int c = 0; c < n; ++c)
      if (!(mask >> c & 1u))
        dp[mask | (std::size_t{1} << c)] =
            std::min(dp[mask | (std::size_t{1} << c)], dp[mask] + m[static_cast<std::size_t>(r * n + c)]);
  }
  return dp.back();
}

// Min-cost perfect matching as successive shortest paths (Bellman-Ford) on a
// bipartite flow network.
inline std::int64_t ssp_optimum(const std::vector<std::int64_t>& m, int n) {
  struct Arc {
    int to, cap;
    std::int64_t cost;
  };
  const int src = 2 * n, snk = 2 * n + 1, V = 2 * n + 2;
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(V));
  auto add = [&](int a, int b, std::int64_t c) {
    adj[static_cast<std::size_t>(a)].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({b, 1, c});
    adj[static_cast<std::size_t>(b)].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({a, 0, -c});
  };
  for (int r = 0; r < n; ++r) add(src, r, 0);
  for (int c = 0; c < n; ++c) add(n + c, snk, 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) add(r, n + c, m[static_cast<std::size_t>(r * n + c)]);
  std::int64_t total = 0;
  for (int flow = 0; flow < n; ++flow) {
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> dist(static_cast<std::size_t>(V), inf);
    std::vector<int> via(static_cast<std::size_t>(V), -1);
    dist[static_cast<std::size_t>(src)] = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (int u = 0; u < V; ++u) {
        if (dist[static_cast<std::size_t>(u)] == inf) continue;
        for (int id : adj[static_cast<std::size_t>(u)]) {
          const Arc& a = arcs[static_cast<std::size_t>(id)];
          if (a.cap > 0 && dist[static_cast<std::size_t>(u)] + a.cost < dist[static_cast<std::size_t>(a.to)]) {
            dist[static_cast<std::size_t>(a.to)] = dist[static_cast<std::size_t>(u)] + a.cost;
            via[static_cast<std::size_t>(a.to)] = id;
            changed = true;
          }
        }
      }
    }
    for (int v = snk; v != src;) {
      const int id = via[static_cast<std::size_t>(v)];
      arcs[static_cast<std::size_t>(id)].cap -= 1;
      arcs[static_cast<std::size_t>(id ^ 1)].cap += 1;
      v = arcs[static_cast<std::size_t>(id ^ 1)].to;
    }
    total += dist[static_cast<std::size_t>(snk)];
  }
  return total;
}

template <typename F>
double golden_section(F&& f, double lo, double hi) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Smallest central distortion of the Gaussian two-description test channel
// Y_i = X + N_i, with noise variances fixed by d_i and correlation rho <= 0
// chosen so the sum rate is exactly R1 + R2.
inline double test_channel_d0(double R1, double R2, double d1, double d2) {
  const double s1 = d1 / (1.0 - d1), s2 = d2 / (1.0 - d2);
  auto sum_rate = [&](double rho) {
    return 0.5 * std::log2((1.0 + s1) * (1.0 + s2) / (s1 * s2 * (1.0 - rho * rho)));
  };
  auto d0 = [&](double rho) {
    const double k12 = 1.0 + rho * std::sqrt(s1 * s2);
    const double k11 = 1.0 + s1, k22 = 1.0 + s2;
    const double det = k11 * k22 - k12 * k12;
    // c^T K^{-1} c with c = (1, 1)
    return 1.0 - (k22 - 2.0 * k12 + k11) / det;
  };
  double lo = -1.0 + 1e-15, hi = 0.0;  // sum_rate decreasing in rho on [-1, 0]
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (sum_rate(mid) > R1 + R2)
      lo = mid;
    else
      hi = mid;
  }
  return d0(hi);
}

}  // namespace mdlvq::oracle
