#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "mdlvq/assignment.hpp"
#include "mdlvq/error.hpp"

using namespace mdlvq;

namespace {

CostMatrix random_matrix(int n, std::mt19937_64& rng, int hi) {
  std::uniform_int_distribution<int> d(0, hi);
  CostMatrix m(n);
  for (auto& v : m.c) v = d(rng);
  return m;
}

// Every permutation, in lexicographic order.
struct Brute {
  std::int64_t best = kForbidden;
  std::vector<int> lex_best;
  std::size_t optimal_count = 0;
};

Brute brute(const CostMatrix& m) {
  std::vector<int> p(static_cast<std::size_t>(m.n));
  std::iota(p.begin(), p.end(), 0);
  Brute b;
  do {
    std::int64_t c = 0;
    bool ok = true;
    for (int r = 0; r < m.n; ++r) {
      if (m(r, p[static_cast<std::size_t>(r)]) >= kForbidden) ok = false;
      c += m(r, p[static_cast<std::size_t>(r)]);
    }
    if (!ok) continue;
    if (c < b.best) {
      b.best = c;
      b.lex_best = p;
      b.optimal_count = 1;
    } else if (c == b.best) {
      ++b.optimal_count;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return b;
}

}  // namespace

TEST_CASE("assignment matches brute force on small matrices") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + t % 7;
    const CostMatrix m = random_matrix(n, rng, t % 2 ? 3 : 100);
    const Assignment a = solve_assignment(m);
    const Brute b = brute(m);
    REQUIRE(a.cost == b.best);
    REQUIRE(matching_cost(m, a.col_of_row) == a.cost);
    const Assignment lex = lexicographic_optimum(m, a);
    REQUIRE(lex.cost == b.best);
    REQUIRE(lex.col_of_row == b.lex_best);
  }
}

TEST_CASE("duals certify optimality") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const int n = 5 + t % 20;
    const CostMatrix m = random_matrix(n, rng, 50);
    const Assignment a = solve_assignment(m);
    std::int64_t dual = 0;
    for (int r = 0; r < n; ++r) {
      dual += a.u[static_cast<std::size_t>(r)] + a.v[static_cast<std::size_t>(r)];
      for (int c = 0; c < n; ++c)
        REQUIRE(m(r, c) - a.u[static_cast<std::size_t>(r)] - a.v[static_cast<std::size_t>(c)] >= 0);
      const int c = a.col_of_row[static_cast<std::size_t>(r)];
      REQUIRE(m(r, c) - a.u[static_cast<std::size_t>(r)] - a.v[static_cast<std::size_t>(c)] == 0);
    }
    CHECK(dual == a.cost);
  }
}

TEST_CASE("forbidden entries are avoided") {
  CostMatrix m(3);
  m.c = {0, kForbidden, kForbidden, kForbidden, 5, 1, 2, kForbidden, 7};
  const Assignment a = solve_assignment(m);
  // Row 0 can only take column 0, which leaves row 2 column 2.
  CHECK(a.col_of_row == std::vector<int>{0, 1, 2});
  CHECK(a.cost == 12);
  CHECK(brute(m).best == 12);

  CostMatrix bad(2);
  bad.c = {kForbidden, kForbidden, 1, 1};
  CHECK_THROWS_AS(solve_assignment(bad), ConstructionError);
}

TEST_CASE("empty and single matrices") {
  CHECK(solve_assignment(CostMatrix(0)).cost == 0);
  CostMatrix one(1);
  one(0, 0) = -4;
  CHECK(solve_assignment(one).cost == -4);
}

TEST_CASE("enumerated optima are distinct, optimal and complete") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 5;
    const CostMatrix m = random_matrix(n, rng, 2);
    const Assignment a = solve_assignment(m);
    const Brute b = brute(m);
    const auto all = enumerate_optimal(m, a, 1000);
    REQUIRE(all.front() == a.col_of_row);
    REQUIRE(all.size() == b.optimal_count);
    std::set<std::vector<int>> seen(all.begin(), all.end());
    REQUIRE(seen.size() == all.size());
    for (const auto& p : all) REQUIRE(matching_cost(m, p) == b.best);
    CHECK(enumerate_optimal(m, a, 1).size() == 1);
  }
}

TEST_CASE("all-zero matrix has n! optima") {
  const CostMatrix m(4);
  const Assignment a = solve_assignment(m);
  CHECK(enumerate_optimal(m, a, 100).size() == 24);
  CHECK(lexicographic_optimum(m, a).col_of_row == std::vector<int>{0, 1, 2, 3});
}
