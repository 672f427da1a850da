#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "mdlvq/error.hpp"
#include "mdlvq/labeling.hpp"
#include "oracles.hpp"

using namespace mdlvq;
using namespace mdlvq::oracle;

namespace {

SublatticeSystem z2_system() { return build_system(Lattice::zn(2), GaussianInt{2, 1}, GaussianInt{3, 0}); }

std::vector<Coeffs> sorted(std::vector<Coeffs> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("Z2 worked example: V0, P sets and neighbour lists") {
  const SublatticeSystem sys = z2_system();
  const EdgeSets sets = build_edge_sets(sys);
  CHECK(sets.voronoi.size() == 45);
  CHECK(sets.voronoi == sorted(brute_voronoi_z2(6, 3)));
  CHECK(sets.p1.size() == 9);
  CHECK(sets.p2.size() == 5);
  CHECK(sets.classes.size() == 45);

  // L1((2, 1)): multiples of 3 inside V0 + (2, 1).
  std::vector<Coeffs> expect;
  for (const auto& v : brute_voronoi_z2(6, 3)) {
    const Coeffs p = v + Coeffs{2, 1};
    if (p[0] % 3 == 0 && p[1] % 3 == 0) expect.push_back(p);
  }
  CHECK(expect.size() == 5);
  CHECK(sorted(neighbor_list(sys, 1, Coeffs{2, 1})) == sorted(expect));
  CHECK(sorted(expect) == sorted({Coeffs{0, 0}, Coeffs{0, 3}, Coeffs{3, 3}, Coeffs{6, 0}, Coeffs{3, 0}}));
  CHECK_THROWS_AS(neighbor_list(sys, 1, Coeffs{1, 0}), InputError);
  CHECK_THROWS_AS(neighbor_list(sys, 3, Coeffs{0, 0}), InputError);
}

TEST_CASE("edges in one class differ by a product-lattice vector") {
  const SublatticeSystem sys = z2_system();
  const EdgeSets sets = build_edge_sets(sys);
  // (4, 2) and (-2, -1) both lie in sub1; their difference (6, 3) is in the product.
  CHECK(sys.sub1.contains(Coeffs{4, 2}));
  CHECK(sys.sub1.contains(Coeffs{-2, -1}));
  const Coeffs l2{3, 0};
  CHECK(edge_key(sys.product, Coeffs{4, 2}, l2 + Coeffs{6, 3}) == edge_key(sys.product, Coeffs{-2, -1}, l2));
  CHECK(edge_key(sys.product, Coeffs{4, 2}, l2) != edge_key(sys.product, Coeffs{-2, -1}, l2));
  CHECK(edge_key(sys.product, Coeffs{-2, -1}, Coeffs{-6, 0}) == edge_key(sys.product, Coeffs{4, 2}, Coeffs{0, 3}));
  for (const auto& e : sets.classes) {
    CHECK(sys.sub1.contains(e.lam1));
    CHECK(sys.sub2.contains(e.lam2));
  }
}

TEST_CASE("Z1 with indices 3 and 5") {
  const SublatticeSystem sys = build_system(Lattice::zn(1), std::int64_t{3}, std::int64_t{5});
  const EdgeSets sets = build_edge_sets(sys);
  std::vector<Coeffs> v;
  for (int i = -7; i <= 7; ++i) v.push_back(Coeffs{i});
  CHECK(sets.voronoi == v);
  CHECK(sets.p1 == std::vector<Coeffs>{Coeffs{-6}, Coeffs{-3}, Coeffs{0}, Coeffs{3}, Coeffs{6}});
  CHECK(sets.p2 == std::vector<Coeffs>{Coeffs{-5}, Coeffs{0}, Coeffs{5}});
  CHECK(sets.classes.size() == 15);
}

TEST_CASE("optimal cost matches an exhaustive subset search") {
  struct Case {
    std::int64_t a, b;
    Rational g1, g2;
  };
  for (const Case& c : {Case{3, 5, Rational(1), Rational(1)}, Case{3, 5, Rational(9, 5), Rational(1)},
                        Case{5, 3, Rational(1), Rational(4)}, Case{3, 7, Rational(2), Rational(1)},
                        Case{1, 15, Rational(1), Rational(1)}}) {
    const SublatticeSystem sys = build_system(Lattice::zn(1), c.a, c.b);
    const IntWeights w = integer_weights(c.g1, c.g2);
    const EdgeSets sets = build_edge_sets(sys);
    const auto m = brute_matrix(sets, sys.base.form(), w);
    const CostMatrix cm = build_cost_matrix(sets, sys.base.form(), w, Execution::Serial);
    CHECK(cm.c == m);
    const Labeling lab = solve_labeling(sys, c.g1, c.g2);
    CHECK(lab.cost_num == bitmask_optimum(m, static_cast<int>(sets.voronoi.size())));
  }
}

TEST_CASE("45-point optimum matches a min-cost flow") {
  const SublatticeSystem sys = z2_system();
  for (const auto& [g1, g2] : {std::pair{Rational(9, 5), Rational(1)}, std::pair{Rational(1), Rational(1)},
                               std::pair{Rational(1), Rational(3)}}) {
    const IntWeights w = integer_weights(g1, g2);
    const EdgeSets sets = build_edge_sets(sys);
    const auto m = brute_matrix(sets, sys.base.form(), w);
    CHECK(build_cost_matrix(sets, sys.base.form(), w, Execution::Parallel).c == m);
    const Labeling lab = solve_labeling(sys, g1, g2);
    CHECK(lab.cost_num == ssp_optimum(m, 45));
  }
  const Labeling lab = solve_labeling(sys, Rational(9, 5), Rational(1));
  CHECK(lab.table.size() == 45);
  CHECK(lab.total_cost() == Rational(624, 5));
  CHECK(side_excess(lab) == std::pair{Rational(26, 45), Rational(26, 15)});
}

TEST_CASE("cost summand splits into edge and mean terms") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> d(-9, 9), g(0, 6);
  const GramForm form = Lattice::a2().form();
  for (int t = 0; t < 500; ++t) {
    const Coeffs lam{d(rng), d(rng)};
    const Edge e{Coeffs{d(rng), d(rng)}, Coeffs{d(rng), d(rng)}, 0};
    const Rational g1(g(rng) + 1, g(rng) + 1), g2(g(rng), g(rng) + 1);
    const GuideTerms terms = guide_terms(form, lam, e, g1, g2);
    REQUIRE(terms.edge_term + terms.mean_term == edge_cost(form, lam, e, g1, g2));
  }
}

TEST_CASE("no feasible assignment beats the optimum") {
  std::mt19937_64 rng(8);
  const SublatticeSystem sys = z2_system();
  const IntWeights w = integer_weights(Rational(9, 5), Rational(1));
  const EdgeSets sets = build_edge_sets(sys);
  const Labeling best = solve_labeling(sys, Rational(9, 5), Rational(1));
  std::vector<int> cols(45);
  std::iota(cols.begin(), cols.end(), 0);
  for (int t = 0; t < 200; ++t) {
    std::shuffle(cols.begin(), cols.end(), rng);
    const Labeling other = labeling_from_assignment(sys, sets, w, Rational(9, 5), Rational(1), cols);
    REQUIRE(other.cost_num >= best.cost_num);
    REQUIRE(other.total_cost() >= best.total_cost());
  }
}

TEST_CASE("labels invert") {
  const SublatticeSystem sys = z2_system();
  const Labeling lab = solve_labeling(sys, Rational(9, 5), Rational(1));
  for (int x = -20; x <= 20; ++x)
    for (int y = -20; y <= 20; ++y) {
      const Coeffs p{x, y};
      const auto [l1, l2] = lab.label(p);
      REQUIRE(sys.sub1.contains(l1));
      REQUIRE(sys.sub2.contains(l2));
      REQUIRE(lab.unlabel(l1, l2) == p);
    }
  CHECK_THROWS_AS(lab.unlabel(Coeffs{0, 0}, Coeffs{30, 0}), CorruptionError);
}

TEST_CASE("lcm reduction keeps the mean cost") {
  const SublatticeSystem sys = build_system(Lattice::zn(2), GaussianInt{2, 1}, GaussianInt{6, 3});
  const Labeling small = solve_labeling(sys, Rational(1), Rational(1), {.use_lcm = true});
  CHECK(small.reduced);
  CHECK(small.table.size() == 45);
  const Labeling big = lcm_reduce(sys, small);
  CHECK(big.table.size() == 225);
  CHECK(big.mean_cost() == small.mean_cost());
  CHECK(side_excess(big) == side_excess(small));
  for (const auto& c : check_properties(sys, small)) CHECK_MESSAGE(c.ok, c.name, " ", c.detail);
  // Optimising on the product directly does no better.
  const Labeling full = solve_labeling(sys, Rational(1), Rational(1));
  CHECK(full.mean_cost() == big.mean_cost());
  for (const auto& e : big.table) CHECK(big.label(e.point) == std::pair{e.lam1, e.lam2});
  CHECK_THROWS_AS(lcm_reduce(sys, full), InputError);
}

TEST_CASE("lcm domain is unavailable without an lcm sublattice") {
  const SublatticeSystem sys = build_system(Lattice::zn(4), Quaternion::lipschitz(1, 1, 1, 0),
                                            Quaternion::lipschitz(2, 1, 0, 0));
  if (!sys.lcm_sub) CHECK_THROWS_AS(build_edge_sets(sys, true), UnsupportedError);
}

TEST_CASE("zero weight on one side labels by nearest point") {
  const SublatticeSystem sys = z2_system();
  const Labeling lab = solve_labeling(sys, Rational(1), Rational(0));
  // Oracle: mean squared distance from V0 to the nearest sub1 point.
  std::int64_t s = 0;
  const auto v0 = brute_voronoi_z2(6, 3);
  for (const auto& p : v0) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (int i = -6; i <= 6; ++i)
      for (int j = -6; j <= 6; ++j) {
        const std::int64_t qx = 2 * i - j, qy = i + 2 * j;
        best = std::min(best, (p[0] - qx) * (p[0] - qx) + (p[1] - qy) * (p[1] - qy));
      }
    s += best;
  }
  CHECK(side_excess(lab).first == Rational(s, 2 * static_cast<std::int64_t>(v0.size())));
  CHECK_THROWS_AS(solve_labeling(sys, Rational(0), Rational(0)), InputError);
  CHECK_THROWS_AS(solve_labeling(sys, Rational(-1), Rational(1)), InputError);
}

TEST_CASE("structural properties hold across systems") {
  const std::vector<SublatticeSystem> systems = {
      z2_system(),
      build_system(Lattice::zn(1), std::int64_t{3}, std::int64_t{5}),
      build_system(Lattice::a2(), EisensteinInt{2, 1}, EisensteinInt{3, 1}),
      build_system(Lattice::zn(4), Quaternion::lipschitz(1, 1, 1, 0), Quaternion::lipschitz(2, 1, 0, 0)),
  };
  for (const auto& sys : systems) {
    if (!is_clean(sys.product)) continue;
    const Labeling lab = solve_labeling(sys, Rational(9, 5), Rational(1));
    for (const auto& c : check_properties(sys, lab)) CHECK_MESSAGE(c.ok, c.name, " ", c.detail);
  }
}

TEST_CASE("equal-cost optima and their mixtures") {
  const SublatticeSystem sys = build_system(Lattice::zn(1), std::int64_t{3}, std::int64_t{5});
  const auto optima = equal_cost_labelings(sys, Rational(1), Rational(1), 50);
  REQUIRE(!optima.empty());
  for (const auto& o : optima) CHECK(o.total_cost() == optima.front().total_cost());
  const auto [lo, hi] = extremal_optima(optima);
  CHECK(side_excess(lo).first <= side_excess(hi).first);
  const MixedLabelingReport mix = mix_labelings(lo, hi, 0.25);
  CHECK(mix.d1 == doctest::Approx(0.25 * to_double(mix.d1_a) + 0.75 * to_double(mix.d1_b)));
  CHECK(mix.d2 == doctest::Approx(0.25 * to_double(mix.d2_a) + 0.75 * to_double(mix.d2_b)));
  // Equal cost: gamma1 d1 + gamma2 d2 is the same at both ends.
  CHECK(mix.d1_a + mix.d2_a == mix.d1_b + mix.d2_b);
  CHECK_THROWS_AS(mix_labelings(lo, hi, 1.5), InputError);
  const Labeling other = solve_labeling(sys, Rational(4), Rational(1));
  if (other.total_cost() != lo.total_cost()) CHECK_THROWS_AS(mix_labelings(lo, other, 0.5), InputError);
}

TEST_CASE("serial and parallel cost matrices agree") {
  const SublatticeSystem sys = build_system(Lattice::zn(2), GaussianInt{2, 1}, GaussianInt{6, 3});
  const EdgeSets sets = build_edge_sets(sys);
  const IntWeights w = integer_weights(Rational(9, 5), Rational(1));
  CHECK(build_cost_matrix(sets, sys.base.form(), w, Execution::Serial).c ==
        build_cost_matrix(sets, sys.base.form(), w, Execution::Parallel).c);
}
