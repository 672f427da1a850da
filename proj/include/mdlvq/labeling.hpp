#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mdlvq/assignment.hpp"
#include "mdlvq/parallel.hpp"
#include "mdlvq/rational.hpp"
#include "mdlvq/sublattice.hpp"

namespace mdlvq {

/// A label pair (lam1, lam2) in sub1 x sub2. `coset_id` numbers the edge
/// class modulo the labeling domain.
struct Edge {
  Coeffs lam1{};
  Coeffs lam2{};
  std::int64_t coset_id = 0;
};

/// Everything the assignment step needs for one labeling domain D, which is
/// the product sublattice or the lcm sublattice.
struct EdgeSets {
  Sublattice domain;
  bool reduced = false;
  std::vector<Coeffs> voronoi;  // V_{base:D}(0), sorted
  std::vector<Coeffs> p1, p2;   // voronoi points in sub1 / sub2, sorted
  std::vector<std::vector<Coeffs>> l1, l2;  // neighbour lists of p1[i] / p2[i]
  std::vector<Edge> classes;    // one per class, lam1 in p1, sorted by (lam1, lam2)
};

/// P1 = V0 n sub1 and P2 = V0 n sub2 for the product sublattice.
std::pair<std::vector<Coeffs>, std::vector<Coeffs>> build_P_sets(const SublatticeSystem& sys);

/// L_side(point): the sub_{3-side} points inside V0 + point, V0 taken for the
/// product sublattice. `point` must lie in sub_side and in V0.
std::vector<Coeffs> neighbor_list(const SublatticeSystem& sys, int side, const Coeffs& point);

/// Edge classes for the product domain (use_lcm false) or the lcm domain.
/// Checks that the classes built from P1 and from P2 coincide.
EdgeSets build_edge_sets(const SublatticeSystem& sys, bool use_lcm = false);
std::vector<Edge> edge_cosets(const SublatticeSystem& sys);

/// Class key of an edge modulo D: the coset of lam1 and the difference.
std::pair<std::int64_t, Coeffs> edge_key(const Sublattice& domain, const Coeffs& lam1, const Coeffs& lam2);

/// Weights as coprime integers: gamma_i = unit * g_i.
struct IntWeights {
  std::int64_t g1 = 1, g2 = 1;
  Rational unit{1};
  std::int64_t sum() const { return g1 + g2; }
};
IntWeights integer_weights(const Rational& gamma1, const Rational& gamma2);

/// gamma1 ||lam - lam1||^2 + gamma2 ||lam - lam2||^2, dimension-normalised.
Rational edge_cost(const GramForm& form, const Coeffs& lam, const Edge& e, const Rational& gamma1,
                   const Rational& gamma2);
/// The same summand split into the edge-length term and the weighted-mean term.
struct GuideTerms {
  Rational edge_term{0};
  Rational mean_term{0};
};
GuideTerms guide_terms(const GramForm& form, const Coeffs& lam, const Edge& e, const Rational& gamma1,
                       const Rational& gamma2);

/// Integer costs g1 |lam - lam1 - d|^2 + g2 |lam - lam2 - d|^2 (Gram numerators),
/// minimised over shifts d in the domain. Rows follow sets.voronoi, columns
/// sets.classes.
CostMatrix build_cost_matrix(const EdgeSets& sets, const GramForm& form, const IntWeights& w,
                             Execution exec = Execution::Parallel);
/// Best shift of an edge class for one point.
Coeffs best_shift(const Sublattice& domain, const Coeffs& lam, const Edge& e, const IntWeights& w);

struct LabelEntry {
  Coeffs point{};
  Coeffs lam1{};
  Coeffs lam2{};
  std::int64_t edge_id = 0;
  std::int64_t cost_num = 0;  // g1 |.|^2 + g2 |.|^2 in Gram numerators
};

/// alpha on one fundamental set of the domain, extended by
/// alpha(lam + d) = alpha(lam) + d for d in the domain.
struct Labeling {
  SublatticeSystem system;
  Rational gamma1{1}, gamma2{1};
  IntWeights weights;
  Sublattice domain;
  bool reduced = false;
  std::vector<LabelEntry> table;  // sorted by point
  std::int64_t cost_num = 0;
  /// Sum over the table of the dimension-normalised summand.
  Rational total_cost() const;
  /// total_cost / table size.
  Rational mean_cost() const;

  /// Entry index for the coset of `point` modulo the domain, and the shift.
  std::pair<std::size_t, Coeffs> locate(const Coeffs& point) const;
  std::pair<Coeffs, Coeffs> label(const Coeffs& point) const;
  /// Inverse of `label`; throws CorruptionError when no point has this label.
  Coeffs unlabel(const Coeffs& lam1, const Coeffs& lam2) const;

  void index();
  std::unordered_map<std::int64_t, std::size_t> by_coset;
  std::map<std::pair<std::int64_t, Coeffs>, std::size_t> by_edge;
};

enum class TieBreak { Lexicographic, Solver };

struct LabelOptions {
  bool use_lcm = false;
  TieBreak tie_break = TieBreak::Lexicographic;
  Execution exec = Execution::Parallel;
};

Labeling solve_labeling(const SublatticeSystem& sys, const Rational& gamma1, const Rational& gamma2,
                        LabelOptions options = {});
/// Same, from prebuilt edge sets and cost matrix.
Labeling labeling_from_assignment(const SublatticeSystem& sys, const EdgeSets& sets, const IntWeights& w,
                                  const Rational& gamma1, const Rational& gamma2, const std::vector<int>& col_of_row);

/// Expands a labeling on the lcm domain to the product domain.
Labeling lcm_reduce(const SublatticeSystem& sys, const Labeling& on_lcm);

/// Mean excess (1/|V|) sum ||lam - alpha_i(lam)||^2 for i = 1, 2.
std::pair<Rational, Rational> side_excess(const Labeling& lab);

/// Up to `limit` optimal labelings with equal cost, the lexicographic one first.
std::vector<Labeling> equal_cost_labelings(const SublatticeSystem& sys, const Rational& gamma1,
                                           const Rational& gamma2, std::size_t limit, LabelOptions options = {});

struct MixedLabelingReport {
  double alpha = 1.0;
  Rational d1_a{0}, d2_a{0}, d1_b{0}, d2_b{0};
  double d1 = 0.0, d2 = 0.0;  // excess side distortions of the mixture
};
/// Uses `a` in proportion alpha and `b` otherwise. Costs must be equal.
MixedLabelingReport mix_labelings(const Labeling& a, const Labeling& b, double alpha);

/// Among equal-cost optima: the one with smallest d1 excess and the one with largest.
std::pair<Labeling, Labeling> extremal_optima(const std::vector<Labeling>& optima);

struct PropertyCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};
/// Structural properties of the edge sets and the labeling.
std::vector<PropertyCheck> check_properties(const SublatticeSystem& sys, const Labeling& lab);

/// Sums over the labeled set: sum ||lam - lam1||^2 versus sum ||lam1 - mean||^2,
/// with mean the weighted mean of the two labels.
struct SideSums {
  Rational direct{0};       // sum ||lam - lam1||^2
  Rational approx{0};       // sum ||lam1 - mean||^2
  Rational edge_form{0};    // g2^2/(g1+g2)^2 sum ||lam1 - lam2||^2
  Rational relative_deviation{0};
  Rational js1{0}, js2{0};  // per point
};
SideSums side_sums(const Labeling& lab);

}  // namespace mdlvq
