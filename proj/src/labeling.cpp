#include "mdlvq/labeling.hpp"

#include <algorithm>
#include <set>

#include "mdlvq/error.hpp"

namespace mdlvq {

namespace {

const Sublattice& side_lattice(const SublatticeSystem& sys, int side) {
  if (side == 1) return sys.sub1;
  if (side == 2) return sys.sub2;
  throw InputError("side must be 1 or 2");
}

// point + the Voronoi-reduced offset of each coset rep of the other sublattice.
std::vector<Coeffs> neighbors(const Sublattice& product, const std::vector<Coeffs>& reps, const Coeffs& point) {
  std::vector<Coeffs> out;
  out.reserve(reps.size());
  for (const auto& c : reps) {
    const Coeffs r = c - point;
    const auto cl = product.closest(r);
    if (cl.tie)
      throw NotCleanError("point (" + format_coeffs(r - cl.point, product.dim(), ',') +
                          ") is equidistant from two product-sublattice points");
    out.push_back(point + r - cl.point);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Coeffs> sorted(std::vector<Coeffs> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Rational normalized(const GramForm& form, const Coeffs& v) { return form.normalized(form.norm(v)); }

}  // namespace

std::pair<std::vector<Coeffs>, std::vector<Coeffs>> build_P_sets(const SublatticeSystem& sys) {
  return {sorted(discrete_voronoi(sys.product, &sys.sub1)), sorted(discrete_voronoi(sys.product, &sys.sub2))};
}

std::vector<Coeffs> neighbor_list(const SublatticeSystem& sys, int side, const Coeffs& point) {
  const Sublattice& own = side_lattice(sys, side);
  const Sublattice& other = side_lattice(sys, 3 - side);
  const auto cl = sys.product.closest(point);
  if (!own.contains(point) || cl.tie || cl.point != Coeffs{})
    throw InputError("neighbor_list: (" + format_coeffs(point, sys.base.dim(), ',') + ") is not in P" +
                     std::to_string(side));
  return neighbors(sys.product, quotient_reps(other, sys.product), point);
}

std::pair<std::int64_t, Coeffs> edge_key(const Sublattice& domain, const Coeffs& lam1, const Coeffs& lam2) {
  return {domain.coset_id(lam1), lam2 - lam1};
}

EdgeSets build_edge_sets(const SublatticeSystem& sys, bool use_lcm) {
  EdgeSets sets;
  if (use_lcm) {
    if (!sys.lcm_sub) throw UnsupportedError("the system has no lcm sublattice");
    sets.domain = *sys.lcm_sub;
    sets.reduced = true;
  } else {
    sets.domain = sys.product;
  }
  const Sublattice& d = sets.domain;
  sets.voronoi = sorted(discrete_voronoi(d));
  sets.p1 = sorted(discrete_voronoi(d, &sys.sub1));
  sets.p2 = sorted(discrete_voronoi(d, &sys.sub2));
  const auto reps1 = quotient_reps(sys.sub1, sys.product);
  const auto reps2 = quotient_reps(sys.sub2, sys.product);
  for (const auto& p : sets.p1) sets.l1.push_back(neighbors(sys.product, reps2, p));
  for (const auto& p : sets.p2) sets.l2.push_back(neighbors(sys.product, reps1, p));

  std::set<std::pair<std::int64_t, Coeffs>> from_p1, from_p2;
  for (std::size_t i = 0; i < sets.p1.size(); ++i)
    for (const auto& lam2 : sets.l1[i]) {
      if (!from_p1.insert(edge_key(d, sets.p1[i], lam2)).second)
        throw ConstructionError("two edges from P1 fall in the same class");
      sets.classes.push_back(Edge{sets.p1[i], lam2, 0});
    }
  for (std::size_t i = 0; i < sets.p2.size(); ++i)
    for (const auto& lam1 : sets.l2[i]) from_p2.insert(edge_key(d, lam1, sets.p2[i]));
  if (from_p1 != from_p2) throw ConstructionError("edge classes built from P1 and from P2 differ");
  if (sets.classes.size() != sets.voronoi.size())
    throw ConstructionError("edge class count " + std::to_string(sets.classes.size()) + " differs from |V0| = " +
                            std::to_string(sets.voronoi.size()));
  std::sort(sets.classes.begin(), sets.classes.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.lam1, a.lam2) < std::tie(b.lam1, b.lam2); });
  for (std::size_t i = 0; i < sets.classes.size(); ++i) sets.classes[i].coset_id = static_cast<std::int64_t>(i);
  return sets;
}

std::vector<Edge> edge_cosets(const SublatticeSystem& sys) { return build_edge_sets(sys, false).classes; }

IntWeights integer_weights(const Rational& gamma1, const Rational& gamma2) {
  if (gamma1 < Rational(0) || gamma2 < Rational(0)) throw InputError("weights must be nonnegative");
  if (gamma1 == Rational(0) && gamma2 == Rational(0)) throw InputError("weights must not both be zero");
  const std::int64_t den = lcm64(gamma1.denominator(), gamma2.denominator());
  std::int64_t g1 = gamma1.numerator() * (den / gamma1.denominator());
  std::int64_t g2 = gamma2.numerator() * (den / gamma2.denominator());
  const std::int64_t g = gcd64(g1, g2);
  IntWeights w;
  w.g1 = g1 / g;
  w.g2 = g2 / g;
  w.unit = Rational(g, den);
  return w;
}

Rational edge_cost(const GramForm& form, const Coeffs& lam, const Edge& e, const Rational& gamma1,
                   const Rational& gamma2) {
  if (gamma1 < Rational(0) || gamma2 < Rational(0)) throw InputError("weights must be nonnegative");
  if (gamma1 == Rational(0) && gamma2 == Rational(0)) throw InputError("weights must not both be zero");
  return gamma1 * normalized(form, lam - e.lam1) + gamma2 * normalized(form, lam - e.lam2);
}

GuideTerms guide_terms(const GramForm& form, const Coeffs& lam, const Edge& e, const Rational& gamma1,
                       const Rational& gamma2) {
  const IntWeights w = integer_weights(gamma1, gamma2);
  const Rational total = gamma1 + gamma2;
  GuideTerms t;
  t.edge_term = gamma1 * gamma2 / total * normalized(form, e.lam2 - e.lam1);
  const std::int64_t s = w.sum();
  const Coeffs y = s * lam - w.g1 * e.lam1 - w.g2 * e.lam2;
  t.mean_term = total * normalized(form, y) / Rational(s * s);
  return t;
}

Coeffs best_shift(const Sublattice& domain, const Coeffs& lam, const Edge& e, const IntWeights& w) {
  const std::int64_t s = w.sum();
  const Coeffs y = s * lam - w.g1 * e.lam1 - w.g2 * e.lam2;
  return domain.closest(y, s).point;
}

CostMatrix build_cost_matrix(const EdgeSets& sets, const GramForm& form, const IntWeights& w, Execution exec) {
  const int n = static_cast<int>(sets.voronoi.size());
  if (sets.classes.size() != sets.voronoi.size()) throw ConstructionError("cost matrix is not square");
  CostMatrix cost(n);
  for_each_index(static_cast<std::size_t>(n), exec, [&](std::size_t i) {
    const Coeffs& lam = sets.voronoi[i];
    for (int j = 0; j < n; ++j) {
      const Edge& e = sets.classes[static_cast<std::size_t>(j)];
      const Coeffs d = best_shift(sets.domain, lam, e, w);
      cost(static_cast<int>(i), j) = w.g1 * form.norm(lam - e.lam1 - d) + w.g2 * form.norm(lam - e.lam2 - d);
    }
  });
  return cost;
}

Rational Labeling::total_cost() const {
  const GramForm& form = system.base.form();
  return weights.unit * Rational(cost_num, form.den * form.dim);
}

Rational Labeling::mean_cost() const { return total_cost() / Rational(static_cast<std::int64_t>(table.size())); }

void Labeling::index() {
  by_coset.clear();
  by_edge.clear();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!by_coset.emplace(domain.coset_id(table[i].point), i).second)
      throw ConstructionError("two table points share a coset of the domain");
    if (!by_edge.emplace(edge_key(domain, table[i].lam1, table[i].lam2), i).second)
      throw ConstructionError("labeling is not injective: two points share an edge class");
  }
}

std::pair<std::size_t, Coeffs> Labeling::locate(const Coeffs& point) const {
  const auto it = by_coset.find(domain.coset_id(point));
  if (it == by_coset.end()) throw CorruptionError("labeling table has no entry for this coset");
  return {it->second, point - table[it->second].point};
}

std::pair<Coeffs, Coeffs> Labeling::label(const Coeffs& point) const {
  const auto [i, shift] = locate(point);
  return {table[i].lam1 + shift, table[i].lam2 + shift};
}

Coeffs Labeling::unlabel(const Coeffs& lam1, const Coeffs& lam2) const {
  const auto it = by_edge.find(edge_key(domain, lam1, lam2));
  if (it == by_edge.end()) throw CorruptionError("no lattice point carries this label pair");
  const LabelEntry& e = table[it->second];
  return e.point + (lam1 - e.lam1);
}

Labeling labeling_from_assignment(const SublatticeSystem& sys, const EdgeSets& sets, const IntWeights& w,
                                  const Rational& gamma1, const Rational& gamma2,
                                  const std::vector<int>& col_of_row) {
  Labeling lab;
  lab.system = sys;
  lab.gamma1 = gamma1;
  lab.gamma2 = gamma2;
  lab.weights = w;
  lab.domain = sets.domain;
  lab.reduced = sets.reduced;
  const GramForm& form = sys.base.form();
  for (std::size_t i = 0; i < sets.voronoi.size(); ++i) {
    const auto j = static_cast<std::size_t>(col_of_row[i]);
    const Edge& e = sets.classes[j];
    const Coeffs& lam = sets.voronoi[i];
    const Coeffs d = best_shift(sets.domain, lam, e, w);
    LabelEntry entry{lam, e.lam1 + d, e.lam2 + d, static_cast<std::int64_t>(j), 0};
    entry.cost_num = w.g1 * form.norm(lam - entry.lam1) + w.g2 * form.norm(lam - entry.lam2);
    lab.cost_num += entry.cost_num;
    lab.table.push_back(entry);
  }
  lab.index();
  return lab;
}

Labeling solve_labeling(const SublatticeSystem& sys, const Rational& gamma1, const Rational& gamma2,
                        LabelOptions options) {
  const IntWeights w = integer_weights(gamma1, gamma2);
  const EdgeSets sets = build_edge_sets(sys, options.use_lcm);
  const CostMatrix cost = build_cost_matrix(sets, sys.base.form(), w, options.exec);
  Assignment opt = solve_assignment(cost);
  if (options.tie_break == TieBreak::Lexicographic) opt = lexicographic_optimum(cost, opt);
  Labeling lab = labeling_from_assignment(sys, sets, w, gamma1, gamma2, opt.col_of_row);
  if (lab.cost_num != opt.cost) throw ConstructionError("labeling cost differs from the assignment optimum");
  return lab;
}

Labeling lcm_reduce(const SublatticeSystem& sys, const Labeling& on_lcm) {
  if (!sys.lcm_sub) throw UnsupportedError("the system has no lcm sublattice");
  if (!on_lcm.reduced || !on_lcm.domain.same_lattice(*sys.lcm_sub))
    throw InputError("lcm_reduce expects a labeling on the lcm domain");
  Labeling lab;
  lab.system = sys;
  lab.gamma1 = on_lcm.gamma1;
  lab.gamma2 = on_lcm.gamma2;
  lab.weights = on_lcm.weights;
  lab.domain = sys.product;
  const GramForm& form = sys.base.form();
  for (const auto& v : sorted(discrete_voronoi(sys.product))) {
    const auto [i, shift] = on_lcm.locate(v);
    const LabelEntry& src = on_lcm.table[i];
    LabelEntry entry{v, src.lam1 + shift, src.lam2 + shift, src.edge_id, 0};
    entry.cost_num = lab.weights.g1 * form.norm(v - entry.lam1) + lab.weights.g2 * form.norm(v - entry.lam2);
    lab.cost_num += entry.cost_num;
    lab.table.push_back(entry);
  }
  lab.index();
  return lab;
}

std::pair<Rational, Rational> side_excess(const Labeling& lab) {
  const GramForm& form = lab.system.base.form();
  std::int64_t s1 = 0, s2 = 0;
  for (const auto& e : lab.table) {
    s1 += form.norm(e.point - e.lam1);
    s2 += form.norm(e.point - e.lam2);
  }
  const auto n = static_cast<std::int64_t>(lab.table.size());
  return {form.normalized(s1) / Rational(n), form.normalized(s2) / Rational(n)};
}

std::vector<Labeling> equal_cost_labelings(const SublatticeSystem& sys, const Rational& gamma1,
                                           const Rational& gamma2, std::size_t limit, LabelOptions options) {
  const IntWeights w = integer_weights(gamma1, gamma2);
  const EdgeSets sets = build_edge_sets(sys, options.use_lcm);
  const CostMatrix cost = build_cost_matrix(sets, sys.base.form(), w, options.exec);
  Assignment opt = solve_assignment(cost);
  if (options.tie_break == TieBreak::Lexicographic) opt = lexicographic_optimum(cost, opt);
  std::vector<Labeling> out;
  for (const auto& cols : enumerate_optimal(cost, opt, limit))
    out.push_back(labeling_from_assignment(sys, sets, w, gamma1, gamma2, cols));
  return out;
}

MixedLabelingReport mix_labelings(const Labeling& a, const Labeling& b, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("mixing proportion must lie in [0, 1]");
  if (!a.domain.same_lattice(b.domain) || !a.system.sub1.same_lattice(b.system.sub1) ||
      !a.system.sub2.same_lattice(b.system.sub2))
    throw InputError("labelings belong to different systems");
  if (a.total_cost() != b.total_cost()) throw InputError("labelings to mix must have equal cost");
  MixedLabelingReport r;
  r.alpha = alpha;
  std::tie(r.d1_a, r.d2_a) = side_excess(a);
  std::tie(r.d1_b, r.d2_b) = side_excess(b);
  r.d1 = alpha * to_double(r.d1_a) + (1.0 - alpha) * to_double(r.d1_b);
  r.d2 = alpha * to_double(r.d2_a) + (1.0 - alpha) * to_double(r.d2_b);
  return r;
}

std::pair<Labeling, Labeling> extremal_optima(const std::vector<Labeling>& optima) {
  if (optima.empty()) throw InputError("no labelings given");
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 1; i < optima.size(); ++i) {
    const Rational d = side_excess(optima[i]).first;
    if (d < side_excess(optima[lo]).first) lo = i;
    if (d > side_excess(optima[hi]).first) hi = i;
  }
  return {optima[lo], optima[hi]};
}

std::vector<PropertyCheck> check_properties(const SublatticeSystem& sys, const Labeling& lab) {
  std::vector<PropertyCheck> out;
  const EdgeSets sets = build_edge_sets(sys, lab.reduced);
  const int L = sys.base.dim();
  auto fmt = [&](const Coeffs& c) { return "(" + format_coeffs(c, L, ',') + ")"; };

  auto distinct_cosets = [&](const std::vector<Coeffs>& pts) {
    std::set<std::int64_t> ids;
    for (const auto& p : pts) ids.insert(sys.product.coset_id(p));
    return ids.size() == pts.size();
  };
  {
    PropertyCheck c{"neighbour lists: sizes N1/N2 and distinct product cosets", true, ""};
    for (std::size_t i = 0; i < sets.p1.size() && c.ok; ++i)
      if (static_cast<std::int64_t>(sets.l1[i].size()) != sys.n1 || !distinct_cosets(sets.l1[i])) {
        c.ok = false;
        c.detail = "L1" + fmt(sets.p1[i]);
      }
    for (std::size_t i = 0; i < sets.p2.size() && c.ok; ++i)
      if (static_cast<std::int64_t>(sets.l2[i].size()) != sys.n2 || !distinct_cosets(sets.l2[i])) {
        c.ok = false;
        c.detail = "L2" + fmt(sets.p2[i]);
      }
    out.push_back(c);
  }
  {
    PropertyCheck c{"neighbour lists: each member nearest in its product coset", true, ""};
    auto nearest = [&](const Coeffs& from, const Coeffs& to) {
      const auto cl = sys.product.closest(to - from);
      return !cl.tie && cl.point == Coeffs{};
    };
    for (std::size_t i = 0; i < sets.p1.size() && c.ok; ++i)
      for (const auto& m : sets.l1[i])
        if (!nearest(sets.p1[i], m)) {
          c.ok = false;
          c.detail = "L1" + fmt(sets.p1[i]) + " member " + fmt(m);
        }
    for (std::size_t i = 0; i < sets.p2.size() && c.ok; ++i)
      for (const auto& m : sets.l2[i])
        if (!nearest(sets.p2[i], m)) {
          c.ok = false;
          c.detail = "L2" + fmt(sets.p2[i]) + " member " + fmt(m);
        }
    out.push_back(c);
  }
  {
    PropertyCheck c{"neighbour lists: lam2 in L1(lam1) iff lam1 in L2(lam2)", true, ""};
    for (std::size_t i = 0; i < sets.p1.size() && c.ok; ++i)
      for (std::size_t j = 0; j < sets.p2.size() && c.ok; ++j) {
        const bool a = std::binary_search(sets.l1[i].begin(), sets.l1[i].end(), sets.p2[j]);
        const bool b = std::binary_search(sets.l2[j].begin(), sets.l2[j].end(), sets.p1[i]);
        if (a != b) {
          c.ok = false;
          c.detail = fmt(sets.p1[i]) + " / " + fmt(sets.p2[j]);
        }
      }
    out.push_back(c);
  }
  {
    PropertyCheck c{"usage counts N1 and N2 per fundamental set", true, ""};
    std::map<std::int64_t, std::int64_t> use1, use2;
    for (const auto& e : lab.table) {
      ++use1[lab.domain.coset_id(e.lam1)];
      ++use2[lab.domain.coset_id(e.lam2)];
    }
    const auto n = static_cast<std::int64_t>(lab.table.size());
    if (static_cast<std::int64_t>(use1.size()) * sys.n1 != n || static_cast<std::int64_t>(use2.size()) * sys.n2 != n) {
      c.ok = false;
      c.detail = "distinct labels " + std::to_string(use1.size()) + " / " + std::to_string(use2.size());
    }
    for (const auto& [id, k] : use1)
      if (k != sys.n1) c.ok = false;
    for (const auto& [id, k] : use2)
      if (k != sys.n2) c.ok = false;
    out.push_back(c);
  }
  {
    PropertyCheck c{"edge classes: |E0| = |V0| and both constructions agree", true, ""};
    const auto n = static_cast<std::int64_t>(sets.voronoi.size());
    if (static_cast<std::int64_t>(sets.classes.size()) != n || n != lab.domain.index() ||
        (!lab.reduced && n != sys.n1 * sys.n2)) {
      c.ok = false;
      c.detail = std::to_string(sets.classes.size()) + " classes for " + std::to_string(n) + " points";
    }
    out.push_back(c);
  }
  {
    PropertyCheck c{"labeling is injective", true, ""};
    if (lab.by_edge.size() != lab.table.size()) {
      c.ok = false;
      c.detail = std::to_string(lab.by_edge.size()) + " distinct classes for " + std::to_string(lab.table.size()) +
                 " points";
    }
    for (const auto& e : lab.table)
      if (c.ok && lab.unlabel(e.lam1, e.lam2) != e.point) {
        c.ok = false;
        c.detail = "unlabel fails at " + fmt(e.point);
      }
    out.push_back(c);
  }
  return out;
}

SideSums side_sums(const Labeling& lab) {
  const GramForm& form = lab.system.base.form();
  const IntWeights& w = lab.weights;
  const std::int64_t s = w.sum();
  std::int64_t direct = 0, approx = 0, edge = 0, mean = 0;
  for (const auto& e : lab.table) {
    direct += form.norm(e.point - e.lam1);
    approx += form.norm(s * e.lam1 - w.g1 * e.lam1 - w.g2 * e.lam2);
    edge += form.norm(e.lam1 - e.lam2);
    mean += form.norm(s * e.point - w.g1 * e.lam1 - w.g2 * e.lam2);
  }
  const auto n = Rational(static_cast<std::int64_t>(lab.table.size()));
  SideSums out;
  out.direct = form.normalized(direct);
  out.approx = form.normalized(approx) / Rational(s * s);
  out.edge_form = Rational(w.g2 * w.g2, s * s) * form.normalized(edge);
  if (out.approx != Rational(0)) out.relative_deviation = abs(out.direct - out.approx) / out.approx;
  const Rational g1 = lab.gamma1, g2 = lab.gamma2;
  out.js1 = g1 * g2 / (g1 + g2) * form.normalized(edge) / n;
  out.js2 = (g1 + g2) * form.normalized(mean) / Rational(s * s) / n;
  return out;
}

}  // namespace mdlvq
