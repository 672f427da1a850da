#include "mdlvq/sublattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mdlvq/error.hpp"

namespace mdlvq {

namespace {

std::vector<std::int64_t> hnf_key(const IntMatrix& h) {
  std::vector<std::int64_t> key;
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j) key.push_back(h(i, j));
  return key;
}

IntMatrix stack(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() + b.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
  return m;
}

IntMatrix gram_numerators(const GramForm& form) {
  IntMatrix a(form.dim, form.dim);
  for (int i = 0; i < form.dim; ++i)
    for (int j = 0; j < form.dim; ++j) a(i, j) = form.g[static_cast<std::size_t>(i * kMaxDim + j)];
  return a;
}

std::int64_t isqrt(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

Sublattice::Sublattice(const Lattice& base, IntMatrix basis, std::optional<Rational> scale_sq)
    : base_(std::make_shared<const Lattice>(base)),
      form_(base.form()),
      basis_(std::move(basis)),
      scale_sq_(scale_sq) {
  const int L = form_.dim;
  if (basis_.rows() != L || basis_.cols() != L) throw InputError("sublattice basis has wrong shape");
  const auto hf = hermite_form(basis_);
  if (hf.rank != L) throw InputError("sublattice basis is not full rank");
  hnf_ = hf.h;
  index_ = 1;
  for (int i = 0; i < L; ++i) index_ *= hnf_(i, i);
  if (scale_sq_) {
    const IntMatrix a = gram_numerators(form_);
    const IntMatrix uau = basis_ * a * basis_.transpose();
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j)
        if (Rational(uau(i, j)) != *scale_sq_ * Rational(a(i, j)))
          throw ConstructionError("sublattice basis is not a similarity");
    Rational pow(1);
    for (int i = 0; i < L; ++i) pow *= *scale_sq_;
    if (Rational(index_) * Rational(index_) != pow) throw ConstructionError("similarity index mismatch");
    for (const auto& r : base.relevant_vectors()) relevant_.push_back(row_times(r, basis_));
    for (const auto& v : relevant_) {
      relevant_g_.push_back(form_.apply(v));
      relevant_norm_.push_back(form_.norm(v));
    }
  }
  const RatMatrix inv = inverse(to_rational(basis_));
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) inverse_[static_cast<std::size_t>(i * kMaxDim + j)] = to_double(inv(i, j));
}

std::optional<Similarity> Sublattice::similarity() const {
  if (!scale_sq_ || determinant(basis_) <= 0) return std::nullopt;
  return Similarity{basis_, *scale_sq_};
}

Coeffs Sublattice::reduce(const Coeffs& v) const {
  Coeffs r = v;
  for (int i = 0; i < form_.dim; ++i) {
    const auto q = floor_div(r[i], hnf_(i, i));
    if (q == 0) continue;
    for (int j = i; j < form_.dim; ++j) r[j] -= q * hnf_(i, j);
  }
  return r;
}

bool Sublattice::contains(const Coeffs& v) const { return reduce(v) == Coeffs{}; }

bool Sublattice::contains(const Sublattice& other) const {
  for (int i = 0; i < other.dim(); ++i)
    if (!contains(row_coeffs(other.basis(), i))) return false;
  return true;
}

std::int64_t Sublattice::coset_id(const Coeffs& v) const {
  const Coeffs r = reduce(v);
  std::int64_t id = 0;
  for (int i = 0; i < form_.dim; ++i) id = id * hnf_(i, i) + r[i];
  return id;
}

Coeffs Sublattice::coset_rep(std::int64_t id) const {
  if (id < 0 || id >= index_) throw InputError("coset id out of range");
  Coeffs r{};
  for (int i = form_.dim - 1; i >= 0; --i) {
    r[i] = id % hnf_(i, i);
    id /= hnf_(i, i);
  }
  return r;
}

Sublattice::Closest Sublattice::closest(const Coeffs& y, std::int64_t s) const {
  if (!scale_sq_) throw UnsupportedError("nearest-point queries need a similar sublattice");
  const int L = form_.dim;
  Coeffs c{};
  for (int j = 0; j < L; ++j) {
    double t = 0.0;
    for (int i = 0; i < L; ++i) t += static_cast<double>(y[i]) * inverse_[static_cast<std::size_t>(i * kMaxDim + j)];
    c[j] = std::llround(t / static_cast<double>(s));
  }
  Closest out;
  out.point = row_times(c, basis_);
  Coeffs w = y;
  for (int i = 0; i < L; ++i) w[i] -= s * out.point[i];
  // Iterative slicer: step along any relevant vector that brings y/s closer.
  const std::size_t n = relevant_.size();
  while (true) {
    std::int64_t best_gain = 0;
    std::size_t best = n;
    bool tie = false;
    for (std::size_t k = 0; k < n; ++k) {
      std::int64_t ip = 0;
      for (int i = 0; i < L; ++i) ip += w[i] * relevant_g_[k][i];
      const std::int64_t gain = 2 * ip - s * relevant_norm_[k];
      if (gain > best_gain) {
        best_gain = gain;
        best = k;
      } else if (gain == 0) {
        tie = true;
      }
    }
    if (best == n) {
      out.tie = tie;
      return out;
    }
    for (int i = 0; i < L; ++i) {
      out.point[i] += relevant_[best][i];
      w[i] -= s * relevant_[best][i];
    }
  }
}

Sublattice whole_lattice(const Lattice& base) {
  return Sublattice(base, IntMatrix::identity(base.dim()), Rational(1));
}

RingKind ring_for(const Lattice& base) {
  switch (base.kind()) {
    case LatticeKind::A2: return RingKind::Eisenstein;
    case LatticeKind::D4: return RingKind::Quaternion;
    case LatticeKind::Zn:
      if (base.dim() == 2) return RingKind::Gaussian;
      if (base.dim() == 4) return RingKind::Quaternion;
      return RingKind::Integer;
  }
  return RingKind::Integer;
}

namespace {

// Promote plain integers to the lattice's ring.
RingElement promote(const RingElement& xi, RingKind ring) {
  if (ring_of(xi) == ring) return xi;
  if (ring_of(xi) != RingKind::Integer) throw InputError("ring element does not match the base lattice");
  const auto k = std::get<std::int64_t>(xi);
  switch (ring) {
    case RingKind::Gaussian: return GaussianInt{k, 0};
    case RingKind::Eisenstein: return EisensteinInt{k, 0};
    case RingKind::Quaternion: return Quaternion::lipschitz(k, 0, 0, 0);
    case RingKind::Integer: return k;
  }
  return xi;
}

}  // namespace

Similarity similarity_for(const Lattice& base, const RingElement& xi_in, Side side) {
  const RingElement xi = promote(xi_in, ring_for(base));
  if (element_norm(xi) == Rational(0)) throw InputError("ring element is zero");
  const int L = base.dim();
  Similarity sim;
  switch (ring_for(base)) {
    case RingKind::Integer: {
      const auto k = std::llabs(std::get<std::int64_t>(xi));
      sim.u = k * IntMatrix::identity(L);
      sim.scale_sq = Rational(k * k);
      break;
    }
    case RingKind::Gaussian: {
      const auto g = std::get<GaussianInt>(xi);
      sim.u = IntMatrix(2, 2);
      sim.u(0, 0) = g.a;
      sim.u(0, 1) = g.b;
      sim.u(1, 0) = -g.b;
      sim.u(1, 1) = g.a;
      sim.scale_sq = Rational(g.norm());
      break;
    }
    case RingKind::Eisenstein: {
      const auto e = std::get<EisensteinInt>(xi);
      sim.u = IntMatrix(2, 2);
      sim.u(0, 0) = e.a;
      sim.u(0, 1) = e.b;
      sim.u(1, 0) = -e.b;
      sim.u(1, 1) = e.a - e.b;
      sim.scale_sq = Rational(e.norm());
      break;
    }
    case RingKind::Quaternion: {
      const auto& q = std::get<Quaternion>(xi);
      const RatMatrix g = *base.exact_generator();
      const RatMatrix m = side == Side::Left ? left_matrix(q) : right_matrix(q);
      const RatMatrix u = g * m * inverse(g);
      try {
        sim.u = to_integer(u);
      } catch (const InputError&) {
        throw InputError("quaternion " + format_element(xi) + " does not map " + to_string(base.kind()) +
                         " into itself");
      }
      sim.scale_sq = q.norm();
      break;
    }
  }
  check_similarity(base.form(), sim);
  return sim;
}

Sublattice similar_sublattice(const Lattice& base, const RingElement& xi, Side side) {
  const auto sim = similarity_for(base, xi, side);
  return Sublattice(base, sim.u, sim.scale_sq);
}

std::optional<Coeffs> find_tie(const Sublattice& coarse, const Sublattice* fine) {
  for (std::int64_t id = 0; id < coarse.index(); ++id) {
    const Coeffs rep = coarse.coset_rep(id);
    if (fine && !fine->contains(rep)) continue;
    const auto cl = coarse.closest(rep);
    if (cl.tie) return rep - cl.point;
  }
  return std::nullopt;
}

bool is_clean(const Sublattice& coarse, const Sublattice* fine) {
  if (fine && !fine->contains(coarse)) throw InputError("is_clean: coarse lattice is not inside the fine one");
  return !find_tie(coarse, fine).has_value();
}

std::vector<Coeffs> discrete_voronoi(const Sublattice& coarse, const Coeffs& center, const Sublattice* fine) {
  std::vector<Coeffs> out;
  out.reserve(static_cast<std::size_t>(coarse.index()));
  for (std::int64_t id = 0; id < coarse.index(); ++id) {
    const Coeffs rep = coarse.coset_rep(id);
    if (fine && !fine->contains(rep)) continue;
    const auto cl = coarse.closest(rep);
    if (cl.tie)
      throw NotCleanError("point (" + format_coeffs(rep - cl.point, coarse.dim(), ',') +
                          ") is equidistant from two sublattice points");
    out.push_back(rep - cl.point + center);
  }
  return out;
}

std::vector<Coeffs> discrete_voronoi(const Sublattice& coarse, const Sublattice* fine) {
  return discrete_voronoi(coarse, Coeffs{}, fine);
}

std::vector<Coeffs> quotient_reps(const Sublattice& fine, const Sublattice& coarse) {
  if (!fine.contains(coarse)) throw InputError("quotient_reps: coarse lattice is not inside the fine one");
  const int L = fine.dim();
  // Coarse basis in fine coordinates, then a box of reps from its Hermite form.
  const IntMatrix rel = to_integer(to_rational(coarse.basis()) * inverse(to_rational(fine.basis())));
  const IntMatrix h = hermite_form(rel).h;
  std::vector<Coeffs> out;
  Coeffs c{};
  while (true) {
    out.push_back(row_times(c, fine.basis()));
    int i = L - 1;
    while (i >= 0 && c[i] == h(i, i) - 1) {
      c[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++c[i];
  }
  return out;
}

Sublattice join(const Sublattice& a, const Sublattice& b) {
  const auto hf = hermite_form(stack(a.basis(), b.basis()));
  return Sublattice(a.base(), hf.h, std::nullopt);
}

Sublattice meet(const Sublattice& a, const Sublattice& b) {
  const int L = a.dim();
  const auto hf = hermite_form(stack(a.basis(), b.basis()));
  // Rows of T beyond the rank give x U_a + y U_b = 0, so x U_a lies in both.
  IntMatrix rows(L, L);
  for (int r = 0; r < L; ++r) {
    Coeffs x{};
    for (int i = 0; i < L; ++i) x[i] = hf.transform(hf.rank + r, i);
    const Coeffs v = row_times(x, a.basis());
    for (int j = 0; j < L; ++j) rows(r, j) = v[j];
  }
  const auto h = hermite_form(rows);
  return Sublattice(a.base(), h.h, std::nullopt);
}

std::vector<Coeffs> vectors_of_norm(const GramForm& form, std::int64_t norm_num) {
  const int L = form.dim;
  const RatMatrix inv = inverse(to_rational(gram_numerators(form)));
  std::array<std::int64_t, kMaxDim> bound{};
  for (int i = 0; i < L; ++i) {
    const Rational b = Rational(norm_num) * inv(i, i);
    bound[static_cast<std::size_t>(i)] = isqrt(b.numerator() / b.denominator()) + 1;
  }
  std::vector<Coeffs> out;
  Coeffs v{};
  for (int i = 0; i < L; ++i) v[i] = -bound[static_cast<std::size_t>(i)];
  while (true) {
    if (form.norm(v) == norm_num) out.push_back(v);
    int i = L - 1;
    while (i >= 0 && v[i] == bound[static_cast<std::size_t>(i)]) {
      v[i] = -bound[static_cast<std::size_t>(i)];
      --i;
    }
    if (i < 0) break;
    ++v[i];
  }
  return out;
}

std::vector<Sublattice> enumerate_similar_sublattices(const Lattice& base, std::int64_t m, bool proper_only,
                                                      std::size_t cap, Execution exec) {
  if (m < 1) throw InputError("scale must be positive");
  const GramForm& form = base.form();
  const int L = form.dim;
  const IntMatrix a = gram_numerators(form);
  std::map<std::int64_t, std::vector<Coeffs>> by_norm;
  for (int i = 0; i < L; ++i)
    if (!by_norm.count(m * a(i, i))) by_norm[m * a(i, i)] = vectors_of_norm(form, m * a(i, i));
  const auto& first = by_norm.at(m * a(0, 0));

  using Found = std::map<std::vector<std::int64_t>, IntMatrix>;
  std::vector<Found> found(first.size());
  std::vector<std::size_t> leaves(first.size(), 0);
  for_each_index(first.size(), exec, [&](std::size_t f) {
    std::vector<Coeffs> rows{first[f]};
    auto dfs = [&](auto&& self) -> void {
      const int r = static_cast<int>(rows.size());
      if (r == L) {
        if (++leaves[f] > cap) return;
        IntMatrix u(L, L);
        for (int i = 0; i < L; ++i)
          for (int j = 0; j < L; ++j) u(i, j) = rows[static_cast<std::size_t>(i)][j];
        const auto det = determinant(u);
        if (det == 0 || (proper_only && det < 0)) return;
        const auto key = hnf_key(hermite_form(u).h);
        found[f].try_emplace(key, u);
        return;
      }
      for (const auto& v : by_norm.at(m * a(r, r))) {
        bool ok = true;
        for (int i = 0; i < r && ok; ++i) ok = form.dot(rows[static_cast<std::size_t>(i)], v) == m * a(i, r);
        if (!ok) continue;
        rows.push_back(v);
        self(self);
        rows.pop_back();
        if (leaves[f] > cap) return;
      }
    };
    dfs(dfs);
  });
  std::size_t total = 0;
  for (auto n : leaves) total += n;
  if (total > cap) throw ResourceError("similar-sublattice enumeration exceeded the cap of " + std::to_string(cap));
  Found merged;
  for (const auto& fm : found)
    for (const auto& [key, u] : fm) merged.try_emplace(key, u);
  std::vector<Sublattice> out;
  for (const auto& [key, u] : merged) out.emplace_back(base, u, Rational(m));
  return out;
}

CleanSearchResult exhaustive_clean_search_D4(std::int64_t m, std::size_t cap, Execution exec) {
  const Lattice d4 = Lattice::d4();
  CleanSearchResult res;
  res.m = m;
  const auto subs = enumerate_similar_sublattices(d4, m, false, cap, exec);
  res.sublattices = subs.size();
  std::vector<std::optional<Coeffs>> ties(subs.size());
  for_each_index(subs.size(), exec, [&](std::size_t i) { ties[i] = find_tie(subs[i]); });
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!ties[i]) {
      if (!res.exists_clean) res.witness = subs[i];
      res.exists_clean = true;
    } else {
      res.ties.push_back(*ties[i]);
    }
  }
  return res;
}

Quaternion d4_family_element(std::int64_t alpha, std::int64_t beta) {
  return Quaternion::hurwitz_twice(alpha, alpha, beta, beta);
}

namespace {

bool product_of_primes_1_mod_4(std::int64_t m) {
  for (std::int64_t p = 2; p * p <= m; ++p) {
    while (m % p == 0) {
      if (p % 4 != 1) return false;
      m /= p;
    }
  }
  return m == 1 || m % 4 == 1;
}

}  // namespace

std::optional<Quaternion> d4_family_witness(std::int64_t m) {
  if (m == 1) return Quaternion::lipschitz(1, 0, 0, 0);
  if (m == 7) return Quaternion::hurwitz_twice(1, 1, 1, 5);
  if (m < 1 || !product_of_primes_1_mod_4(m)) return std::nullopt;
  for (std::int64_t p = 2; p * p < m; p += 2) {
    const auto q2 = m - p * p;
    const auto q = isqrt(q2);
    if (q * q == q2 && q % 2 == 1 && gcd64(p, q) == 1) return d4_family_element(p + q, std::llabs(p - q));
  }
  return std::nullopt;
}

namespace {

std::vector<GaussianInt> gaussian_of_norm(std::int64_t n) {
  std::vector<GaussianInt> out;
  for (std::int64_t a = 1; a * a <= n; ++a) {
    const auto b2 = n - a * a;
    const auto b = isqrt(b2);
    if (b * b == b2) out.push_back({a, b});
  }
  return out;
}

std::vector<EisensteinInt> eisenstein_of_norm(std::int64_t n) {
  std::vector<EisensteinInt> out;
  const auto r = 2 * isqrt(n) + 2;
  for (std::int64_t a = -r; a <= r; ++a)
    for (std::int64_t b = 0; b <= r; ++b) {
      const EisensteinInt e{a, b};
      if (e.norm() == n && a > b) out.push_back(e);
    }
  return out;
}

}  // namespace

std::vector<CatalogEntry> catalog(LatticeKind kind, int dim, std::int64_t limit) {
  if (limit < 1) throw InputError("catalog limit must be >= 1");
  const Lattice base = Lattice::make(kind, dim);
  std::vector<CatalogEntry> out;
  auto add = [&](std::int64_t root, const std::vector<RingElement>& witnesses) {
    if (witnesses.empty()) return;
    CatalogEntry e;
    e.kind = kind;
    e.dim = dim;
    e.root = root;
    e.xi = format_element(witnesses.front());
    for (const auto& w : witnesses) {
      const auto sub = similar_sublattice(base, w);
      e.index = sub.index();
      if (is_clean(sub)) {
        e.clean = true;
        e.xi = format_element(w);
        break;
      }
    }
    out.push_back(e);
  };
  for (std::int64_t n = 1; n <= limit; ++n) {
    std::vector<RingElement> w;
    if (kind == LatticeKind::Zn && dim == 2) {
      for (const auto& g : gaussian_of_norm(n)) w.push_back(g);
    } else if (kind == LatticeKind::Zn && dim == 4) {
      const auto s = four_squares(n);
      w.push_back(Quaternion::lipschitz(s[0], s[1], s[2], s[3]));
    } else if (kind == LatticeKind::Zn) {
      w.push_back(n);
    } else if (kind == LatticeKind::A2) {
      for (const auto& e : eisenstein_of_norm(n)) w.push_back(e);
    } else if (auto q = d4_family_witness(n)) {
      w.push_back(*q);
    }
    add(n, w);
  }
  return out;
}

std::vector<std::int64_t> clean_index_catalog(LatticeKind kind, int dim, std::int64_t limit) {
  std::vector<std::int64_t> out;
  for (const auto& e : catalog(kind, dim, limit))
    if (e.clean) out.push_back(kind == LatticeKind::D4 ? e.root : e.index);
  return out;
}

namespace {

template <typename T>
RingElement to_element(const T& v) {
  return RingElement(v);
}

}  // namespace

SublatticeSystem build_system(const Lattice& base, const RingElement& xi1_in, const RingElement& xi2_in,
                              BuildOptions options) {
  const RingKind ring = ring_for(base);
  SublatticeSystem sys;
  sys.base = base;
  sys.xi1 = promote(xi1_in, ring);
  sys.xi2 = promote(xi2_in, ring);
  const bool quaternion = ring == RingKind::Quaternion;
  sys.whole = whole_lattice(base);
  sys.sub1 = similar_sublattice(base, sys.xi1, Side::Left);
  sys.sub2 = similar_sublattice(base, sys.xi2, quaternion ? Side::Right : Side::Left);
  sys.n1 = sys.sub1.index();
  sys.n2 = sys.sub2.index();

  if (quaternion) {
    const auto& q1 = std::get<Quaternion>(sys.xi1);
    const auto& q2 = std::get<Quaternion>(sys.xi2);
    const Rational m1 = q1.norm(), m2 = q2.norm();
    if (m1.denominator() != 1 || m2.denominator() != 1 || gcd64(m1.numerator(), m2.numerator()) != 1)
      throw InputError("quaternion systems need relatively prime norms");
    if (base.kind() == LatticeKind::Zn && (m1.numerator() % 2 == 0 || m2.numerator() % 2 == 0))
      throw InputError("Z4 systems need odd norms");
    const auto s1 = similarity_for(base, sys.xi1, Side::Left);
    const auto s2 = similarity_for(base, sys.xi2, Side::Right);
    sys.product = Sublattice(base, s2.u * s1.u, s1.scale_sq * s2.scale_sq);
  } else {
    sys.product = similar_sublattice(base, std::visit(
                                               [&](const auto& a) -> RingElement {
                                                 using T = std::decay_t<decltype(a)>;
                                                 if constexpr (std::is_same_v<T, Quaternion>) {
                                                   return a;
                                                 } else {
                                                   return a * std::get<T>(sys.xi2);
                                                 }
                                               },
                                               sys.xi1));
  }
  sys.n_s = sys.product.index();

  const Sublattice generic_join = join(sys.sub1, sys.sub2);
  const Sublattice generic_meet = meet(sys.sub1, sys.sub2);
  if (quaternion) {
    if (!generic_meet.same_lattice(sys.product))
      throw ConstructionError("product sublattice differs from the intersection");
    sys.meet = sys.product;
    sys.join = generic_join;
  } else {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (!std::is_same_v<T, Quaternion>) {
            const auto gl = gcd_lcm(a, std::get<T>(sys.xi2));
            sys.xi_cup = to_element(gl.gcd);
            sys.xi_cap = to_element(gl.lcm);
          }
        },
        sys.xi1);
    sys.join = similar_sublattice(base, *sys.xi_cup);
    sys.meet = similar_sublattice(base, *sys.xi_cap);
    if (!sys.join.same_lattice(generic_join)) throw ConstructionError("gcd sublattice differs from the join");
    if (!sys.meet.same_lattice(generic_meet)) throw ConstructionError("lcm sublattice differs from the intersection");
  }
  sys.n_cap = sys.meet.index();
  sys.n_cup = sys.join.index();
  sys.n_lcm = lcm64(sys.n1, sys.n2);
  sys.clean1 = is_clean(sys.sub1);
  sys.clean2 = is_clean(sys.sub2);
  sys.clean_s = is_clean(sys.product);

  auto qualifies = [&](const Sublattice& cand) {
    return cand.index() == sys.n_lcm && cand.contains(sys.product) && sys.meet.contains(cand) && is_clean(cand) &&
           is_clean(cand, &sys.sub1) && is_clean(cand, &sys.sub2);
  };
  if (base.dim() == 1) {
    sys.lcm_sub = sys.meet;
    sys.xi_lcm = sys.xi_cap;
  } else if (options.search_lcm) {
    if (sys.n_lcm == sys.n_s && qualifies(sys.product)) {
      sys.lcm_sub = sys.product;
    } else if (ring == RingKind::Gaussian || ring == RingKind::Eisenstein) {
      std::vector<RingElement> cands;
      if (ring == RingKind::Gaussian)
        for (const auto& g : gaussian_of_norm(sys.n_lcm)) cands.push_back(g);
      else
        for (const auto& e : eisenstein_of_norm(sys.n_lcm)) cands.push_back(e);
      for (const auto& c : cands) {
        const Sublattice s = similar_sublattice(base, c);
        if (qualifies(s)) {
          sys.lcm_sub = s;
          sys.xi_lcm = c;
          break;
        }
      }
    }
  }
  check_system(sys);
  return sys;
}

void check_system(const SublatticeSystem& sys) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConstructionError(std::string("sublattice system: ") + what);
  };
  require(sys.n_s == sys.n1 * sys.n2, "N_s != N1 N2");
  require(sys.n1 * sys.n2 == sys.n_cup * sys.n_cap, "det identity for join and intersection fails");
  require(sys.n1 % sys.n_cup == 0 && sys.n_cap % sys.n2 == 0 && sys.n1 / sys.n_cup == sys.n_cap / sys.n2,
          "[join:sub1] != [sub2:meet]");
  require(sys.n2 % sys.n_cup == 0 && sys.n_cap % sys.n1 == 0 && sys.n2 / sys.n_cup == sys.n_cap / sys.n1,
          "[join:sub2] != [sub1:meet]");
  require(sys.meet.contains(sys.product), "product not inside the intersection");
  require(sys.sub1.contains(sys.meet) && sys.sub2.contains(sys.meet), "intersection not inside both sublattices");
  require(sys.join.contains(sys.sub1) && sys.join.contains(sys.sub2), "join does not contain both sublattices");
  if (sys.lcm_sub) {
    require(sys.lcm_sub->contains(sys.product), "product not inside the lcm sublattice");
    require(sys.sub1.contains(*sys.lcm_sub) && sys.sub2.contains(*sys.lcm_sub), "lcm sublattice not in both");
    require(sys.lcm_sub->index() == sys.n_lcm, "lcm sublattice has the wrong index");
  }
}

}  // namespace mdlvq
