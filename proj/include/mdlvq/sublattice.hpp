#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mdlvq/intmath.hpp"
#include "mdlvq/lattice.hpp"
#include "mdlvq/parallel.hpp"
#include "mdlvq/rational.hpp"
#include "mdlvq/ring.hpp"

namespace mdlvq {

/// Full-rank sublattice of a base lattice, stored as integer rows U in the
/// base coefficient space. When U is a similarity (U A U^T = c^2 A) the
/// Voronoi-relevant vectors are known and nearest-point queries are exact.
class Sublattice {
 public:
  Sublattice() = default;
  /// `scale_sq` present means U A U^T = scale_sq A; it is checked. Improper
  /// (det U < 0) similarities are allowed here.
  Sublattice(const Lattice& base, IntMatrix basis, std::optional<Rational> scale_sq);

  int dim() const { return form_.dim; }
  const GramForm& form() const { return form_; }
  const Lattice& base() const { return *base_; }
  const IntMatrix& basis() const { return basis_; }
  const IntMatrix& hnf() const { return hnf_; }
  std::int64_t index() const { return index_; }
  bool similar() const { return scale_sq_.has_value(); }
  std::optional<Similarity> similarity() const;
  const std::optional<Rational>& scale_sq() const { return scale_sq_; }
  const std::vector<Coeffs>& relevant_vectors() const { return relevant_; }

  bool contains(const Coeffs& v) const;
  bool contains(const Sublattice& other) const;
  bool same_lattice(const Sublattice& other) const { return hnf_ == other.hnf_; }

  /// Canonical representative of v + this in the box 0 <= v_i < H_ii.
  Coeffs reduce(const Coeffs& v) const;
  std::int64_t coset_id(const Coeffs& v) const;
  Coeffs coset_rep(std::int64_t id) const;

  struct Closest {
    Coeffs point{};
    bool tie = false;
  };
  /// Sublattice point nearest to y / s (s > 0). Exact; `tie` reports a
  /// second equally near point.
  Closest closest(const Coeffs& y, std::int64_t s = 1) const;

 private:
  std::shared_ptr<const Lattice> base_;
  GramForm form_;
  IntMatrix basis_;
  IntMatrix hnf_;
  std::int64_t index_ = 0;
  std::optional<Rational> scale_sq_;
  std::vector<Coeffs> relevant_;
  std::vector<Coeffs> relevant_g_;
  std::vector<std::int64_t> relevant_norm_;
  std::array<double, kMaxDim * kMaxDim> inverse_{};
};

/// The whole base lattice as a sublattice of itself.
Sublattice whole_lattice(const Lattice& base);

enum class Side { Left, Right };

RingKind ring_for(const Lattice& base);

/// Similarity matrix in coefficient space for multiplication by xi.
Similarity similarity_for(const Lattice& base, const RingElement& xi, Side side = Side::Left);
Sublattice similar_sublattice(const Lattice& base, const RingElement& xi, Side side = Side::Left);

/// Discrete Voronoi cell of `coarse` around 0 restricted to points of
/// `fine` (the whole base when null), one point per coset. Throws
/// NotCleanError on a tie.
std::vector<Coeffs> discrete_voronoi(const Sublattice& coarse, const Sublattice* fine = nullptr);
std::vector<Coeffs> discrete_voronoi(const Sublattice& coarse, const Coeffs& center, const Sublattice* fine = nullptr);

/// No point of `fine` (base when null) lies on a Voronoi boundary of `coarse`.
bool is_clean(const Sublattice& coarse, const Sublattice* fine = nullptr);
/// A fine point tied between two coarse points, if any.
std::optional<Coeffs> find_tie(const Sublattice& coarse, const Sublattice* fine = nullptr);

/// One point of `fine` per coset of fine / coarse (coarse inside fine).
std::vector<Coeffs> quotient_reps(const Sublattice& fine, const Sublattice& coarse);

Sublattice join(const Sublattice& a, const Sublattice& b);
Sublattice meet(const Sublattice& a, const Sublattice& b);

/// All lattice vectors with <v, v> numerator equal to `norm_num`.
std::vector<Coeffs> vectors_of_norm(const GramForm& form, std::int64_t norm_num);

/// Every sublattice with a basis U satisfying U A U^T = m A, deduplicated by
/// Hermite form and sorted by it. `proper_only` drops det U < 0 bases.
std::vector<Sublattice> enumerate_similar_sublattices(const Lattice& base, std::int64_t m, bool proper_only,
                                                      std::size_t cap = 1u << 20,
                                                      Execution exec = Execution::Parallel);

struct CleanSearchResult {
  std::int64_t m = 0;
  std::size_t sublattices = 0;
  bool exists_clean = false;
  std::optional<Sublattice> witness;
  /// One tied point per non-clean sublattice, in enumeration order.
  std::vector<Coeffs> ties;
};
CleanSearchResult exhaustive_clean_search_D4(std::int64_t m, std::size_t cap = 1u << 20,
                                             Execution exec = Execution::Parallel);

/// xi = (alpha / 2)(1 + i) + (beta / 2)(j + k)
Quaternion d4_family_element(std::int64_t alpha, std::int64_t beta);
/// Witness for a clean similar sublattice of D4 with scale m from the
/// product-of-primes-1-mod-4 family or m = 7.
std::optional<Quaternion> d4_family_witness(std::int64_t m);

struct CatalogEntry {
  LatticeKind kind = LatticeKind::Zn;
  int dim = 0;
  std::int64_t index = 0;
  std::int64_t root = 0;
  std::string xi;
  bool clean = false;
};
/// One row per admissible index (root <= limit), clean flag from is_clean.
std::vector<CatalogEntry> catalog(LatticeKind kind, int dim, std::int64_t limit);
/// Sorted clean indices (or roots M for D4).
std::vector<std::int64_t> clean_index_catalog(LatticeKind kind, int dim, std::int64_t limit);

struct SublatticeSystem {
  Lattice base = Lattice::zn(1);
  RingElement xi1, xi2;
  Sublattice whole, sub1, sub2, meet, join, product;
  std::optional<Sublattice> lcm_sub;
  std::optional<RingElement> xi_cap, xi_cup, xi_lcm;
  std::int64_t n1 = 0, n2 = 0, n_cap = 0, n_cup = 0, n_s = 0, n_lcm = 0;
  bool clean1 = false, clean2 = false, clean_s = false;
};

struct BuildOptions {
  bool search_lcm = true;
};

SublatticeSystem build_system(const Lattice& base, const RingElement& xi1, const RingElement& xi2,
                              BuildOptions options = {});

/// Throws ConstructionError when an identity among the system's indices or
/// inclusions fails.
void check_system(const SublatticeSystem& sys);

}  // namespace mdlvq
