#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdlvq/intmath.hpp"
#include "mdlvq/parallel.hpp"
#include "mdlvq/rational.hpp"

namespace mdlvq {

enum class LatticeKind { Zn, A2, D4 };

std::string to_string(LatticeKind kind);
LatticeKind parse_lattice_kind(const std::string& name);

/// Exact inner product on integer coefficient vectors: <u, v> = u^T G v / den
/// with G an integer matrix. All lattice geometry is done with numerators.
struct GramForm {
  int dim = 0;
  std::array<std::int64_t, kMaxDim * kMaxDim> g{};
  std::int64_t den = 1;

  std::int64_t dot(const Coeffs& a, const Coeffs& b) const {
    std::int64_t s = 0;
    for (int i = 0; i < dim; ++i) {
      if (a[i] == 0) continue;
      std::int64_t row = 0;
      for (int j = 0; j < dim; ++j) row += g[static_cast<std::size_t>(i * kMaxDim + j)] * b[j];
      s += a[i] * row;
    }
    return s;
  }
  std::int64_t norm(const Coeffs& a) const { return dot(a, a); }
  /// Dimension-normalised squared length (1/L)||v||^2 as an exact rational.
  Rational normalized(std::int64_t norm_num) const { return Rational(norm_num, den * dim); }
  /// G * v, so that dot(u, v) == sum_i u[i] * apply(v)[i].
  Coeffs apply(const Coeffs& v) const {
    Coeffs out{};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) out[i] += g[static_cast<std::size_t>(i * kMaxDim + j)] * v[j];
    return out;
  }
};

/// A point of a base lattice, identified by its integer coefficients with
/// respect to the base generator. Ordering is lexicographic on coefficients.
struct LatticePoint {
  Coeffs coeffs{};
  auto operator<=>(const LatticePoint&) const = default;
};

/// One of the supported base lattices, optionally scaled by a rational.
/// Immutable after construction.
class Lattice {
 public:
  static Lattice zn(int dim, Rational scale = Rational(1));
  static Lattice a2(Rational scale = Rational(1));
  static Lattice d4(Rational scale = Rational(1));
  static Lattice make(LatticeKind kind, int dim, Rational scale = Rational(1));

  LatticeKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const Rational& scale() const { return scale_; }
  const GramForm& form() const { return form_; }
  RatMatrix gram() const;

  /// Generator rows in ambient coordinates. Exact for Zn and D4; A2 needs
  /// sqrt(3) so only the Gram matrix is exact there.
  std::optional<RatMatrix> exact_generator() const;
  double generator(int row, int col) const { return gen_[static_cast<std::size_t>(row * kMaxDim + col)]; }

  /// Squared covering radius, unnormalised, exact.
  Rational covering_radius_sq() const { return covering_sq_; }
  /// Volume of a fundamental region, sqrt(det gram).
  double volume() const { return volume_; }

  std::array<double, kMaxDim> embed(const Coeffs& c) const;
  /// Voronoi-relevant vectors of the lattice, as coefficient vectors.
  const std::vector<Coeffs>& relevant_vectors() const { return relevant_; }

 private:
  Lattice() = default;
  void finish();

  LatticeKind kind_ = LatticeKind::Zn;
  int dim_ = 0;
  Rational scale_{1};
  GramForm form_;
  std::array<double, kMaxDim * kMaxDim> gen_{};
  std::array<double, kMaxDim * kMaxDim> gen_inv_{};
  Rational covering_sq_{0};
  double volume_ = 1.0;
  std::vector<Coeffs> relevant_;
};

/// Nearest lattice point to an ambient real vector. Ties go to the
/// lexicographically smallest coefficient vector.
LatticePoint nearest_point(const Lattice& lat, std::span<const double> x);

struct SecondMoment {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
  std::size_t samples = 0;
};

/// Normalised second moment G(lattice). Exact 1/12 for Zn; Monte-Carlo over a
/// uniformly sampled fundamental region otherwise.
SecondMoment second_moment(const Lattice& lat, std::size_t samples = 1u << 20, std::uint64_t seed = 1,
                           Execution exec = Execution::Parallel);

/// G1 = U G with U A U^T = scale_sq * A; scale_sq is c^2 in G1 = c G K.
struct Similarity {
  IntMatrix u;
  Rational scale_sq{1};
};

/// Checks U A U^T = c^2 A, det U > 0 and det U^2 = c^(2L). Throws ConstructionError.
void check_similarity(const GramForm& form, const Similarity& sim);

/// Index N = det U = c^L as an exact integer.
std::int64_t index_of(const Similarity& sim, int dim);

}  // namespace mdlvq
