#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "mdlvq/intmath.hpp"
#include "mdlvq/rational.hpp"

namespace mdlvq {

/// a + b i
struct GaussianInt {
  std::int64_t a = 0;
  std::int64_t b = 0;

  std::int64_t norm() const { return a * a + b * b; }
  GaussianInt conj() const { return {a, -b}; }
  bool is_zero() const { return a == 0 && b == 0; }
  friend GaussianInt operator*(const GaussianInt& x, const GaussianInt& y) {
    return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend GaussianInt operator+(const GaussianInt& x, const GaussianInt& y) { return {x.a + y.a, x.b + y.b}; }
  friend GaussianInt operator-(const GaussianInt& x, const GaussianInt& y) { return {x.a - y.a, x.b - y.b}; }
  friend bool operator==(const GaussianInt&, const GaussianInt&) = default;
};

/// a + b w with w = exp(2 pi i / 3), so w^2 = -1 - w and the norm is a^2 - ab + b^2.
/// The pair (a, b) with a^2 + ab + b^2 = N corresponds to a - b w.
struct EisensteinInt {
  std::int64_t a = 0;
  std::int64_t b = 0;

  std::int64_t norm() const { return a * a - a * b + b * b; }
  EisensteinInt conj() const { return {a - b, -b}; }
  bool is_zero() const { return a == 0 && b == 0; }
  friend EisensteinInt operator*(const EisensteinInt& x, const EisensteinInt& y) {
    return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
  }
  friend EisensteinInt operator+(const EisensteinInt& x, const EisensteinInt& y) { return {x.a + y.a, x.b + y.b}; }
  friend EisensteinInt operator-(const EisensteinInt& x, const EisensteinInt& y) { return {x.a - y.a, x.b - y.b}; }
  friend bool operator==(const EisensteinInt&, const EisensteinInt&) = default;
};

enum class QuaternionRing { Lipschitz, Hurwitz };

/// w + x i + y j + z k stored as doubled integer components.
class Quaternion {
 public:
  Quaternion() = default;
  static Quaternion lipschitz(std::int64_t w, std::int64_t x, std::int64_t y, std::int64_t z);
  /// Components given doubled; all even or all odd.
  static Quaternion hurwitz_twice(std::int64_t w2, std::int64_t x2, std::int64_t y2, std::int64_t z2);
  static Quaternion from_rationals(const std::array<Rational, 4>& c);

  QuaternionRing ring() const { return ring_; }
  const std::array<std::int64_t, 4>& twice() const { return twice_; }
  Rational component(int i) const { return Rational(twice_[static_cast<std::size_t>(i)], 2); }
  Rational norm() const;
  Quaternion conj() const;
  bool is_zero() const { return twice_ == std::array<std::int64_t, 4>{}; }

  friend Quaternion operator*(const Quaternion& p, const Quaternion& q);
  friend bool operator==(const Quaternion&, const Quaternion&) = default;

 private:
  std::array<std::int64_t, 4> twice_{};
  QuaternionRing ring_ = QuaternionRing::Lipschitz;
};

std::int64_t norm(std::int64_t z);
std::int64_t norm(const GaussianInt& g);
std::int64_t norm(const EisensteinInt& e);
Rational norm(const Quaternion& q);

/// Ambient-coordinate matrices of x -> q x and x -> x q acting on row vectors.
RatMatrix left_matrix(const Quaternion& q);
RatMatrix right_matrix(const Quaternion& q);

/// Witness (a, b), a >= b >= 0, smallest a first.
std::optional<std::pair<std::int64_t, std::int64_t>> two_squares_representable(std::int64_t n);
/// Witness (a, b) with a^2 + ab + b^2 = n, a >= b >= 0, smallest a first.
std::optional<std::pair<std::int64_t, std::int64_t>> eisenstein_representable(std::int64_t n);
/// a >= b >= c >= d >= 0 with the sum of squares m; greedy on a, so the
/// lexicographically largest tuple.
std::array<std::int64_t, 4> four_squares(std::int64_t m);

std::int64_t canonical_associate(std::int64_t z);
GaussianInt canonical_associate(const GaussianInt& g);
EisensteinInt canonical_associate(const EisensteinInt& e);

template <typename T>
struct GcdLcm {
  T gcd;
  T lcm;
};
GcdLcm<std::int64_t> gcd_lcm(std::int64_t x, std::int64_t y);
GcdLcm<GaussianInt> gcd_lcm(const GaussianInt& x, const GaussianInt& y);
GcdLcm<EisensteinInt> gcd_lcm(const EisensteinInt& x, const EisensteinInt& y);

/// Exact division; nullopt when y does not divide x.
std::optional<GaussianInt> divide(const GaussianInt& x, const GaussianInt& y);
std::optional<EisensteinInt> divide(const EisensteinInt& x, const EisensteinInt& y);

enum class RingKind { Integer, Gaussian, Eisenstein, Quaternion };

/// Any ring element used to build a sublattice.
using RingElement = std::variant<std::int64_t, GaussianInt, EisensteinInt, Quaternion>;

/// Norm of the element as an exact rational (integer except for odd Hurwitz norms).
Rational element_norm(const RingElement& xi);
RingElement element_times(const RingElement& xi, std::int64_t k);
/// "3", "2,1" (2+i or 2+w), "1,0,2,2" or "1/2,1/2,1/2,5/2".
std::string format_element(const RingElement& xi);
RingElement parse_element(const std::string& text, RingKind ring);
RingKind ring_of(const RingElement& xi);

}  // namespace mdlvq
