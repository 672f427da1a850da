#include "mdlvq/ring.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "mdlvq/error.hpp"

namespace mdlvq {

namespace {

std::int64_t isqrt(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Nearest integer to p / n (n > 0), halves rounded up.
std::int64_t round_div(std::int64_t p, std::int64_t n) { return floor_div(2 * p + n, 2 * n); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

Quaternion Quaternion::lipschitz(std::int64_t w, std::int64_t x, std::int64_t y, std::int64_t z) {
  Quaternion q;
  q.twice_ = {2 * w, 2 * x, 2 * y, 2 * z};
  q.ring_ = QuaternionRing::Lipschitz;
  return q;
}

Quaternion Quaternion::hurwitz_twice(std::int64_t w2, std::int64_t x2, std::int64_t y2, std::int64_t z2) {
  const auto p = floor_mod(w2, 2);
  if (floor_mod(x2, 2) != p || floor_mod(y2, 2) != p || floor_mod(z2, 2) != p)
    throw InputError("Hurwitz quaternion needs all-integer or all-half-integer components");
  Quaternion q;
  q.twice_ = {w2, x2, y2, z2};
  q.ring_ = QuaternionRing::Hurwitz;
  return q;
}

Quaternion Quaternion::from_rationals(const std::array<Rational, 4>& c) {
  std::array<std::int64_t, 4> t{};
  bool half = false;
  for (std::size_t i = 0; i < 4; ++i) {
    const Rational d = c[i] * 2;
    if (d.denominator() != 1) throw InputError("quaternion components must be integers or halves");
    t[i] = d.numerator();
    half = half || (t[i] % 2 != 0);
  }
  if (half) return hurwitz_twice(t[0], t[1], t[2], t[3]);
  return lipschitz(t[0] / 2, t[1] / 2, t[2] / 2, t[3] / 2);
}

Rational Quaternion::norm() const {
  std::int64_t s = 0;
  for (auto v : twice_) s += v * v;
  return Rational(s, 4);
}

Quaternion Quaternion::conj() const {
  Quaternion q = *this;
  for (std::size_t i = 1; i < 4; ++i) q.twice_[i] = -q.twice_[i];
  return q;
}

Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  const auto& [a1, b1, c1, d1] = p.twice_;
  const auto& [a2, b2, c2, d2] = q.twice_;
  const std::array<std::int64_t, 4> prod4{
      a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
      a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
      a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
      a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
  };
  for (auto v : prod4)
    if (v % 2 != 0) throw InputError("quaternion product left the Hurwitz order");
  const bool hurwitz = p.ring_ == QuaternionRing::Hurwitz || q.ring_ == QuaternionRing::Hurwitz;
  std::array<std::int64_t, 4> t{prod4[0] / 2, prod4[1] / 2, prod4[2] / 2, prod4[3] / 2};
  if (hurwitz) return Quaternion::hurwitz_twice(t[0], t[1], t[2], t[3]);
  return Quaternion::lipschitz(t[0] / 2, t[1] / 2, t[2] / 2, t[3] / 2);
}

std::int64_t norm(std::int64_t z) { return std::llabs(z); }
std::int64_t norm(const GaussianInt& g) { return g.norm(); }
std::int64_t norm(const EisensteinInt& e) { return e.norm(); }
Rational norm(const Quaternion& q) { return q.norm(); }

RatMatrix left_matrix(const Quaternion& q) {
  const auto& [a, b, c, d] = q.twice();
  const std::int64_t rows[4][4] = {{a, b, c, d}, {-b, a, d, -c}, {-c, -d, a, b}, {-d, c, -b, a}};
  RatMatrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = Rational(rows[i][j], 2);
  return m;
}

RatMatrix right_matrix(const Quaternion& q) {
  const auto& [a, b, c, d] = q.twice();
  const std::int64_t rows[4][4] = {{a, b, c, d}, {-b, a, -d, c}, {-c, d, a, -b}, {-d, -c, b, a}};
  RatMatrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = Rational(rows[i][j], 2);
  return m;
}

std::optional<std::pair<std::int64_t, std::int64_t>> two_squares_representable(std::int64_t n) {
  if (n < 1) throw InputError("representability needs n >= 1");
  for (std::int64_t a = 0; a * a <= n; ++a) {
    const auto rest = n - a * a;
    const auto b = isqrt(rest);
    if (b * b == rest && b <= a) return std::make_pair(a, b);
  }
  return std::nullopt;
}

std::optional<std::pair<std::int64_t, std::int64_t>> eisenstein_representable(std::int64_t n) {
  if (n < 1) throw InputError("representability needs n >= 1");
  for (std::int64_t a = 0; a * a <= n; ++a)
    for (std::int64_t b = 0; b <= a; ++b) {
      const auto v = a * a + a * b + b * b;
      if (v == n) return std::make_pair(a, b);
      if (v > n) break;
    }
  return std::nullopt;
}

std::array<std::int64_t, 4> four_squares(std::int64_t m) {
  if (m < 1) throw InputError("four_squares needs m >= 1");
  for (auto a = isqrt(m); a >= 0; --a) {
    const auto ra = m - a * a;
    for (auto b = std::min(a, isqrt(ra)); b >= 0; --b) {
      const auto rb = ra - b * b;
      for (auto c = std::min(b, isqrt(rb)); c >= 0; --c) {
        const auto rc = rb - c * c;
        const auto d = isqrt(rc);
        if (d * d == rc && d <= c) return {a, b, c, d};
      }
    }
  }
  throw ConstructionError("no four-square decomposition found");
}

std::int64_t canonical_associate(std::int64_t z) { return std::llabs(z); }

GaussianInt canonical_associate(const GaussianInt& g) {
  if (g.is_zero()) return g;
  GaussianInt x = g;
  for (int k = 0; k < 4; ++k) {
    if (x.a > 0 && x.b >= 0) return x;
    x = x * GaussianInt{0, 1};
  }
  throw ConstructionError("no canonical Gaussian associate");
}

EisensteinInt canonical_associate(const EisensteinInt& e) {
  if (e.is_zero()) return e;
  // Units are powers of -w^2 = 1 + w (rotation by 60 degrees).
  EisensteinInt x = e;
  for (int k = 0; k < 6; ++k) {
    if (x.b >= 0 && x.a > x.b) return x;
    x = x * EisensteinInt{1, 1};
  }
  throw ConstructionError("no canonical Eisenstein associate");
}

namespace {

GaussianInt euclid_quotient(const GaussianInt& x, const GaussianInt& y) {
  const auto num = x * y.conj();
  const auto n = y.norm();
  return {round_div(num.a, n), round_div(num.b, n)};
}

EisensteinInt euclid_quotient(const EisensteinInt& x, const EisensteinInt& y) {
  const auto num = x * y.conj();
  const auto n = y.norm();
  return {round_div(num.a, n), round_div(num.b, n)};
}

template <typename T>
GcdLcm<T> ring_gcd_lcm(const T& x, const T& y) {
  if (x.is_zero() || y.is_zero()) throw InputError("gcd of a zero element");
  T p = x, q = y;
  while (!q.is_zero()) {
    const T r = p - euclid_quotient(p, q) * q;
    p = q;
    q = r;
  }
  const T g = canonical_associate(p);
  const auto l = divide(x * y, g);
  if (!l) throw ConstructionError("gcd does not divide the product");
  return {g, canonical_associate(*l)};
}

}  // namespace

GcdLcm<std::int64_t> gcd_lcm(std::int64_t x, std::int64_t y) {
  if (x == 0 || y == 0) throw InputError("gcd of a zero element");
  return {gcd64(x, y), lcm64(x, y)};
}

GcdLcm<GaussianInt> gcd_lcm(const GaussianInt& x, const GaussianInt& y) { return ring_gcd_lcm(x, y); }
GcdLcm<EisensteinInt> gcd_lcm(const EisensteinInt& x, const EisensteinInt& y) { return ring_gcd_lcm(x, y); }

std::optional<GaussianInt> divide(const GaussianInt& x, const GaussianInt& y) {
  if (y.is_zero()) throw InputError("division by zero");
  const auto num = x * y.conj();
  const auto n = y.norm();
  if (num.a % n != 0 || num.b % n != 0) return std::nullopt;
  return GaussianInt{num.a / n, num.b / n};
}

std::optional<EisensteinInt> divide(const EisensteinInt& x, const EisensteinInt& y) {
  if (y.is_zero()) throw InputError("division by zero");
  const auto num = x * y.conj();
  const auto n = y.norm();
  if (num.a % n != 0 || num.b % n != 0) return std::nullopt;
  return EisensteinInt{num.a / n, num.b / n};
}

Rational element_norm(const RingElement& xi) {
  return std::visit(
      [](const auto& v) -> Rational {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quaternion>) {
          return v.norm();
        } else {
          return Rational(norm(v));
        }
      },
      xi);
}

RingElement element_times(const RingElement& xi, std::int64_t k) {
  return std::visit(
      [k](const auto& v) -> RingElement {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return v * k;
        } else if constexpr (std::is_same_v<T, Quaternion>) {
          const auto& t = v.twice();
          if (v.ring() == QuaternionRing::Hurwitz) return Quaternion::hurwitz_twice(k * t[0], k * t[1], k * t[2], k * t[3]);
          return Quaternion::lipschitz(k * t[0] / 2, k * t[1] / 2, k * t[2] / 2, k * t[3] / 2);
        } else {
          return T{v.a * k, v.b * k};
        }
      },
      xi);
}

std::string format_element(const RingElement& xi) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, Quaternion>) {
          std::string s;
          for (int i = 0; i < 4; ++i) {
            if (i) s += ',';
            s += to_string(v.component(i));
          }
          return s;
        } else {
          return std::to_string(v.a) + "," + std::to_string(v.b);
        }
      },
      xi);
}

RingElement parse_element(const std::string& text, RingKind ring) {
  const auto parts = split(text, ',');
  const std::size_t want = ring == RingKind::Integer ? 1 : ring == RingKind::Quaternion ? 4 : 2;
  if (parts.size() != want)
    throw InputError("ring element '" + text + "' needs " + std::to_string(want) + " components");
  std::vector<Rational> v;
  for (const auto& p : parts) v.push_back(parse_rational(p));
  if (ring == RingKind::Quaternion) return Quaternion::from_rationals({v[0], v[1], v[2], v[3]});
  for (const auto& r : v)
    if (r.denominator() != 1) throw InputError("ring element '" + text + "' must have integer components");
  if (ring == RingKind::Integer) return v[0].numerator();
  if (ring == RingKind::Gaussian) return GaussianInt{v[0].numerator(), v[1].numerator()};
  return EisensteinInt{v[0].numerator(), v[1].numerator()};
}

RingKind ring_of(const RingElement& xi) {
  switch (xi.index()) {
    case 0: return RingKind::Integer;
    case 1: return RingKind::Gaussian;
    case 2: return RingKind::Eisenstein;
    default: return RingKind::Quaternion;
  }
}

}  // namespace mdlvq
