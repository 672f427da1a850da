#include <doctest.h>

#include <algorithm>
#include <random>

#include "mdlvq/error.hpp"
#include "mdlvq/ring.hpp"
#include "mdlvq/sublattice.hpp"

using namespace mdlvq;

namespace {

bool brute_two_squares(std::int64_t n) {
  for (std::int64_t a = 0; a * a <= n; ++a)
    for (std::int64_t b = 0; b <= a; ++b)
      if (a * a + b * b == n) return true;
  return false;
}

RatMatrix transpose(const RatMatrix& m) {
  RatMatrix t(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

RatMatrix scaled_identity(int n, const Rational& s) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

}  // namespace

TEST_CASE("norms") {
  CHECK(GaussianInt{2, 1}.norm() == 5);
  CHECK(norm(Quaternion::lipschitz(1, 0, 0, 0)) == Rational(1));
  CHECK(norm(d4_family_element(1, 1)) == Rational(1));
  CHECK(norm(d4_family_element(3, 1)) == Rational(5));
  CHECK(EisensteinInt{2, 1}.norm() == 3);
}

TEST_CASE("two-squares representability") {
  std::vector<std::int64_t> first;
  for (std::int64_t n = 1; first.size() < 12; ++n)
    if (two_squares_representable(n)) first.push_back(n);
  CHECK(first == std::vector<std::int64_t>{1, 2, 4, 5, 8, 9, 10, 13, 16, 17, 18, 20});
  CHECK_FALSE(two_squares_representable(3).has_value());

  // Witness oracle: smallest a with a >= b >= 0 over a, b <= 7.
  std::pair<std::int64_t, std::int64_t> oracle{-1, -1};
  for (std::int64_t a = 0; a <= 7 && oracle.first < 0; ++a)
    for (std::int64_t b = 0; b <= a; ++b)
      if (a * a + b * b == 45) {
        oracle = {a, b};
        break;
      }
  CHECK(oracle == std::pair<std::int64_t, std::int64_t>{6, 3});
  CHECK(two_squares_representable(45) == oracle);

  for (std::int64_t n = 1; n <= 10000; ++n) {
    const auto w = two_squares_representable(n);
    REQUIRE(w.has_value() == brute_two_squares(n));
    if (w) REQUIRE(w->first * w->first + w->second * w->second == n);
  }
}

TEST_CASE("Eisenstein representability") {
  std::vector<std::int64_t> first;
  for (std::int64_t n = 1; first.size() < 12; ++n)
    if (eisenstein_representable(n)) first.push_back(n);
  CHECK(first == std::vector<std::int64_t>{1, 3, 4, 7, 9, 12, 13, 16, 19, 21, 25, 27});
  CHECK_FALSE(eisenstein_representable(2).has_value());

  std::pair<std::int64_t, std::int64_t> oracle{-1, -1};
  for (std::int64_t a = 0; a <= 7 && oracle.first < 0; ++a)
    for (std::int64_t b = 0; b <= a; ++b)
      if (a * a + a * b + b * b == 49) {
        oracle = {a, b};
        break;
      }
  CHECK(eisenstein_representable(49) == oracle);
}

TEST_CASE("four squares") {
  using T = std::array<std::int64_t, 4>;
  CHECK(four_squares(1) == T{1, 0, 0, 0});
  CHECK(four_squares(7) == T{2, 1, 1, 1});
  CHECK(four_squares(25) == T{5, 0, 0, 0});

  // Oracle: every sorted decomposition, the lexicographically largest wins.
  auto oracle = [](std::int64_t m) {
    T best{-1, 0, 0, 0};
    for (std::int64_t a = 0; a * a <= m; ++a)
      for (std::int64_t b = 0; b <= a && a * a + b * b <= m; ++b)
        for (std::int64_t c = 0; c <= b && a * a + b * b + c * c <= m; ++c)
          for (std::int64_t d = 0; d <= c; ++d)
            if (a * a + b * b + c * c + d * d == m) best = std::max(best, T{a, b, c, d});
    return best;
  };
  for (std::int64_t m : {7, 25, 30, 50, 99, 130}) CHECK(four_squares(m) == oracle(m));
  for (std::int64_t m = 1; m <= 10000; ++m) {
    const T s = four_squares(m);
    REQUIRE(s[0] * s[0] + s[1] * s[1] + s[2] * s[2] + s[3] * s[3] == m);
    REQUIRE((s[0] >= s[1] && s[1] >= s[2] && s[2] >= s[3] && s[3] >= 0));
  }
}

TEST_CASE("left and right multiplication matrices") {
  CHECK(left_matrix(Quaternion::lipschitz(1, 0, 0, 0)) == scaled_identity(4, Rational(1)));
  const RatMatrix li = left_matrix(Quaternion::lipschitz(0, 1, 0, 0));
  CHECK(li * transpose(li) == scaled_identity(4, Rational(1)));

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int t = 0; t < 200; ++t) {
    const Quaternion x = Quaternion::lipschitz(d(rng), d(rng), d(rng), d(rng));
    const Quaternion y = Quaternion::lipschitz(d(rng), d(rng), d(rng), d(rng));
    const RatMatrix lx = left_matrix(x), ry = right_matrix(y), rx = right_matrix(x);
    CHECK(lx * ry == ry * lx);
    CHECK(lx * transpose(lx) == scaled_identity(4, norm(x)));
    CHECK(rx * transpose(rx) == scaled_identity(4, norm(x)));
  }
  // Hurwitz elements too.
  const Quaternion h = Quaternion::hurwitz_twice(1, 1, 1, 5);
  const RatMatrix lh = left_matrix(h);
  CHECK(lh * transpose(lh) == scaled_identity(4, norm(h)));
  CHECK(lh * right_matrix(h) == right_matrix(h) * lh);
}

TEST_CASE("gcd and lcm") {
  const auto z = gcd_lcm(std::int64_t{3}, std::int64_t{5});
  CHECK(z.gcd == 1);
  CHECK(z.lcm == 15);

  const auto g = gcd_lcm(GaussianInt{2, 1}, GaussianInt{3, 0});
  CHECK(g.gcd == GaussianInt{1, 0});
  CHECK(g.lcm.norm() == 45);

  const auto h = gcd_lcm(GaussianInt{1, 1}, GaussianInt{2, 0});
  CHECK(h.gcd == GaussianInt{1, 1});
  // 2 = -i (1 + i)^2, so the lcm is 2 up to a unit; norms balance.
  CHECK(h.lcm == GaussianInt{2, 0});
  CHECK(h.gcd.norm() * h.lcm.norm() == 2 * 4);

  CHECK_THROWS_AS(gcd_lcm(GaussianInt{0, 0}, GaussianInt{3, 0}), InputError);
  CHECK_THROWS_AS(gcd_lcm(std::int64_t{0}, std::int64_t{3}), InputError);
}

TEST_CASE("gcd divides both inputs and is divisible by common divisors") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> d(-6, 6);
  for (int t = 0; t < 500; ++t) {
    const GaussianInt c{d(rng), d(rng)}, a{d(rng), d(rng)}, b{d(rng), d(rng)};
    if (c.is_zero() || a.is_zero() || b.is_zero()) continue;
    const GaussianInt x = c * a, y = c * b;
    const auto r = gcd_lcm(x, y);
    REQUIRE(divide(x, r.gcd).has_value());
    REQUIRE(divide(y, r.gcd).has_value());
    REQUIRE(divide(r.gcd, c).has_value());
    REQUIRE(divide(r.lcm, x).has_value());
    REQUIRE(divide(r.lcm, y).has_value());
    REQUIRE(r.gcd.norm() * r.lcm.norm() == x.norm() * y.norm());
    REQUIRE(canonical_associate(r.gcd) == r.gcd);
  }
  for (int t = 0; t < 500; ++t) {
    const EisensteinInt c{d(rng), d(rng)}, a{d(rng), d(rng)}, b{d(rng), d(rng)};
    if (c.is_zero() || a.is_zero() || b.is_zero()) continue;
    const EisensteinInt x = c * a, y = c * b;
    const auto r = gcd_lcm(x, y);
    REQUIRE(divide(x, r.gcd).has_value());
    REQUIRE(divide(y, r.gcd).has_value());
    REQUIRE(divide(r.gcd, c).has_value());
    REQUIRE(r.gcd.norm() * r.lcm.norm() == x.norm() * y.norm());
    REQUIRE(canonical_associate(r.gcd) == r.gcd);
  }
}

TEST_CASE("norm is multiplicative") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> d(-20, 20);
  for (int t = 0; t < 1000; ++t) {
    const GaussianInt a{d(rng), d(rng)}, b{d(rng), d(rng)};
    REQUIRE((a * b).norm() == a.norm() * b.norm());
    const EisensteinInt e{d(rng), d(rng)}, f{d(rng), d(rng)};
    REQUIRE((e * f).norm() == e.norm() * f.norm());
    const Quaternion p = Quaternion::lipschitz(d(rng), d(rng), d(rng), d(rng));
    const Quaternion q = Quaternion::lipschitz(d(rng), d(rng), d(rng), d(rng));
    REQUIRE(norm(p * q) == norm(p) * norm(q));
    const int o = 2 * d(rng) + 1;
    const Quaternion h = Quaternion::hurwitz_twice(o, 2 * d(rng) + 1, 2 * d(rng) + 1, 2 * d(rng) + 1);
    REQUIRE(norm(h * q) == norm(h) * norm(q));
    REQUIRE(norm(h * h) == norm(h) * norm(h));
  }
}

TEST_CASE("Hurwitz components must share parity") {
  CHECK_THROWS_AS(Quaternion::hurwitz_twice(1, 2, 1, 1), InputError);
  CHECK_NOTHROW(Quaternion::hurwitz_twice(1, 1, 1, 1));
}

TEST_CASE("ring element text round trip") {
  CHECK(format_element(parse_element("2,1", RingKind::Gaussian)) == "2,1");
  CHECK(format_element(parse_element("1/2,1/2,1/2,5/2", RingKind::Quaternion)) == "1/2,1/2,1/2,5/2");
  CHECK(format_element(parse_element("7", RingKind::Integer)) == "7");
  CHECK_THROWS_AS(parse_element("x", RingKind::Integer), InputError);
}
