#include "mdlvq/intmath.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "mdlvq/error.hpp"

namespace mdlvq {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty number");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      std::size_t used = 0;
      const long long num = std::stoll(s.substr(0, slash), &used);
      if (used != slash) throw InputError("malformed rational '" + s + "'");
      const std::string den_text = s.substr(slash + 1);
      const long long den = std::stoll(den_text, &used);
      if (used != den_text.size()) throw InputError("malformed rational '" + s + "'");
      if (den == 0) throw InputError("zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw InputError("malformed integer '" + s + "'");
      return Rational(v);
    }
    const bool neg = !s.empty() && s[0] == '-';
    const std::string int_part = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
    const std::string frac_part = s.substr(dot + 1);
    if (frac_part.size() > 15) throw InputError("too many decimals in '" + s + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    std::int64_t num = int_part.empty() ? 0 : std::stoll(int_part);
    num = num * scale + (frac_part.empty() ? 0 : std::stoll(frac_part));
    for (char c : int_part + frac_part)
      if (c < '0' || c > '9') throw InputError("malformed decimal '" + s + "'");
    return Rational(neg ? -num : num, scale);
  } catch (const std::logic_error&) {
    throw InputError("malformed number '" + s + "'");
  }
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string format_coeffs(const Coeffs& c, int dim, char sep) {
  std::ostringstream out;
  for (int i = 0; i < dim; ++i) {
    if (i) out << sep;
    out << c[i];
  }
  return out.str();
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    const auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return std::llabs(a / gcd64(a, b) * b);
}

ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const auto q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

IntMatrix to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (m(i, j).denominator() != 1) throw InputError("matrix entry " + to_string(m(i, j)) + " is not an integer");
      r(i, j) = m(i, j).numerator();
    }
  return r;
}

std::int64_t determinant(const IntMatrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw InputError("determinant of a non-square matrix");
  if (n == 0) return 1;
  IntMatrix a = m;
  std::int64_t sign = 1;
  std::int64_t prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Rational determinant(const RatMatrix& m) {
  const int n = m.rows();
  RatMatrix a = m;
  Rational det(1);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (a(i, k) != Rational(0)) {
        piv = i;
        break;
      }
    if (piv < 0) return Rational(0);
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Rational f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

RatMatrix inverse(const RatMatrix& m) {
  const int n = m.rows();
  RatMatrix a = m;
  RatMatrix inv = RatMatrix::identity(n);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (a(i, k) != Rational(0)) {
        piv = i;
        break;
      }
    if (piv < 0) throw InputError("singular matrix");
    for (int j = 0; j < n; ++j) {
      std::swap(a(k, j), a(piv, j));
      std::swap(inv(k, j), inv(piv, j));
    }
    const Rational p = a(k, k);
    for (int j = 0; j < n; ++j) {
      a(k, j) /= p;
      inv(k, j) /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || a(i, k) == Rational(0)) continue;
      const Rational f = a(i, k);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

namespace {

// rows r, s <- (x*r + y*s, -b*r + a*s); determinant x*a + y*b = 1.
void combine_rows(IntMatrix& m, int r, int s, std::int64_t x, std::int64_t y, std::int64_t a, std::int64_t b) {
  for (int j = 0; j < m.cols(); ++j) {
    const auto vr = m(r, j);
    const auto vs = m(s, j);
    m(r, j) = x * vr + y * vs;
    m(s, j) = -b * vr + a * vs;
  }
}

void axpy_row(IntMatrix& m, int dst, int src, std::int64_t q) {
  if (q == 0) return;
  for (int j = 0; j < m.cols(); ++j) m(dst, j) -= q * m(src, j);
}

void negate_row(IntMatrix& m, int r) {
  for (int j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

}  // namespace

HermiteForm hermite_form(const IntMatrix& m) {
  IntMatrix a = m;
  IntMatrix t = IntMatrix::identity(m.rows());
  int r = 0;
  for (int j = 0; j < a.cols() && r < a.rows(); ++j) {
    for (int i = r + 1; i < a.rows(); ++i) {
      if (a(i, j) == 0) continue;
      const auto eg = ext_gcd(a(r, j), a(i, j));
      const auto ca = a(r, j) / eg.g;
      const auto cb = a(i, j) / eg.g;
      combine_rows(a, r, i, eg.x, eg.y, ca, cb);
      combine_rows(t, r, i, eg.x, eg.y, ca, cb);
    }
    if (a(r, j) == 0) continue;
    if (a(r, j) < 0) {
      negate_row(a, r);
      negate_row(t, r);
    }
    for (int k = 0; k < r; ++k) {
      const auto q = floor_div(a(k, j), a(r, j));
      axpy_row(a, k, r, q);
      axpy_row(t, k, r, q);
    }
    ++r;
  }
  HermiteForm out;
  out.rank = r;
  out.h = IntMatrix(r, a.cols());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < a.cols(); ++j) out.h(i, j) = a(i, j);
  out.transform = t;
  return out;
}

Coeffs row_coeffs(const IntMatrix& m, int r) {
  Coeffs c{};
  for (int j = 0; j < m.cols(); ++j) c[j] = m(r, j);
  return c;
}

Coeffs row_times(const Coeffs& v, const IntMatrix& m) {
  Coeffs out{};
  for (int i = 0; i < m.rows(); ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

}  // namespace mdlvq
