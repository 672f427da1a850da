#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mdlvq/rational.hpp"

namespace mdlvq {

inline constexpr int kMaxDim = 4;

/// Integer coefficient vector; entries past the lattice dimension stay zero.
using Coeffs = std::array<std::int64_t, kMaxDim>;

struct CoeffsHash {
  std::size_t operator()(const Coeffs& c) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto v : c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

inline Coeffs operator+(Coeffs a, const Coeffs& b) {
  for (int i = 0; i < kMaxDim; ++i) a[i] += b[i];
  return a;
}
inline Coeffs operator-(Coeffs a, const Coeffs& b) {
  for (int i = 0; i < kMaxDim; ++i) a[i] -= b[i];
  return a;
}
inline Coeffs operator-(Coeffs a) {
  for (auto& v : a) v = -v;
  return a;
}
inline Coeffs operator*(std::int64_t s, Coeffs a) {
  for (auto& v : a) v *= s;
  return a;
}

std::string format_coeffs(const Coeffs& c, int dim, char sep = ' ');

/// Floor division for signed integers.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

/// Returns g = gcd(a, b) >= 0 and x, y with a*x + b*y = g.
struct ExtGcd {
  std::int64_t g, x, y;
};
ExtGcd ext_gcd(std::int64_t a, std::int64_t b);

/// Dense row-major matrix used for construction-time algebra.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), T(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const T& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix m(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        if (aik == T(0)) continue;
        for (int j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }

  friend Matrix operator*(const T& s, Matrix m) {
    for (auto& v : m.data_) v *= s;
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<std::int64_t>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix& m);
/// Throws InputError when some entry is not an integer.
IntMatrix to_integer(const RatMatrix& m);

/// Exact determinant by fraction-free elimination.
std::int64_t determinant(const IntMatrix& m);
Rational determinant(const RatMatrix& m);
RatMatrix inverse(const RatMatrix& m);

/// Row-style Hermite normal form: T * m = [H; 0], T unimodular, H upper
/// echelon with positive pivots and entries above each pivot in [0, pivot).
struct HermiteForm {
  IntMatrix h;          // rank x cols
  IntMatrix transform;  // rows x rows
  int rank = 0;
};
HermiteForm hermite_form(const IntMatrix& m);

/// Row of `m` as a Coeffs vector (m.cols() <= kMaxDim).
Coeffs row_coeffs(const IntMatrix& m, int r);
/// v * m for a row vector v of length m.rows().
Coeffs row_times(const Coeffs& v, const IntMatrix& m);

}  // namespace mdlvq
