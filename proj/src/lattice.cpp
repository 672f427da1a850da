#include "mdlvq/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>

#include "mdlvq/error.hpp"

namespace mdlvq {

namespace {

constexpr std::array<std::array<std::int64_t, 4>, 4> kD4Rows{{
    {1, 1, 0, 0},
    {-1, 0, 1, 0},
    {0, -1, 0, 1},
    {0, -1, 0, -1},
}};

std::size_t at(int r, int c) { return static_cast<std::size_t>(r * kMaxDim + c); }

// Voronoi-relevant vectors: in each nonzero class of L/2L keep the class
// minimum when it is attained by a single +-pair.
std::vector<Coeffs> find_relevant(const GramForm& form) {
  const int L = form.dim;
  constexpr int R = 3;
  std::map<Coeffs, std::pair<std::int64_t, std::vector<Coeffs>>> classes;
  Coeffs v{};
  std::int64_t total = 1;
  for (int i = 0; i < L; ++i) total *= 2 * R + 1;
  for (std::int64_t code = 0; code < total; ++code) {
    auto rest = code;
    bool zero = true;
    for (int i = 0; i < L; ++i) {
      v[i] = rest % (2 * R + 1) - R;
      rest /= 2 * R + 1;
      zero = zero && v[i] == 0;
    }
    if (zero) continue;
    Coeffs cls{};
    for (int i = 0; i < L; ++i) cls[i] = floor_mod(v[i], 2);
    const auto n = form.norm(v);
    auto [it, fresh] = classes.try_emplace(cls, n, std::vector<Coeffs>{v});
    if (fresh) continue;
    if (n < it->second.first) {
      it->second = {n, {v}};
    } else if (n == it->second.first) {
      it->second.second.push_back(v);
    }
  }
  std::vector<Coeffs> out;
  for (const auto& [cls, entry] : classes)
    if (entry.second.size() == 2) out.insert(out.end(), entry.second.begin(), entry.second.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool lex_less(const Coeffs& a, const Coeffs& b) { return a < b; }

}  // namespace

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Zn: return "Zn";
    case LatticeKind::A2: return "A2";
    case LatticeKind::D4: return "D4";
  }
  return "?";
}

LatticeKind parse_lattice_kind(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "zn" || s == "z") return LatticeKind::Zn;
  if (s == "a2") return LatticeKind::A2;
  if (s == "d4") return LatticeKind::D4;
  throw InputError("unknown lattice kind '" + name + "'");
}

Lattice Lattice::zn(int dim, Rational scale) {
  if (dim < 1 || dim > kMaxDim) throw InputError("Zn dimension must be in [1, 4]");
  if (scale <= Rational(0)) throw InputError("lattice scale must be positive");
  Lattice lat;
  lat.kind_ = LatticeKind::Zn;
  lat.dim_ = dim;
  lat.scale_ = scale;
  lat.form_.dim = dim;
  lat.form_.den = scale.denominator() * scale.denominator();
  for (int i = 0; i < dim; ++i) lat.form_.g[at(i, i)] = scale.numerator() * scale.numerator();
  const double s = to_double(scale);
  for (int i = 0; i < dim; ++i) lat.gen_[at(i, i)] = s;
  lat.covering_sq_ = Rational(dim, 4) * scale * scale;
  lat.volume_ = std::pow(s, dim);
  lat.finish();
  return lat;
}

Lattice Lattice::a2(Rational scale) {
  if (scale <= Rational(0)) throw InputError("lattice scale must be positive");
  Lattice lat;
  lat.kind_ = LatticeKind::A2;
  lat.dim_ = 2;
  lat.scale_ = scale;
  lat.form_.dim = 2;
  const auto p2 = scale.numerator() * scale.numerator();
  lat.form_.den = 2 * scale.denominator() * scale.denominator();
  lat.form_.g[at(0, 0)] = 2 * p2;
  lat.form_.g[at(0, 1)] = -p2;
  lat.form_.g[at(1, 0)] = -p2;
  lat.form_.g[at(1, 1)] = 2 * p2;
  const double s = to_double(scale);
  lat.gen_[at(0, 0)] = s;
  lat.gen_[at(1, 0)] = -0.5 * s;
  lat.gen_[at(1, 1)] = 0.5 * std::sqrt(3.0) * s;
  lat.covering_sq_ = Rational(1, 3) * scale * scale;
  lat.volume_ = 0.5 * std::sqrt(3.0) * s * s;
  lat.finish();
  return lat;
}

Lattice Lattice::d4(Rational scale) {
  if (scale <= Rational(0)) throw InputError("lattice scale must be positive");
  Lattice lat;
  lat.kind_ = LatticeKind::D4;
  lat.dim_ = 4;
  lat.scale_ = scale;
  lat.form_.dim = 4;
  const auto p2 = scale.numerator() * scale.numerator();
  lat.form_.den = scale.denominator() * scale.denominator();
  const double s = to_double(scale);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      std::int64_t d = 0;
      for (int k = 0; k < 4; ++k) d += kD4Rows[i][k] * kD4Rows[j][k];
      lat.form_.g[at(i, j)] = p2 * d;
      lat.gen_[at(i, j)] = s * static_cast<double>(kD4Rows[i][j]);
    }
  }
  lat.covering_sq_ = scale * scale;
  lat.volume_ = 2.0 * std::pow(s, 4);
  lat.finish();
  return lat;
}

Lattice Lattice::make(LatticeKind kind, int dim, Rational scale) {
  switch (kind) {
    case LatticeKind::Zn: return zn(dim, scale);
    case LatticeKind::A2:
      if (dim != 2) throw InputError("A2 has dimension 2");
      return a2(scale);
    case LatticeKind::D4:
      if (dim != 4) throw InputError("D4 has dimension 4");
      return d4(scale);
  }
  throw InputError("unknown lattice kind");
}

void Lattice::finish() {
  if (const auto g = exact_generator()) {
    const RatMatrix inv = inverse(*g);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) gen_inv_[at(i, j)] = to_double(inv(i, j));
  } else {
    const double a = gen_[at(0, 0)], c = gen_[at(1, 0)], d = gen_[at(1, 1)];
    gen_inv_[at(0, 0)] = 1.0 / a;
    gen_inv_[at(1, 0)] = -c / (a * d);
    gen_inv_[at(1, 1)] = 1.0 / d;
  }
  relevant_ = find_relevant(form_);
}

RatMatrix Lattice::gram() const {
  RatMatrix a(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) a(i, j) = Rational(form_.g[at(i, j)], form_.den);
  return a;
}

std::optional<RatMatrix> Lattice::exact_generator() const {
  if (kind_ == LatticeKind::A2) return std::nullopt;
  RatMatrix g(dim_, dim_);
  if (kind_ == LatticeKind::Zn) {
    for (int i = 0; i < dim_; ++i) g(i, i) = scale_;
  } else {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) = scale_ * Rational(kD4Rows[i][j]);
  }
  return g;
}

std::array<double, kMaxDim> Lattice::embed(const Coeffs& c) const {
  std::array<double, kMaxDim> x{};
  for (int i = 0; i < dim_; ++i) {
    if (c[i] == 0) continue;
    for (int j = 0; j < dim_; ++j) x[j] += static_cast<double>(c[i]) * gen_[at(i, j)];
  }
  return x;
}

namespace {

double dist_sq(const Lattice& lat, const Coeffs& c, std::span<const double> x) {
  const auto p = lat.embed(c);
  double s = 0.0;
  for (int j = 0; j < lat.dim(); ++j) {
    const double d = x[j] - p[j];
    s += d * d;
  }
  return s;
}

// D4 ambient integer vector z (sum even) -> coefficients z G^-1.
Coeffs d4_coeffs(const std::array<std::int64_t, 4>& z) {
  // Solve c G = z for the fixed generator rows; 2 G^-1 is integral.
  static const IntMatrix twice_inv = [] {
    RatMatrix g(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) = Rational(kD4Rows[i][j]);
    return to_integer(Rational(2) * inverse(g));
  }();
  Coeffs c{};
  for (int j = 0; j < 4; ++j) {
    std::int64_t s = 0;
    for (int i = 0; i < 4; ++i) s += z[i] * twice_inv(i, j);
    c[j] = s / 2;
  }
  return c;
}

LatticePoint nearest_d4(const Lattice& lat, std::span<const double> x) {
  const double s = to_double(lat.scale());
  std::array<double, 4> y{};
  std::array<std::int64_t, 4> r{};
  std::array<double, 4> delta{};
  bool ambiguous = false;
  std::int64_t parity = 0;
  for (int i = 0; i < 4; ++i) {
    y[i] = x[i] / s;
    const double fl = std::floor(y[i]);
    const double frac = y[i] - fl;
    if (frac == 0.5 || frac == 0.0) ambiguous = true;
    r[i] = static_cast<std::int64_t>(frac > 0.5 ? fl + 1.0 : fl);
    delta[i] = std::abs(y[i] - static_cast<double>(r[i]));
    parity += r[i];
  }
  if (floor_mod(parity, 2) != 0) {
    int worst = 0;
    for (int i = 1; i < 4; ++i)
      if (delta[i] > delta[worst]) worst = i;
    for (int i = 0; i < 4; ++i)
      if (i != worst && delta[i] == delta[worst]) ambiguous = true;
    if (!ambiguous) r[worst] += y[worst] > static_cast<double>(r[worst]) ? 1 : -1;
  }
  if (!ambiguous) return {d4_coeffs(r)};
  // Exhaustive neighbourhood search with exact tie-breaking on coefficients.
  const std::array<std::int64_t, 4> base = r;
  Coeffs best{};
  double best_d = std::numeric_limits<double>::infinity();
  for (int code = 0; code < 81; ++code) {
    std::array<std::int64_t, 4> z{};
    int rest = code;
    std::int64_t sum = 0;
    for (int i = 0; i < 4; ++i) {
      z[i] = base[i] + (rest % 3) - 1;
      rest /= 3;
      sum += z[i];
    }
    if (floor_mod(sum, 2) != 0) continue;
    const Coeffs c = d4_coeffs(z);
    const double d = dist_sq(lat, c, x);
    if (d < best_d || (d == best_d && lex_less(c, best))) {
      best_d = d;
      best = c;
    }
  }
  return {best};
}

}  // namespace

LatticePoint nearest_point(const Lattice& lat, std::span<const double> x) {
  if (static_cast<int>(x.size()) != lat.dim()) throw InputError("dimension mismatch in nearest_point");
  for (double v : x)
    if (!std::isfinite(v)) throw InputError("non-finite input to nearest_point");
  switch (lat.kind()) {
    case LatticeKind::Zn: {
      const double s = to_double(lat.scale());
      LatticePoint p;
      for (int i = 0; i < lat.dim(); ++i) {
        const double y = x[i] / s;
        const double fl = std::floor(y);
        p.coeffs[i] = static_cast<std::int64_t>(y - fl > 0.5 ? fl + 1.0 : fl);
      }
      return p;
    }
    case LatticeKind::D4: return nearest_d4(lat, x);
    case LatticeKind::A2: {
      // Real coefficients t = x G^-1, then the best of a 4x4 neighbourhood.
      const double s = to_double(lat.scale());
      const double t1 = x[1] / (0.5 * std::sqrt(3.0) * s);
      const double t0 = x[0] / s + 0.5 * t1;
      const auto b0 = static_cast<std::int64_t>(std::floor(t0));
      const auto b1 = static_cast<std::int64_t>(std::floor(t1));
      Coeffs best{};
      double best_d = std::numeric_limits<double>::infinity();
      for (std::int64_t i = -1; i <= 2; ++i)
        for (std::int64_t j = -1; j <= 2; ++j) {
          const Coeffs c{b0 + i, b1 + j, 0, 0};
          const double d = dist_sq(lat, c, x);
          if (d < best_d || (d == best_d && lex_less(c, best))) {
            best_d = d;
            best = c;
          }
        }
      return {best};
    }
  }
  throw InputError("unsupported lattice kind");
}

SecondMoment second_moment(const Lattice& lat, std::size_t samples, std::uint64_t seed, Execution exec) {
  SecondMoment out;
  if (lat.kind() == LatticeKind::Zn) {
    out.value = 1.0 / 12.0;
    out.exact = true;
    return out;
  }
  if (samples == 0) throw InputError("second_moment needs at least one sample");
  const int L = lat.dim();
  const std::size_t chunks = chunk_count(samples);
  std::vector<double> sum(chunks, 0.0), sum_sq(chunks, 0.0);
  for_each_index(chunks, exec, [&](std::size_t c) {
    auto eng = chunk_engine(seed, 0x5ec0, c);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(samples, begin + kChunkSize);
    double s = 0.0, s2 = 0.0;
    std::array<double, kMaxDim> x{};
    for (std::size_t k = begin; k < end; ++k) {
      x.fill(0.0);
      for (int i = 0; i < L; ++i) {
        const double u = unif(eng);
        for (int j = 0; j < L; ++j) x[j] += u * lat.generator(i, j);
      }
      const auto p = nearest_point(lat, std::span<const double>(x.data(), static_cast<std::size_t>(L)));
      const auto q = lat.embed(p.coeffs);
      double e = 0.0;
      for (int j = 0; j < L; ++j) e += (x[j] - q[j]) * (x[j] - q[j]);
      e /= L;
      s += e;
      s2 += e * e;
    }
    sum[c] = s;
    sum_sq[c] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s += sum[c];
    s2 += sum_sq[c];
  }
  const double n = static_cast<double>(samples);
  const double mean = s / n;
  const double var = std::max(0.0, s2 / n - mean * mean);
  const double norm = std::pow(lat.volume(), 2.0 / L);
  out.value = mean / norm;
  out.std_error = std::sqrt(var / n) / norm;
  out.samples = samples;
  return out;
}

void check_similarity(const GramForm& form, const Similarity& sim) {
  const int L = form.dim;
  if (sim.u.rows() != L || sim.u.cols() != L) throw ConstructionError("similarity matrix has wrong shape");
  if (sim.scale_sq <= Rational(0)) throw ConstructionError("similarity scale must be positive");
  IntMatrix a(L, L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) a(i, j) = form.g[at(i, j)];
  const IntMatrix uau = sim.u * a * sim.u.transpose();
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      if (Rational(uau(i, j)) != sim.scale_sq * Rational(a(i, j)))
        throw ConstructionError("U A U^T is not a multiple of A");
  const auto det = determinant(sim.u);
  if (det <= 0) throw ConstructionError("similarity has non-positive determinant");
  Rational pow(1);
  for (int i = 0; i < L; ++i) pow *= sim.scale_sq;
  if (Rational(det) * Rational(det) != pow) throw ConstructionError("det U does not equal c^L");
}

std::int64_t index_of(const Similarity& sim, int dim) {
  if (sim.u.rows() != dim) throw InputError("similarity dimension mismatch");
  const auto det = determinant(sim.u);
  Rational pow(1);
  for (int i = 0; i < dim; ++i) pow *= sim.scale_sq;
  if (det <= 0 || Rational(det) * Rational(det) != pow)
    throw ConstructionError("index is not c^L for this similarity");
  return det;
}

}  // namespace mdlvq
