#include "mdlvq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_map>

#include "mdlvq/error.hpp"

namespace mdlvq {

std::string to_string(const Source& s) {
  if (s.kind == SourceKind::Gaussian) return "gaussian";
  char buf[64];
  std::snprintf(buf, sizeof buf, "uniform:%.17g", s.box);
  return buf;
}

Source parse_source(const std::string& text) {
  if (text == "gaussian") return {SourceKind::Gaussian, 1.0};
  if (text.rfind("uniform:", 0) == 0) {
    char* end = nullptr;
    const double box = std::strtod(text.c_str() + 8, &end);
    if (end == text.c_str() + 8 || *end != '\0' || !(box > 0.0) || !std::isfinite(box))
      throw InputError("bad uniform box in source '" + text + "'");
    return {SourceKind::Uniform, box};
  }
  throw InputError("unknown source '" + text + "' (expected gaussian or uniform:<box>)");
}

double differential_entropy(const Source& s) {
  return s.kind == SourceKind::Gaussian ? gaussian_entropy_bits() : std::log2(s.box);
}

namespace {

IntMatrix adjugate(const IntMatrix& m, std::int64_t& det) {
  det = determinant(m);
  const RatMatrix inv = inverse(to_rational(m));
  return to_integer(Rational(det) * inv);
}

}  // namespace

Quantizer::Quantizer(Labeling labeling, double beta) : lab_(std::move(labeling)), beta_(beta) {
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw InputError("beta must be positive");
  if (lab_.table.empty()) throw InputError("labeling is empty");
  adj1_ = adjugate(lab_.system.sub1.basis(), det1_);
  adj2_ = adjugate(lab_.system.sub2.basis(), det2_);
}

Coeffs Quantizer::to_index(const Coeffs& point, int side) const {
  const IntMatrix& adj = side == 1 ? adj1_ : adj2_;
  const std::int64_t det = side == 1 ? det1_ : det2_;
  Coeffs c = row_times(point, adj);
  for (int i = 0; i < dim(); ++i) {
    if (c[i] % det != 0) throw CorruptionError("label is not a point of the sublattice");
    c[i] /= det;
  }
  return c;
}

Encoded Quantizer::encode(std::span<const double> x) const {
  const int L = dim();
  if (static_cast<int>(x.size()) != L) throw InputError("source vector has the wrong dimension");
  std::array<double, kMaxDim> scaled{};
  for (int i = 0; i < L; ++i) scaled[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] / beta_;
  Encoded out;
  out.lambda = nearest_point(lab_.system.base, std::span<const double>(scaled.data(), static_cast<std::size_t>(L)));
  const auto [l1, l2] = lab_.label(out.lambda.coeffs);
  out.idx1 = to_index(l1, 1);
  out.idx2 = to_index(l2, 2);
  return out;
}

LatticePoint Quantizer::decode1(const Coeffs& idx1) const {
  return LatticePoint{row_times(idx1, lab_.system.sub1.basis())};
}

LatticePoint Quantizer::decode2(const Coeffs& idx2) const {
  return LatticePoint{row_times(idx2, lab_.system.sub2.basis())};
}

LatticePoint Quantizer::decode0(const Coeffs& idx1, const Coeffs& idx2) const {
  return LatticePoint{lab_.unlabel(decode1(idx1).coeffs, decode2(idx2).coeffs)};
}

std::array<double, kMaxDim> Quantizer::reconstruct(const LatticePoint& p) const {
  auto y = lab_.system.base.embed(p.coeffs);
  for (auto& v : y) v *= beta_;
  return y;
}

void draw_sample(const Source& s, std::mt19937_64& rng, std::span<double> out) {
  if (s.kind == SourceKind::Gaussian) {
    std::normal_distribution<double> nd(0.0, 1.0);
    for (auto& v : out) v = nd(rng);
  } else {
    std::uniform_real_distribution<double> ud(-0.5 * s.box, 0.5 * s.box);
    for (auto& v : out) v = ud(rng);
  }
}

namespace {

using Counts = std::unordered_map<Coeffs, std::int64_t, CoeffsHash>;

struct ChunkResult {
  std::array<double, 3> sum{}, sum_sq{};
  Counts c0, c1, c2;
};

Estimate entropy(const Counts& counts, std::size_t n, int L, std::size_t& support) {
  std::vector<std::int64_t> c;
  c.reserve(counts.size());
  for (const auto& kv : counts) c.push_back(kv.second);
  std::sort(c.begin(), c.end());
  support = c.size();
  const double N = static_cast<double>(n);
  double h = 0.0, h2 = 0.0;
  for (auto k : c) {
    const double p = static_cast<double>(k) / N;
    const double l = -std::log2(p);
    h += p * l;
    h2 += p * l * l;
  }
  return {h / L, std::sqrt(std::max(h2 - h * h, 0.0) / N) / L};
}

}  // namespace

RateDistortionReport measure(const Quantizer& q, const MeasureConfig& cfg) {
  if (cfg.samples < 1) throw InputError("need at least one sample");
  const int L = q.dim();
  const std::size_t chunks = chunk_count(cfg.samples);
  std::vector<ChunkResult> results(chunks);
  for_each_index(chunks, cfg.exec, [&](std::size_t c) {
    auto rng = chunk_engine(cfg.seed, 0, c);
    ChunkResult& r = results[c];
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(cfg.samples, begin + kChunkSize);
    std::array<double, kMaxDim> x{};
    const std::span<double> xs(x.data(), static_cast<std::size_t>(L));
    for (std::size_t i = begin; i < end; ++i) {
      draw_sample(cfg.source, rng, xs);
      const Encoded e = q.encode(xs);
      const std::array<LatticePoint, 3> rec{e.lambda, q.decode1(e.idx1), q.decode2(e.idx2)};
      for (int k = 0; k < 3; ++k) {
        const auto y = q.reconstruct(rec[static_cast<std::size_t>(k)]);
        double d = 0.0;
        for (int j = 0; j < L; ++j) d += (x[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(j)]) *
                                         (x[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(j)]);
        d /= L;
        r.sum[static_cast<std::size_t>(k)] += d;
        r.sum_sq[static_cast<std::size_t>(k)] += d * d;
      }
      ++r.c0[e.lambda.coeffs];
      ++r.c1[e.idx1];
      ++r.c2[e.idx2];
    }
  });

  RateDistortionReport rep;
  rep.seed = cfg.seed;
  rep.n_samples = cfg.samples;
  rep.beta = q.beta();
  rep.source = cfg.source;
  std::array<double, 3> sum{}, sum_sq{};
  Counts c0, c1, c2;
  for (const auto& r : results) {
    for (std::size_t k = 0; k < 3; ++k) {
      sum[k] += r.sum[k];
      sum_sq[k] += r.sum_sq[k];
    }
    for (const auto& [key, v] : r.c0) c0[key] += v;
    for (const auto& [key, v] : r.c1) c1[key] += v;
    for (const auto& [key, v] : r.c2) c2[key] += v;
  }
  const double N = static_cast<double>(cfg.samples);
  std::array<Estimate, 3> d{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double mean = sum[k] / N;
    const double var = std::max(sum_sq[k] / N - mean * mean, 0.0);
    d[k] = {mean, std::sqrt(var / N)};
  }
  rep.d0 = d[0];
  rep.d1 = d[1];
  rep.d2 = d[2];
  rep.R0 = entropy(c0, cfg.samples, L, rep.support0);
  rep.R1 = entropy(c1, cfg.samples, L, rep.support1);
  rep.R2 = entropy(c2, cfg.samples, L, rep.support2);
  rep.entropy_warning = std::max({rep.support0, rep.support1, rep.support2}) * 10 > cfg.samples;

  const SublatticeSystem& sys = q.labeling().system;
  const double nu = sys.base.volume() * std::pow(q.beta(), L);
  rep.R0_analytic = differential_entropy(cfg.source) - std::log2(nu) / L;
  rep.R1_analytic = rep.R0_analytic - std::log2(static_cast<double>(sys.n1)) / L;
  rep.R2_analytic = rep.R0_analytic - std::log2(static_cast<double>(sys.n2)) / L;
  const auto [e1, e2] = side_excess(q.labeling());
  const double b2 = q.beta() * q.beta();
  rep.excess1 = b2 * to_double(e1);
  rep.excess2 = b2 * to_double(e2);
  rep.d1_closed = rep.d0.value + rep.excess1;
  rep.d2_closed = rep.d0.value + rep.excess2;
  return rep;
}

}  // namespace mdlvq
