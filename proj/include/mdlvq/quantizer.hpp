#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "mdlvq/analysis.hpp"
#include "mdlvq/labeling.hpp"
#include "mdlvq/lattice.hpp"
#include "mdlvq/parallel.hpp"

namespace mdlvq {

enum class SourceKind { Gaussian, Uniform };

/// Memoryless source: unit Gaussian, or uniform on [-box/2, box/2)^L.
struct Source {
  SourceKind kind = SourceKind::Gaussian;
  double box = 1.0;
};
std::string to_string(const Source& s);
Source parse_source(const std::string& text);  // "gaussian" or "uniform:<box>"
/// Per-dimension differential entropy in bits.
double differential_entropy(const Source& s);

/// Description indices are coefficient vectors in the basis of sub1 / sub2.
struct Encoded {
  LatticePoint lambda;
  Coeffs idx1{};
  Coeffs idx2{};
};

/// The runtime quantiser: beta * base lattice with a labeling.
class Quantizer {
 public:
  Quantizer(Labeling labeling, double beta);

  const Labeling& labeling() const { return lab_; }
  double beta() const { return beta_; }
  int dim() const { return lab_.system.base.dim(); }

  Encoded encode(std::span<const double> x) const;
  LatticePoint decode0(const Coeffs& idx1, const Coeffs& idx2) const;
  LatticePoint decode1(const Coeffs& idx1) const;
  LatticePoint decode2(const Coeffs& idx2) const;
  /// Ambient reconstruction beta * point.
  std::array<double, kMaxDim> reconstruct(const LatticePoint& p) const;

 private:
  Coeffs to_index(const Coeffs& point, int side) const;

  Labeling lab_;
  double beta_;
  IntMatrix adj1_, adj2_;
  std::int64_t det1_ = 1, det2_ = 1;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct RateDistortionReport {
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  double beta = 1.0;
  Source source;
  /// Measured per-dimension distortions.
  Estimate d0, d1, d2;
  /// Plug-in entropies of Q(x), alpha_1, alpha_2, bits per sample.
  Estimate R0, R1, R2;
  std::size_t support0 = 0, support1 = 0, support2 = 0;
  /// Set when an observed support exceeds a tenth of the sample count.
  bool entropy_warning = false;
  /// h(p) - log2(nu beta^L)/L and R0 - log2(N_i)/L.
  double R0_analytic = 0.0, R1_analytic = 0.0, R2_analytic = 0.0;
  /// beta^2 times the table's mean excess, and measured d0 plus it.
  double excess1 = 0.0, excess2 = 0.0;
  double d1_closed = 0.0, d2_closed = 0.0;
  std::optional<HighRatePrediction> predicted;
};

struct MeasureConfig {
  Source source;
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  Execution exec = Execution::Parallel;
};

RateDistortionReport measure(const Quantizer& q, const MeasureConfig& cfg);

/// Draws sample `i` of the configured source (chunked, schedule independent).
void draw_sample(const Source& s, std::mt19937_64& rng, std::span<double> out);

}  // namespace mdlvq
