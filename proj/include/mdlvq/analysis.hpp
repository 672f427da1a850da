#pragma once

#include <cstdint>

namespace mdlvq {

/// Inputs of the high-rate approximations. Rates are bits per sample,
/// h_p the per-dimension differential entropy of the source.
struct PredictInputs {
  double gamma1 = 1.0, gamma2 = 1.0;
  double R0 = 0.0, R1 = 0.0, R2 = 0.0;
  double h_p = 0.0;
  double G_s = 1.0 / 12.0;     // normalised second moment of the product sublattice
  double G_base = 1.0 / 12.0;  // and of the base lattice
  int L = 1;
  std::int64_t N1 = 1, N2 = 1;
  /// Squared covering radius of the intersection sublattice, per dimension,
  /// for the unscaled lattices; multiplied by beta^2 in the bound.
  double rho_cap_sq = 0.0;
  double beta = 1.0;
};

struct HighRatePrediction {
  PredictInputs in;
  double J = 0.0;         // dominant Lagrangian excess term
  double d0_pred = 0.0;
  double d1_pred = 0.0;
  double d2_pred = 0.0;
  double ratio_pred = 0.0;  // (gamma2 / gamma1)^2 when both weights are positive
  double js2_bound = 0.0;   // (gamma1 + gamma2) rho_cap^2 beta^2
};

/// Throws InputError unless gammas are nonnegative and not both zero and
/// R1 + R2 - R0 <= min(R1, R2).
HighRatePrediction predict(const PredictInputs& in);

struct ChannelModel {
  double p1 = 0.0, p2 = 0.0;
  double source_power = 1.0;  // E ||x||^2 per dimension
};

struct GammaRatio {
  double ratio = 1.0;  // gamma1 / gamma2
  /// Weight gamma1 / (gamma1 + gamma2) of the normalised problem.
  double gamma = 0.5;
  /// Second derivative of the normalised objective (B1, B2 from the channel,
  /// unit high-rate scale); positive means the stationary point is the minimum.
  double curvature = 0.0;
};
/// Requires 0 < p1, p2 < 1.
GammaRatio optimal_gamma_ratio(const ChannelModel& ch);

/// Coefficients of D(g) = A + B1 g^2 + B2 (1 - g)^2, g = gamma1 / (gamma1 + gamma2),
/// obtained by inserting the high-rate side distortions into the average
/// distortion; `scale` is the common factor G_s 2^(2h) 2^(-2(R1+R2-R0)).
struct AvgDistCoefficients {
  double A = 0.0, B1 = 0.0, B2 = 0.0;
};
AvgDistCoefficients avg_dist_coefficients(const ChannelModel& ch, double d0, double scale);
double avg_dist_objective(const AvgDistCoefficients& c, double g);
/// Exact minimiser B2 / (B1 + B2) of the quadratic above.
double avg_dist_argmin(const AvgDistCoefficients& c);

double average_distortion(const ChannelModel& ch, double d0, double d1, double d2);

/// Smallest central distortion achievable for a unit-variance memoryless
/// Gaussian with side rates R1, R2 and side distortions d1, d2.
/// Throws InputError when d_i < 2^(-2 R_i).
double ozarow_bound(double R1, double R2, double d1, double d2);

/// Distance of (d1, d2) above the achievable region with d0 and the rates
/// fixed: 10 log10(1/t) for the smallest t with (d0, t d1, t d2) achievable.
double side_gap_db(double R1, double R2, double d0, double d1, double d2);
/// Gap along the ray through (d0, d1, d2).
double ray_gap_db(double R1, double R2, double d0, double d1, double d2);

/// Per-dimension differential entropy of the unit Gaussian, bits.
double gaussian_entropy_bits();

}  // namespace mdlvq
