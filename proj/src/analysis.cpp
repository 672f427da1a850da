#include "mdlvq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mdlvq/error.hpp"

namespace mdlvq {

HighRatePrediction predict(const PredictInputs& in) {
  if (!(in.gamma1 >= 0.0 && in.gamma2 >= 0.0) || (in.gamma1 == 0.0 && in.gamma2 == 0.0))
    throw InputError("weights must be nonnegative and not both zero");
  if (in.L < 1 || !(in.beta > 0.0)) throw InputError("dimension and scale must be positive");
  const double excess_rate = in.R1 + in.R2 - in.R0;
  if (excess_rate > std::min(in.R1, in.R2))
    throw InputError("rates are inconsistent: R1 + R2 - R0 exceeds min(R1, R2)");
  HighRatePrediction p;
  p.in = in;
  const double two_h = std::exp2(2.0 * in.h_p);
  const double s = in.G_s * two_h * std::exp2(-2.0 * excess_rate);
  const double sum = in.gamma1 + in.gamma2;
  p.d0_pred = in.G_base * std::exp2(2.0 * (in.h_p - in.R0));
  p.J = in.gamma1 * in.gamma2 / sum * s;
  if (in.gamma2 == 0.0) {
    // All weight on description 1: it is a plain quantiser at rate R1.
    p.d1_pred = in.G_s * two_h * std::exp2(-2.0 * in.R1);
    p.d2_pred = s;
    p.J = in.gamma1 * p.d1_pred;
  } else if (in.gamma1 == 0.0) {
    p.d1_pred = s;
    p.d2_pred = in.G_s * two_h * std::exp2(-2.0 * in.R2);
    p.J = in.gamma2 * p.d2_pred;
  } else {
    p.d1_pred = in.gamma2 * in.gamma2 / (sum * sum) * s;
    p.d2_pred = in.gamma1 * in.gamma1 / (sum * sum) * s;
    p.ratio_pred = (in.gamma2 / in.gamma1) * (in.gamma2 / in.gamma1);
  }
  p.js2_bound = sum * in.rho_cap_sq * in.beta * in.beta;
  return p;
}

GammaRatio optimal_gamma_ratio(const ChannelModel& ch) {
  if (!(ch.p1 > 0.0 && ch.p1 < 1.0 && ch.p2 > 0.0 && ch.p2 < 1.0))
    throw InputError("loss probabilities must lie strictly between 0 and 1");
  GammaRatio r;
  r.ratio = (1.0 - ch.p1) * ch.p2 / ((1.0 - ch.p2) * ch.p1);
  r.gamma = r.ratio / (1.0 + r.ratio);
  const auto c = avg_dist_coefficients(ch, 0.0, 1.0);
  r.curvature = 2.0 * (c.B1 + c.B2);
  return r;
}

AvgDistCoefficients avg_dist_coefficients(const ChannelModel& ch, double d0, double scale) {
  AvgDistCoefficients c;
  // d1 carries (gamma2 / sum)^2, d2 carries (gamma1 / sum)^2.
  c.A = (1.0 - ch.p1) * (1.0 - ch.p2) * d0 + ch.p1 * ch.p2 * ch.source_power;
  c.B1 = (1.0 - ch.p2) * ch.p1 * scale;
  c.B2 = (1.0 - ch.p1) * ch.p2 * scale;
  return c;
}

double avg_dist_objective(const AvgDistCoefficients& c, double g) {
  return c.A + c.B1 * g * g + c.B2 * (1.0 - g) * (1.0 - g);
}

double avg_dist_argmin(const AvgDistCoefficients& c) {
  if (!(c.B1 + c.B2 > 0.0)) throw InputError("objective is not strictly convex");
  return c.B2 / (c.B1 + c.B2);
}

double average_distortion(const ChannelModel& ch, double d0, double d1, double d2) {
  return (1.0 - ch.p1) * (1.0 - ch.p2) * d0 + (1.0 - ch.p1) * ch.p2 * d1 + (1.0 - ch.p2) * ch.p1 * d2 +
         ch.p1 * ch.p2 * ch.source_power;
}

double ozarow_bound(double R1, double R2, double d1, double d2) {
  const double e1 = std::exp2(-2.0 * R1), e2 = std::exp2(-2.0 * R2);
  if (d1 < e1 || d2 < e2) throw InputError("side distortion below the single-description bound");
  const double e = e1 * e2;
  d1 = std::min(d1, 1.0);
  d2 = std::min(d2, 1.0);
  if (d1 + d2 >= 1.0 + e) return e;
  const double pi = (1.0 - d1) * (1.0 - d2);
  const double delta = d1 * d2 - e;
  const double r = std::sqrt(pi) - std::sqrt(std::max(delta, 0.0));
  return e / (1.0 - r * r);
}

namespace {

// Largest t in [lo, hi] with pred(t) false, pred monotone (false then true).
template <typename F>
double bisect(double lo, double hi, F&& pred) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

double side_gap_db(double R1, double R2, double d0, double d1, double d2) {
  const double e1 = std::exp2(-2.0 * R1), e2 = std::exp2(-2.0 * R2);
  // Shrink (d1, d2) by t while d0 stays achievable.
  const double t_min = std::max(e1 / d1, e2 / d2);
  if (t_min > 1.0) throw InputError("side distortion below the single-description bound");
  auto achievable = [&](double t) { return d0 >= ozarow_bound(R1, R2, t * d1, t * d2) * (1.0 - 1e-12); };
  if (!achievable(1.0)) return -10.0 * std::log10(bisect(1.0, 1e6, achievable));
  if (achievable(t_min)) return -10.0 * std::log10(t_min);
  return -10.0 * std::log10(bisect(t_min, 1.0, achievable));
}

double ray_gap_db(double R1, double R2, double d0, double d1, double d2) {
  const double e1 = std::exp2(-2.0 * R1), e2 = std::exp2(-2.0 * R2);
  const double t_min = std::max(e1 / d1, e2 / d2);
  if (t_min > 1.0) throw InputError("side distortion below the single-description bound");
  auto achievable = [&](double t) { return t * d0 >= ozarow_bound(R1, R2, t * d1, t * d2) * (1.0 - 1e-12); };
  if (!achievable(1.0)) return -10.0 * std::log10(bisect(1.0, 1e6, achievable));
  if (achievable(t_min)) return -10.0 * std::log10(t_min);
  return -10.0 * std::log10(bisect(t_min, 1.0, achievable));
}

double gaussian_entropy_bits() { return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e); }

}  // namespace mdlvq
