#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdlvq/io.hpp"
#include "mdlvq/labeling.hpp"
#include "mdlvq/quantizer.hpp"
#include "mdlvq/sublattice.hpp"

namespace mdlvq {

/// One experiment. Exactly one of (xi1, xi2) / (n1, n2), one of
/// (gamma1, gamma2) / (p1, p2) and one of beta / rate must be set.
struct ExperimentSpec {
  LatticeKind kind = LatticeKind::Zn;
  int dim = 2;
  std::optional<std::string> xi1, xi2;
  std::optional<std::int64_t> n1, n2;
  std::optional<Rational> gamma1, gamma2;
  std::optional<double> p1, p2;
  std::optional<double> beta;
  std::optional<double> rate;  // target central rate R0, bits/sample
  Source source;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  bool use_lcm = false;
  Execution exec = Execution::Parallel;
  std::string out_dir = ".";
  // sweep settings
  std::vector<std::pair<Rational, Rational>> gammas;
  std::vector<double> rates;
};

using ConfigMap = std::map<std::string, std::string>;

/// Flat "key = value" lines; '#' starts a comment. Later keys win.
ConfigMap parse_config(const std::string& text);
/// Builds and validates an ExperimentSpec. Unknown keys and malformed values raise
/// InputError.
ExperimentSpec spec_from_config(const ConfigMap& cfg);
void validate_spec(const ExperimentSpec& spec);
std::vector<std::string> config_keys();

/// Clean similar sublattice witness for index `n`, from the catalog.
RingElement clean_witness(LatticeKind kind, int dim, std::int64_t n);

SublatticeSystem resolve_system(const ExperimentSpec& spec);
/// Channel weights are rounded to a fraction with denominator at most 64.
std::pair<Rational, Rational> resolve_weights(const ExperimentSpec& spec);
double resolve_beta(const ExperimentSpec& spec, const SublatticeSystem& sys);

/// Best rational approximation with bounded denominator.
Rational approximate_rational(double x, std::int64_t max_den);

/// High-rate prediction for a report, using the analytic rates; G is the
/// normalised second moment of the base lattice.
HighRatePrediction predict_for(const Labeling& lab, const RateDistortionReport& rep, const Source& source,
                               double G);

struct DesignResult {
  Labeling labeling;
  RateDistortionReport report;
  nlohmann::ordered_json system;
  nlohmann::ordered_json report_doc;
  CsvTable labeling_csv;
};
DesignResult run_design(const ExperimentSpec& spec);
void write_design(const DesignResult& r, const std::string& dir);

enum class SweepKind { Gamma, Rate };
/// One rd_curve row per gamma pair or per target rate.
CsvTable run_sweep(const ExperimentSpec& spec, SweepKind kind);

CsvTable run_catalog(LatticeKind kind, int dim, std::int64_t limit);

struct VerifyReport {
  std::string suite;
  std::vector<PropertyCheck> checks;
  bool ok() const;
};
/// Systems of the property suite: clean catalog pairs with N1 N2 <= max_ns.
std::vector<std::pair<RingElement, RingElement>> property_suite_pairs(LatticeKind kind, int dim,
                                                                      std::int64_t max_ns);
VerifyReport verify_properties(std::int64_t max_ns, Execution exec);
VerifyReport verify_cld2(std::int64_t m, Execution exec);

/// Lemma family: xi1 = k (2 + i), xi2 = 3 k over odd k = 2n - 1.
struct LemmaPoint {
  int n = 0;
  std::int64_t k = 0;
  std::size_t points = 0;
  Rational deviation{0};
  Rational js1{0};
  double js2_bound = 0.0;
};
std::vector<LemmaPoint> lemma_family(int n_max, Execution exec);
VerifyReport verify_lemma51(int n_max, Execution exec);

std::string format_report(const VerifyReport& r);

}  // namespace mdlvq
