#include "mdlvq/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <sstream>

#include "mdlvq/analysis.hpp"
#include "mdlvq/error.hpp"

namespace mdlvq {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw InputError(fmt::format("{}: '{}' is not an integer", key, v));
  return x;
}

double parse_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(x)) throw InputError(fmt::format("{}: '{}' is not a number", key, v));
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InputError(fmt::format("{}: '{}' is not a boolean", key, v));
}

const std::vector<std::string> kKeys = {"lattice", "dim",     "xi1",  "xi2",    "n1",   "n2",
                                        "gamma1",  "gamma2",  "p1",   "p2",     "beta", "rate",
                                        "source",  "samples", "seed", "lcm",    "exec", "out",
                                        "gammas",  "rates"};

}  // namespace

std::vector<std::string> config_keys() { return kKeys; }

ConfigMap parse_config(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(fmt::format("config line {}: expected key = value", lineno));
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InputError(fmt::format("config line {}: empty key", lineno));
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ExperimentSpec spec_from_config(const ConfigMap& cfg) {
  ExperimentSpec s;
  for (const auto& [key, v] : cfg) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw InputError("unknown config key '" + key + "'");
    if (key == "lattice") s.kind = parse_lattice_kind(v);
    else if (key == "dim") s.dim = static_cast<int>(parse_int(key, v));
    else if (key == "xi1") s.xi1 = v;
    else if (key == "xi2") s.xi2 = v;
    else if (key == "n1") s.n1 = parse_int(key, v);
    else if (key == "n2") s.n2 = parse_int(key, v);
    else if (key == "gamma1") s.gamma1 = parse_rational(v);
    else if (key == "gamma2") s.gamma2 = parse_rational(v);
    else if (key == "p1") s.p1 = parse_real(key, v);
    else if (key == "p2") s.p2 = parse_real(key, v);
    else if (key == "beta") s.beta = parse_real(key, v);
    else if (key == "rate") s.rate = parse_real(key, v);
    else if (key == "source") s.source = parse_source(v);
    else if (key == "samples") {
      const auto n = parse_int(key, v);
      if (n < 1) throw InputError("samples must be >= 1");
      s.samples = static_cast<std::size_t>(n);
    } else if (key == "seed") {
      const auto n = parse_int(key, v);
      if (n < 0) throw InputError("seed must be nonnegative");
      s.seed = static_cast<std::uint64_t>(n);
    } else if (key == "lcm") s.use_lcm = parse_bool(key, v);
    else if (key == "exec") {
      if (v == "serial") s.exec = Execution::Serial;
      else if (v == "parallel") s.exec = Execution::Parallel;
      else throw InputError("exec must be serial or parallel");
    } else if (key == "out") s.out_dir = v;
    else if (key == "gammas") {
      s.gammas.clear();
      for (const auto& item : split(v, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw InputError("gammas: expected g1:g2 pairs, got '" + item + "'");
        s.gammas.emplace_back(parse_rational(parts[0]), parse_rational(parts[1]));
      }
    } else if (key == "rates") {
      s.rates.clear();
      for (const auto& item : split(v, ',')) s.rates.push_back(parse_real(key, item));
    }
  }
  if (s.kind == LatticeKind::A2 && !cfg.count("dim")) s.dim = 2;
  if (s.kind == LatticeKind::D4 && !cfg.count("dim")) s.dim = 4;
  validate_spec(s);
  return s;
}

void validate_spec(const ExperimentSpec& s) {
  if (s.xi1.has_value() != s.xi2.has_value()) throw InputError("give both xi1 and xi2");
  if (s.n1.has_value() != s.n2.has_value()) throw InputError("give both n1 and n2");
  if (s.xi1.has_value() == s.n1.has_value()) throw InputError("give exactly one of (xi1, xi2) and (n1, n2)");
  const bool g = s.gamma1.has_value() || s.gamma2.has_value();
  const bool p = s.p1.has_value() || s.p2.has_value();
  if (g == p) throw InputError("give exactly one of (gamma1, gamma2) and (p1, p2)");
  if (g && !(s.gamma1 && s.gamma2)) throw InputError("give both gamma1 and gamma2");
  if (p && !(s.p1 && s.p2)) throw InputError("give both p1 and p2");
  if (g && (*s.gamma1 < Rational(0) || *s.gamma2 < Rational(0) ||
            (*s.gamma1 == Rational(0) && *s.gamma2 == Rational(0))))
    throw InputError("weights must be nonnegative and not both zero");
  if (s.beta.has_value() == s.rate.has_value()) throw InputError("give exactly one of beta and rate");
  if (s.beta && !(*s.beta > 0.0)) throw InputError("beta must be positive");
  if (s.kind == LatticeKind::A2 && s.dim != 2) throw InputError("A2 has dimension 2");
  if (s.kind == LatticeKind::D4 && s.dim != 4) throw InputError("D4 has dimension 4");
  if (s.dim < 1 || s.dim > kMaxDim) throw InputError("dimension must be in [1, 4]");
  for (const auto& [a, b] : s.gammas)
    if (a < Rational(0) || b < Rational(0) || (a == Rational(0) && b == Rational(0)))
      throw InputError("sweep weights must be nonnegative and not both zero");
}

RingElement clean_witness(LatticeKind kind, int dim, std::int64_t n) {
  if (n < 1) throw InputError("index must be positive");
  std::int64_t root = n;
  if (dim == 4) {
    root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (root * root != n) throw InputError(fmt::format("index {} is not a square, no similar sublattice in 4 dimensions", n));
  }
  const auto entries = catalog(kind, dim, root);
  if (entries.empty() || entries.back().root != root || entries.back().index != n)
    throw InputError(fmt::format("no similar sublattice of index {} for {}{}", n, to_string(kind), dim));
  if (!entries.back().clean)
    throw InputError(fmt::format("no clean similar sublattice of index {} for {}{}", n, to_string(kind), dim));
  return parse_element(entries.back().xi, ring_for(Lattice::make(kind, dim)));
}

SublatticeSystem resolve_system(const ExperimentSpec& spec) {
  const Lattice base = Lattice::make(spec.kind, spec.dim);
  RingElement x1, x2;
  if (spec.xi1) {
    // A bare integer is a rational integer in any ring.
    auto parse = [&](const std::string& t) {
      return parse_element(t, t.find(',') == std::string::npos ? RingKind::Integer : ring_for(base));
    };
    x1 = parse(*spec.xi1);
    x2 = parse(*spec.xi2);
  } else {
    x1 = clean_witness(spec.kind, spec.dim, *spec.n1);
    x2 = clean_witness(spec.kind, spec.dim, *spec.n2);
  }
  SublatticeSystem sys = build_system(base, x1, x2);
  check_system(sys);
  return sys;
}

Rational approximate_rational(double x, std::int64_t max_den) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw InputError("cannot approximate a negative or non-finite value");
  if (max_den < 1) throw InputError("max denominator must be >= 1");
  // Continued fraction convergents, then the best semiconvergent.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a_d = std::floor(r);
    if (a_d > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_d);
    const std::int64_t q2 = q0 + a * q1;
    if (q2 > max_den) {
      const std::int64_t k = (max_den - q0) / q1;
      const Rational semi(p0 + k * p1, q0 + k * q1), conv(p1, q1);
      const double e_semi = std::abs(to_double(semi) - x), e_conv = std::abs(to_double(conv) - x);
      return e_semi < e_conv ? semi : conv;
    }
    const std::int64_t p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = r - a_d;
    if (frac < 1e-12) break;
    r = 1.0 / frac;
  }
  return Rational(p1, q1);
}

std::pair<Rational, Rational> resolve_weights(const ExperimentSpec& spec) {
  if (spec.gamma1) return {*spec.gamma1, *spec.gamma2};
  const GammaRatio g = optimal_gamma_ratio({*spec.p1, *spec.p2, 1.0});
  const Rational ratio = approximate_rational(g.ratio, 64);
  if (ratio == Rational(0)) return {Rational(1, 64), Rational(1)};
  return {ratio, Rational(1)};
}

double resolve_beta(const ExperimentSpec& spec, const SublatticeSystem& sys) {
  if (spec.beta) return *spec.beta;
  const int L = sys.base.dim();
  // R0 = h - log2(nu beta^L) / L
  return std::exp2(differential_entropy(spec.source) - *spec.rate) / std::pow(sys.base.volume(), 1.0 / L);
}

HighRatePrediction predict_for(const Labeling& lab, const RateDistortionReport& rep, const Source& source,
                               double G) {
  const SublatticeSystem& sys = lab.system;
  PredictInputs in;
  in.gamma1 = to_double(lab.gamma1);
  in.gamma2 = to_double(lab.gamma2);
  in.R0 = rep.R0_analytic;
  in.R1 = rep.R1_analytic;
  in.R2 = rep.R2_analytic;
  in.h_p = differential_entropy(source);
  in.G_s = G;
  in.G_base = G;
  in.L = sys.base.dim();
  in.N1 = sys.n1;
  in.N2 = sys.n2;
  in.beta = rep.beta;
  if (sys.meet.scale_sq())
    in.rho_cap_sq = to_double(sys.base.covering_radius_sq() * *sys.meet.scale_sq()) / in.L;
  return predict(in);
}

namespace {

Labeling design_labeling(const SublatticeSystem& sys, const Rational& g1, const Rational& g2, const ExperimentSpec& spec) {
  LabelOptions opt;
  opt.use_lcm = spec.use_lcm;
  opt.exec = spec.exec;
  if (spec.use_lcm) {
    if (!sys.lcm_sub) throw UnsupportedError("this system has no clean lcm sublattice");
    return lcm_reduce(sys, solve_labeling(sys, g1, g2, opt));
  }
  return solve_labeling(sys, g1, g2, opt);
}

double base_moment(const Lattice& base, Execution exec) { return second_moment(base, 1u << 20, 1, exec).value; }

nlohmann::ordered_json spec_json(const ExperimentSpec& s) {
  nlohmann::ordered_json j;
  j["lattice"] = to_string(s.kind);
  j["dim"] = s.dim;
  if (s.xi1) {
    j["xi1"] = *s.xi1;
    j["xi2"] = *s.xi2;
  } else {
    j["n1"] = *s.n1;
    j["n2"] = *s.n2;
  }
  if (s.gamma1) {
    j["gamma1"] = to_string(*s.gamma1);
    j["gamma2"] = to_string(*s.gamma2);
  } else {
    j["p1"] = *s.p1;
    j["p2"] = *s.p2;
  }
  if (s.beta) j["beta"] = *s.beta;
  else j["rate"] = *s.rate;
  j["source"] = to_string(s.source);
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  j["lcm"] = s.use_lcm;
  return j;
}

}  // namespace

DesignResult run_design(const ExperimentSpec& spec) {
  validate_spec(spec);
  const SublatticeSystem sys = resolve_system(spec);
  const auto [g1, g2] = resolve_weights(spec);
  Labeling lab = design_labeling(sys, g1, g2, spec);
  const double beta = resolve_beta(spec, sys);
  const Quantizer q(lab, beta);
  MeasureConfig mc;
  mc.source = spec.source;
  mc.seed = spec.seed;
  mc.samples = spec.samples;
  mc.exec = spec.exec;
  RateDistortionReport rep = measure(q, mc);
  rep.predicted = predict_for(lab, rep, spec.source, base_moment(sys.base, spec.exec));

  DesignResult r{lab, rep, system_json(sys), {}, labeling_table(lab)};
  nlohmann::ordered_json doc;
  doc["spec"] = spec_json(spec);
  doc["gamma1"] = to_string(g1);
  doc["gamma2"] = to_string(g2);
  const auto [e1, e2] = side_excess(lab);
  doc["labeling"] = {{"entries", lab.table.size()},
                     {"total_cost", to_string(lab.total_cost())},
                     {"mean_cost", to_string(lab.mean_cost())},
                     {"excess1", to_string(e1)},
                     {"excess2", to_string(e2)}};
  doc["measurement"] = report_json(rep);
  if (spec.source.kind == SourceKind::Gaussian) {
    try {
      doc["ozarow_d0"] = ozarow_bound(rep.R1.value, rep.R2.value, rep.d1.value, rep.d2.value);
      doc["side_gap_db"] = side_gap_db(rep.R1.value, rep.R2.value, rep.d0.value, rep.d1.value, rep.d2.value);
    } catch (const InputError&) {
      doc["ozarow_d0"] = nullptr;
    }
  }
  r.report_doc = std::move(doc);
  return r;
}

void write_design(const DesignResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir + "/system.json", r.system.dump(2) + "\n");
  write_text_file(dir + "/report.json", r.report_doc.dump(2) + "\n");
  std::ostringstream csv;
  write_csv(csv, r.labeling_csv);
  write_text_file(dir + "/labeling.csv", csv.str());
}

CsvTable run_sweep(const ExperimentSpec& spec, SweepKind kind) {
  validate_spec(spec);
  const SublatticeSystem sys = resolve_system(spec);
  const double G = base_moment(sys.base, spec.exec);
  CsvTable t;
  for (const auto& c : rd_curve_schema().columns) t.header.push_back(c.name);

  struct Point {
    Rational g1, g2;
    double beta;
  };
  std::vector<Point> points;
  if (kind == SweepKind::Gamma) {
    if (spec.gammas.empty()) throw InputError("gamma sweep needs gammas = g1:g2,...");
    const double beta = resolve_beta(spec, sys);
    for (const auto& [a, b] : spec.gammas) points.push_back({a, b, beta});
  } else {
    if (spec.rates.empty()) throw InputError("rate sweep needs rates = R0,...");
    const auto [g1, g2] = resolve_weights(spec);
    for (double R : spec.rates) {
      ExperimentSpec s = spec;
      s.beta.reset();
      s.rate = R;
      points.push_back({g1, g2, resolve_beta(s, sys)});
    }
  }

  std::optional<Labeling> cached;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    if (!cached || cached->gamma1 != p.g1 || cached->gamma2 != p.g2) cached = design_labeling(sys, p.g1, p.g2, spec);
    const Quantizer q(*cached, p.beta);
    MeasureConfig mc;
    mc.source = spec.source;
    mc.seed = spec.seed;
    mc.samples = spec.samples;
    mc.exec = spec.exec;
    const RateDistortionReport rep = measure(q, mc);
    const HighRatePrediction pred = predict_for(*cached, rep, spec.source, G);
    double oz = nan, gap = nan, ray = nan;
    if (spec.source.kind == SourceKind::Gaussian) {
      try {
        oz = ozarow_bound(rep.R1.value, rep.R2.value, rep.d1.value, rep.d2.value);
        gap = side_gap_db(rep.R1.value, rep.R2.value, rep.d0.value, rep.d1.value, rep.d2.value);
        ray = ray_gap_db(rep.R1.value, rep.R2.value, rep.d0.value, rep.d1.value, rep.d2.value);
      } catch (const InputError&) {
      }
    }
    const double ratio = rep.d2.value > 0.0 ? rep.d1.value / rep.d2.value : nan;
    t.rows.push_back({std::to_string(i),
                      to_string(p.g1),
                      to_string(p.g2),
                      format_real(p.beta),
                      format_real(rep.R0.value),
                      format_real(rep.R1.value),
                      format_real(rep.R2.value),
                      format_real(rep.R0_analytic),
                      format_real(rep.R1_analytic),
                      format_real(rep.R2_analytic),
                      format_real(rep.d0.value),
                      format_real(rep.d1.value),
                      format_real(rep.d2.value),
                      format_real(rep.d0.std_error),
                      format_real(rep.d1.std_error),
                      format_real(rep.d2.std_error),
                      format_real(rep.d1_closed),
                      format_real(rep.d2_closed),
                      format_real(pred.d0_pred),
                      format_real(pred.d1_pred),
                      format_real(pred.d2_pred),
                      format_real(ratio),
                      format_real(pred.ratio_pred),
                      format_real(oz),
                      format_real(gap),
                      format_real(ray),
                      rep.entropy_warning ? "1" : "0"});
  }
  return t;
}

CsvTable run_catalog(LatticeKind kind, int dim, std::int64_t limit) { return catalog_table(catalog(kind, dim, limit)); }

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.ok; });
}

std::vector<std::pair<RingElement, RingElement>> property_suite_pairs(LatticeKind kind, int dim, std::int64_t max_ns) {
  const Lattice base = Lattice::make(kind, dim);
  const std::int64_t limit =
      dim == 4 ? static_cast<std::int64_t>(std::sqrt(static_cast<double>(max_ns))) : max_ns;
  std::vector<CatalogEntry> clean;
  for (const auto& e : catalog(kind, dim, limit))
    if (e.clean) clean.push_back(e);
  std::vector<std::pair<RingElement, RingElement>> out;
  const RingKind ring = ring_for(base);
  for (std::size_t a = 0; a < clean.size(); ++a)
    for (std::size_t b = a; b < clean.size(); ++b)
      // Quaternion systems are only built for coprime norms.
      if (clean[a].index * clean[b].index <= max_ns &&
          (ring != RingKind::Quaternion || gcd64(clean[a].root, clean[b].root) == 1))
        out.emplace_back(parse_element(clean[a].xi, ring), parse_element(clean[b].xi, ring));
  return out;
}

VerifyReport verify_properties(std::int64_t max_ns, Execution exec) {
  VerifyReport rep{"properties", {}};
  const std::vector<std::pair<LatticeKind, int>> lattices = {
      {LatticeKind::Zn, 1}, {LatticeKind::Zn, 2}, {LatticeKind::A2, 2}, {LatticeKind::Zn, 4}, {LatticeKind::D4, 4}};
  LabelOptions opt;
  opt.exec = exec;
  for (const auto& [kind, dim] : lattices) {
    const Lattice base = Lattice::make(kind, dim);
    for (const auto& [x1, x2] : property_suite_pairs(kind, dim, max_ns)) {
      PropertyCheck c;
      c.name = fmt::format("{} xi1={} xi2={}", kind == LatticeKind::Zn ? fmt::format("Z{}", dim) : to_string(kind), format_element(x1), format_element(x2));
      c.ok = true;
      try {
        const SublatticeSystem sys = build_system(base, x1, x2);
        check_system(sys);
        for (const auto& pc : check_properties(sys, solve_labeling(sys, Rational(9), Rational(5), opt))) {
          if (!pc.ok && c.ok) c.detail = pc.name + ": " + pc.detail;
          c.ok = c.ok && pc.ok;
        }
        if (c.ok) c.detail = fmt::format("N1={} N2={} N_s={}", sys.n1, sys.n2, sys.n_s);
      } catch (const Error& e) {
        c.ok = false;
        c.detail = e.what();
      }
      rep.checks.push_back(std::move(c));
    }
  }
  return rep;
}

VerifyReport verify_cld2(std::int64_t m, Execution exec) {
  VerifyReport rep{"cld2", {}};
  const CleanSearchResult r = exhaustive_clean_search_D4(m, 1u << 20, exec);
  PropertyCheck c;
  c.name = fmt::format("no clean similar sublattice of D4 with scale {} (index {})", m, m * m);
  c.ok = !r.exists_clean && r.ties.size() == r.sublattices;
  c.detail = fmt::format("{} sublattices, {} with a tie", r.sublattices, r.ties.size());
  if (r.exists_clean && r.witness) c.detail += ", clean witness found";
  rep.checks.push_back(std::move(c));
  return rep;
}

std::vector<LemmaPoint> lemma_family(int n_max, Execution exec) {
  if (n_max < 1) throw InputError("n_max must be >= 1");
  const Lattice base = Lattice::zn(2);
  LabelOptions opt;
  opt.use_lcm = true;
  opt.exec = exec;
  std::vector<LemmaPoint> out;
  for (int n = 1; n <= n_max; ++n) {
    const std::int64_t k = 2 * n - 1;
    const SublatticeSystem sys = build_system(base, GaussianInt{2 * k, k}, GaussianInt{3 * k, 0});
    const Labeling lab = solve_labeling(sys, Rational(9), Rational(5), opt);
    const SideSums ss = side_sums(lab);
    LemmaPoint p;
    p.n = n;
    p.k = k;
    p.points = lab.table.size();
    p.deviation = ss.relative_deviation;
    p.js1 = ss.js1;
    if (sys.meet.scale_sq())
      p.js2_bound = to_double((lab.gamma1 + lab.gamma2) * base.covering_radius_sq() * *sys.meet.scale_sq()) / 2.0;
    out.push_back(p);
  }
  return out;
}

VerifyReport verify_lemma51(int n_max, Execution exec) {
  VerifyReport rep{"lemma51", {}};
  const auto pts = lemma_family(n_max, exec);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    PropertyCheck c;
    c.name = fmt::format("n={} (scale {}, {} points)", pts[i].n, pts[i].k, pts[i].points);
    c.ok = i == 0 || pts[i].deviation < pts[i - 1].deviation;
    c.detail = fmt::format("relative deviation {:.6g}", to_double(pts[i].deviation));
    rep.checks.push_back(std::move(c));
  }
  PropertyCheck last;
  last.name = "final deviation below 0.1";
  last.ok = !pts.empty() && pts.back().deviation < Rational(1, 10);
  last.detail = fmt::format("{:.6g}", pts.empty() ? 0.0 : to_double(pts.back().deviation));
  rep.checks.push_back(std::move(last));
  return rep;
}

std::string format_report(const VerifyReport& r) {
  std::string out;
  std::size_t failed = 0;
  for (const auto& c : r.checks) {
    out += fmt::format("{} {}: {}\n", c.ok ? "PASS" : "FAIL", c.name, c.detail);
    failed += c.ok ? 0 : 1;
  }
  out += fmt::format("{}: {} checks, {} failed\n", r.suite, r.checks.size(), failed);
  return out;
}

}  // namespace mdlvq
