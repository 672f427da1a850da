#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "mdlvq/error.hpp"
#include "mdlvq/experiment.hpp"

using namespace mdlvq;

namespace {

ConfigMap worked_config() {
  return parse_config(R"(
# worked example
lattice = zn
dim = 2
xi1 = 2,1
xi2 = 3
gamma1 = 9
gamma2 = 5
rate = 6
samples = 20000
seed = 7
)");
}

}  // namespace

TEST_CASE("config parsing") {
  const ConfigMap m = parse_config("a = 1\n  # comment\n\nb=two # trailing\na = 3\n");
  CHECK(m.at("a") == "3");
  CHECK(m.at("b") == "two");
  CHECK_THROWS_AS(parse_config("novalue\n"), InputError);
  CHECK_THROWS_AS(parse_config(" = 4\n"), InputError);
}

TEST_CASE("spec from config") {
  const ExperimentSpec s = spec_from_config(worked_config());
  CHECK(s.kind == LatticeKind::Zn);
  CHECK(*s.xi1 == "2,1");
  CHECK(*s.gamma1 == Rational(9));
  CHECK(*s.rate == 6.0);
  CHECK(s.samples == 20000);
  CHECK(s.seed == 7);

  ConfigMap a2{{"lattice", "a2"}, {"n1", "7"}, {"n2", "13"}, {"gamma1", "1"}, {"gamma2", "1"}, {"beta", "0.1"}};
  CHECK(spec_from_config(a2).dim == 2);
  ConfigMap d4{{"lattice", "d4"}, {"n1", "25"}, {"n2", "49"}, {"p1", "0.01"}, {"p2", "0.1"}, {"beta", "0.1"}};
  CHECK(spec_from_config(d4).dim == 4);

  ConfigMap sweep = worked_config();
  sweep["gammas"] = "9:5, 1:1,5:9";
  sweep["rates"] = "5,6";
  const ExperimentSpec w = spec_from_config(sweep);
  CHECK(w.gammas.size() == 3);
  CHECK(w.gammas[2] == std::pair{Rational(5), Rational(9)});
  CHECK(w.rates == std::vector<double>{5.0, 6.0});
}

TEST_CASE("spec validation errors") {
  auto with = [](std::string k, std::string v) {
    ConfigMap m = worked_config();
    m[k] = v;
    return m;
  };
  auto without = [](std::string k) {
    ConfigMap m = worked_config();
    m.erase(k);
    return m;
  };
  CHECK_THROWS_AS(spec_from_config(with("colour", "red")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("samples", "0")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("samples", "many")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("seed", "-1")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("n1", "5")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("beta", "0.1")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("p1", "0.1")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("exec", "gpu")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("lcm", "maybe")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("gammas", "9-5")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("gamma1", "-1")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("dim", "5")), InputError);
  CHECK_THROWS_AS(spec_from_config(without("xi2")), InputError);
  CHECK_THROWS_AS(spec_from_config(without("rate")), InputError);
  CHECK_THROWS_AS(spec_from_config(without("gamma2")), InputError);
  CHECK_THROWS_AS(spec_from_config(with("source", "laplace")), InputError);
}

TEST_CASE("every config key is accepted") {
  for (const auto& k : config_keys()) CHECK(!k.empty());
  CHECK(config_keys().size() >= 19);
}

TEST_CASE("bounded-denominator approximation") {
  // Oracle: scan every denominator.
  for (double x : {M_PI, 11.0, 0.1, 1.8, 2.0 / 3.0, 123.456}) {
    Rational best(0);
    double err = 1e300;
    for (std::int64_t q = 1; q <= 64; ++q) {
      const auto p = static_cast<std::int64_t>(std::llround(x * static_cast<double>(q)));
      const double e = std::abs(x - static_cast<double>(p) / static_cast<double>(q));
      if (e < err - 1e-15) {
        err = e;
        best = Rational(p, q);
      }
    }
    CHECK(approximate_rational(x, 64) == best);
  }
  CHECK_THROWS_AS(approximate_rational(-1.0, 64), InputError);
}

TEST_CASE("weights, witnesses and scale") {
  ExperimentSpec s = spec_from_config(worked_config());
  s.gamma1.reset();
  s.gamma2.reset();
  s.p1 = 0.01;
  s.p2 = 0.1;
  CHECK(resolve_weights(s) == std::pair{Rational(11), Rational(1)});

  const RingElement w = clean_witness(LatticeKind::Zn, 2, 45);
  CHECK(is_clean(similar_sublattice(Lattice::zn(2), w)));
  CHECK(similar_sublattice(Lattice::zn(2), w).index() == 45);
  CHECK_THROWS_AS(clean_witness(LatticeKind::Zn, 2, 3), InputError);
  CHECK_THROWS_AS(clean_witness(LatticeKind::Zn, 2, 4), InputError);
  CHECK_THROWS_AS(clean_witness(LatticeKind::D4, 4, 5), InputError);
  CHECK(similar_sublattice(Lattice::d4(), clean_witness(LatticeKind::D4, 4, 25)).index() == 25);

  ExperimentSpec n = spec_from_config(worked_config());
  n.xi1.reset();
  n.xi2.reset();
  n.n1 = 5;
  n.n2 = 9;
  const SublatticeSystem sys = resolve_system(n);
  CHECK(sys.n1 == 5);
  CHECK(sys.n2 == 9);

  // beta is chosen so the analytic central rate hits the target.
  const double beta = resolve_beta(n, sys);
  CHECK(gaussian_entropy_bits() - std::log2(beta * beta) / 2.0 == doctest::Approx(6.0));
}

TEST_CASE("design runs deterministically and hits its rate") {
  const ExperimentSpec s = spec_from_config(worked_config());
  const DesignResult a = run_design(s);
  const DesignResult b = run_design(s);
  CHECK(a.report_doc.dump() == b.report_doc.dump());
  CHECK(a.system.dump() == b.system.dump());
  CHECK(a.labeling_csv.rows == b.labeling_csv.rows);
  CHECK(a.report.R0_analytic == doctest::Approx(6.0));
  CHECK(a.labeling.table.size() == 45);
  CHECK(a.report.predicted.has_value());
  CHECK(a.report_doc.contains("side_gap_db"));

  ExperimentSpec serial = s;
  serial.exec = Execution::Serial;
  CHECK(run_design(serial).report.d1.value == a.report.d1.value);

  const auto dir = std::filesystem::temp_directory_path() / "mdlvq_design_test";
  std::filesystem::remove_all(dir);
  write_design(a, dir.string());
  for (const char* f : {"system.json", "report.json", "labeling.csv"}) CHECK(std::filesystem::exists(dir / f));
  const std::string first = read_text_file((dir / "report.json").string());
  write_design(b, dir.string());
  CHECK(read_text_file((dir / "report.json").string()) == first);
  std::filesystem::remove_all(dir);
}

TEST_CASE("lcm designs") {
  ConfigMap m = worked_config();
  m["xi2"] = "6,3";
  m["lcm"] = "true";
  const ExperimentSpec s = spec_from_config(m);
  const DesignResult r = run_design(s);
  // Solved on the 45-point lcm domain, then expanded to the product.
  CHECK(r.labeling.table.size() == 225);
  const Labeling small = solve_labeling(resolve_system(s), Rational(9), Rational(5), {.use_lcm = true});
  CHECK(small.table.size() == 45);
  CHECK(r.labeling.mean_cost() == small.mean_cost());
}

TEST_CASE("sweeps emit valid rd_curve rows") {
  ConfigMap m = worked_config();
  m["gammas"] = "9:5,1:1";
  m["rates"] = "5,6";
  m["samples"] = "5000";
  const ExperimentSpec s = spec_from_config(m);
  const CsvTable g = run_sweep(s, SweepKind::Gamma);
  CHECK(g.rows.size() == 2);
  CHECK_NOTHROW(validate_csv(g, rd_curve_schema()));
  const CsvTable r = run_sweep(s, SweepKind::Rate);
  CHECK(r.rows.size() == 2);
  CHECK_NOTHROW(validate_csv(r, rd_curve_schema()));
  CHECK(run_sweep(s, SweepKind::Rate).rows == r.rows);
  ConfigMap bare = worked_config();
  CHECK_THROWS_AS(run_sweep(spec_from_config(bare), SweepKind::Gamma), InputError);
}

TEST_CASE("verification suites pass at small scale") {
  const VerifyReport p = verify_properties(45, Execution::Parallel);
  CHECK(p.ok());
  CHECK(!p.checks.empty());
  CHECK(verify_cld2(3, Execution::Serial).ok());
  CHECK(format_report(p).find("FAIL") == std::string::npos);
}

TEST_CASE("lemma family shrinks its relative deviation") {
  const auto pts = lemma_family(2, Execution::Parallel);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].k == 1);
  CHECK(pts[1].k == 3);
  CHECK(pts[1].deviation < pts[0].deviation);
  // J_s1 grows like k^4, the J_s2 bound like k^2.
  const double r0 = pts[0].js2_bound / to_double(pts[0].js1), r1 = pts[1].js2_bound / to_double(pts[1].js1);
  CHECK(r1 == doctest::Approx(r0 / 9.0).epsilon(0.05));
  CHECK_THROWS_AS(lemma_family(0, Execution::Serial), InputError);

  // Recompute the deviation from the labels with plain integer sums in Z2.
  for (const auto& pt : pts) {
    const SublatticeSystem sys = build_system(Lattice::zn(2), GaussianInt{2 * pt.k, pt.k}, GaussianInt{3 * pt.k, 0});
    const Labeling lab = solve_labeling(sys, Rational(9), Rational(5), {.use_lcm = true});
    REQUIRE(lab.table.size() == pt.points);
    std::int64_t direct = 0, approx = 0;  // approx scaled by 14^2
    for (const auto& e : lab.table) {
      for (int i = 0; i < 2; ++i) {
        const std::int64_t a = e.point[i] - e.lam1[i];
        const std::int64_t b = 14 * e.lam1[i] - 9 * e.lam1[i] - 5 * e.lam2[i];
        direct += a * a;
        approx += b * b;
      }
    }
    const Rational dev = abs(Rational(direct) - Rational(approx, 196)) / Rational(approx, 196);
    CHECK(dev == pt.deviation);
  }
}
