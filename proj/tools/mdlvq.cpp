// Command-line front end: design, sweep, catalog, verify, validate.
//
// Exit codes: 0 success, 1 input error, 2 construction error, 3 verification failure.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "mdlvq/error.hpp"
#include "mdlvq/experiment.hpp"
#include "mdlvq/io.hpp"

using namespace mdlvq;

namespace {

constexpr int kInputError = 1;
constexpr int kConstructionError = 2;
constexpr int kVerifyFailed = 3;

struct SpecArgs {
  std::string config;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

// One --key option per config key; given values override the file.
void add_spec_options(CLI::App* cmd, SpecArgs& a) {
  cmd->add_option("-c,--config", a.config, "flat key = value experiment file");
  cmd->add_option("--set", a.sets, "extra key=value override (repeatable)");
  for (const auto& key : config_keys()) {
    cmd->add_option_function<std::string>(
        "--" + key, [&a, key](const std::string& v) { a.flags[key] = v; }, "override '" + key + "'");
  }
}

ExperimentSpec load_spec(const SpecArgs& a) {
  ConfigMap cfg;
  if (!a.config.empty()) cfg = parse_config(read_text_file(a.config));
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + s + "'");
    cfg[s.substr(0, eq)] = s.substr(eq + 1);
  }
  for (const auto& [k, v] : a.flags) cfg[k] = v;
  return spec_from_config(cfg);
}

void write_table(const CsvTable& t, const std::string& path) {
  std::ostringstream s;
  write_csv(s, t);
  if (path == "-") {
    std::cout << s.str();
    return;
  }
  if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent);
  write_text_file(path, s.str());
}

int report(const VerifyReport& r) {
  std::cout << format_report(r);
  return r.ok() ? 0 : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-description lattice vector quantiser toolkit"};
  app.require_subcommand(1);

  SpecArgs design_args;
  auto* design = app.add_subcommand("design", "build a system, label it, measure it");
  add_spec_options(design, design_args);

  SpecArgs sweep_args;
  std::string sweep_kind = "gamma";
  std::string sweep_file;
  auto* sweep = app.add_subcommand("sweep", "rate-distortion curve over weights or rates");
  add_spec_options(sweep, sweep_args);
  sweep->add_option("--kind", sweep_kind, "gamma or rate")->check(CLI::IsMember({"gamma", "rate"}));
  sweep->add_option("--csv", sweep_file, "output file (default <out>/rd_curve.csv, '-' for stdout)");

  std::string cat_lattice = "zn";
  int cat_dim = 2;
  std::int64_t cat_limit = 50;
  std::string cat_out = "-";
  auto* cat = app.add_subcommand("catalog", "similar sublattice indices and cleanliness");
  cat->add_option("--lattice", cat_lattice, "zn, a2 or d4");
  cat->add_option("--dim", cat_dim, "dimension (zn only)");
  cat->add_option("--limit", cat_limit, "largest norm (scale for 4-dimensional lattices)");
  cat->add_option("--csv", cat_out, "output file, '-' for stdout");

  std::string suite;
  std::int64_t max_ns = 225, cld_m = 3;
  int n_max = 4;
  std::string exec_name = "parallel";
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("suite", suite, "properties, cld2 or lemma51")
      ->required()
      ->check(CLI::IsMember({"properties", "cld2", "lemma51"}));
  verify->add_option("--max-ns", max_ns, "largest product index for 'properties'");
  verify->add_option("--m", cld_m, "D4 scale for 'cld2'");
  verify->add_option("--n-max", n_max, "family length for 'lemma51'");
  verify->add_option("--exec", exec_name, "serial or parallel")->check(CLI::IsMember({"serial", "parallel"}));

  std::string schema_name, csv_path;
  auto* validate = app.add_subcommand("validate", "parse a csv file against its schema");
  validate->add_option("schema", schema_name, "labeling, catalog or rd_curve")->required();
  validate->add_option("file", csv_path, "csv file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*design) {
      const ExperimentSpec spec = load_spec(design_args);
      const DesignResult r = run_design(spec);
      write_design(r, spec.out_dir);
      std::cout << fmt::format("wrote {}/{{system.json,labeling.csv,report.json}}: {} entries, d0={:.6g} d1={:.6g} d2={:.6g}\n",
                               spec.out_dir, r.labeling.table.size(), r.report.d0.value, r.report.d1.value,
                               r.report.d2.value);
    } else if (*sweep) {
      const ExperimentSpec spec = load_spec(sweep_args);
      const CsvTable t = run_sweep(spec, sweep_kind == "rate" ? SweepKind::Rate : SweepKind::Gamma);
      const std::string path = sweep_file.empty() ? spec.out_dir + "/rd_curve.csv" : sweep_file;
      write_table(t, path);
      if (path != "-") std::cout << fmt::format("wrote {} ({} rows)\n", path, t.rows.size());
    } else if (*cat) {
      write_table(run_catalog(parse_lattice_kind(cat_lattice), cat_dim, cat_limit), cat_out);
    } else if (*verify) {
      const Execution exec = exec_name == "serial" ? Execution::Serial : Execution::Parallel;
      if (suite == "properties") return report(verify_properties(max_ns, exec));
      if (suite == "cld2") return report(verify_cld2(cld_m, exec));
      return report(verify_lemma51(n_max, exec));
    } else if (*validate) {
      const CsvTable t = parse_csv(read_text_file(csv_path));
      validate_csv(t, schema_by_name(schema_name));
      std::cout << fmt::format("{}: {} rows match schema '{}'\n", csv_path, t.rows.size(), schema_name);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const CorruptionError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const Error& e) {
    std::cerr << "construction error: " << e.what() << "\n";
    return kConstructionError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConstructionError;
  }
  return 0;
}
