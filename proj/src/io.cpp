#include "mdlvq/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mdlvq/error.hpp"

namespace mdlvq {

std::string format_real(double x) { return fmt::format("{}", x); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << csv_field(cells[i]);
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

CsvTable parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, field_started = false, any = false;
  char c;
  auto end_field = [&] {
    rec.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(rec));
    rec.clear();
    any = false;
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      if (field_started) throw InputError("csv: quote inside an unquoted field");
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      end_record();
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw InputError("csv: unterminated quoted field");
  if (any) end_record();
  CsvTable t;
  if (records.empty()) throw InputError("csv: missing header");
  t.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != t.header.size())
      throw InputError(fmt::format("csv: row {} has {} fields, header has {}", i, records[i].size(), t.header.size()));
    t.rows.push_back(std::move(records[i]));
  }
  return t;
}

CsvTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

namespace {

bool parses_as(const std::string& s, ColumnType type) {
  using enum ColumnType;
  switch (type) {
    case Int: {
      std::int64_t v = 0;
      const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      return !s.empty() && r.ec == std::errc() && r.ptr == s.data() + s.size();
    }
    case Real: {
      if (s.empty()) return false;
      char* end = nullptr;
      std::strtod(s.c_str(), &end);
      return *end == '\0';
    }
    case Frac:
      try {
        parse_rational(s);
        return true;
      } catch (const Error&) {
        return false;
      }
    case Vec: {
      std::istringstream in(s);
      std::int64_t v = 0;
      int n = 0;
      while (in >> v) ++n;
      return n >= 1 && n <= kMaxDim && in.eof();
    }
    case Reals: {
      std::istringstream in(s);
      std::string tok;
      int n = 0;
      while (in >> tok) {
        char* end = nullptr;
        std::strtod(tok.c_str(), &end);
        if (*end != '\0') return false;
        ++n;
      }
      return n >= 1 && n <= kMaxDim;
    }
    case Flag:
      return s == "0" || s == "1";
    case Text:
      return true;
  }
  return false;
}

}  // namespace

const CsvSchema& labeling_schema() {
  using enum ColumnType;
  static const CsvSchema s{"labeling",
                           {{"point", Vec},
                            {"coords", Reals},
                            {"lam1", Vec},
                            {"lam2", Vec},
                            {"edge_id", Int},
                            {"dist1", Frac},
                            {"dist2", Frac},
                            {"cost", Frac}}};
  return s;
}

const CsvSchema& catalog_schema() {
  using enum ColumnType;
  static const CsvSchema s{
      "catalog",
      {{"kind", Text}, {"L", Int}, {"N", Int}, {"root", Int}, {"xi", Text}, {"clean", Flag}}};
  return s;
}

const CsvSchema& rd_curve_schema() {
  using enum ColumnType;
  static const CsvSchema s{"rd_curve",
                           {{"point", Int},       {"gamma1", Frac},     {"gamma2", Frac},
                            {"beta", Real},           {"R0", Real},             {"R1", Real},
                            {"R2", Real},             {"R0_analytic", Real},    {"R1_analytic", Real},
                            {"R2_analytic", Real},    {"d0", Real},             {"d1", Real},
                            {"d2", Real},             {"d0_se", Real},          {"d1_se", Real},
                            {"d2_se", Real},          {"d1_closed", Real},      {"d2_closed", Real},
                            {"d0_pred", Real},        {"d1_pred", Real},        {"d2_pred", Real},
                            {"ratio", Real},          {"ratio_pred", Real},     {"ozarow_d0", Real},
                            {"side_gap_db", Real},    {"ray_gap_db", Real},     {"entropy_warning", Flag}}};
  return s;
}

const CsvSchema& schema_by_name(const std::string& name) {
  for (const CsvSchema* s : {&labeling_schema(), &catalog_schema(), &rd_curve_schema()})
    if (s->name == name) return *s;
  throw InputError("unknown csv schema '" + name + "'");
}

void validate_csv(const CsvTable& table, const CsvSchema& schema) {
  if (table.header.size() != schema.columns.size())
    throw InputError(fmt::format("{}: expected {} columns, got {}", schema.name, schema.columns.size(),
                                 table.header.size()));
  for (std::size_t j = 0; j < table.header.size(); ++j)
    if (table.header[j] != schema.columns[j].name)
      throw InputError(fmt::format("{}: column {} is '{}', expected '{}'", schema.name, j, table.header[j],
                                   schema.columns[j].name));
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    for (std::size_t j = 0; j < table.header.size(); ++j)
      if (!parses_as(table.rows[i][j], schema.columns[j].type))
        throw InputError(fmt::format("{}: row {} column '{}' has bad value '{}'", schema.name, i + 1,
                                     table.header[j], table.rows[i][j]));
}

CsvTable labeling_table(const Labeling& lab) {
  CsvTable t;
  for (const auto& c : labeling_schema().columns) t.header.push_back(c.name);
  const GramForm& form = lab.system.base.form();
  const int L = form.dim;
  for (const auto& e : lab.table) {
    const Rational d1 = form.normalized(form.norm(e.point - e.lam1));
    const Rational d2 = form.normalized(form.norm(e.point - e.lam2));
    const auto y = lab.system.base.embed(e.point);
    std::string coords;
    for (int i = 0; i < L; ++i) coords += (i ? " " : "") + format_real(y[static_cast<std::size_t>(i)]);
    t.rows.push_back({format_coeffs(e.point, L), coords, format_coeffs(e.lam1, L), format_coeffs(e.lam2, L),
                      std::to_string(e.edge_id), to_string(d1), to_string(d2),
                      to_string(lab.gamma1 * d1 + lab.gamma2 * d2)});
  }
  return t;
}

CsvTable catalog_table(const std::vector<CatalogEntry>& entries) {
  CsvTable t;
  for (const auto& c : catalog_schema().columns) t.header.push_back(c.name);
  for (const auto& e : entries)
    t.rows.push_back({to_string(e.kind), std::to_string(e.dim), std::to_string(e.index), std::to_string(e.root),
                      e.xi, e.clean ? "1" : "0"});
  return t;
}

namespace {

nlohmann::ordered_json sub_json(const Sublattice& s) {
  nlohmann::ordered_json j;
  j["index"] = s.index();
  std::vector<std::vector<std::int64_t>> rows;
  for (int r = 0; r < s.dim(); ++r) {
    std::vector<std::int64_t> row;
    for (int c = 0; c < s.dim(); ++c) row.push_back(s.basis()(r, c));
    rows.push_back(row);
  }
  j["basis"] = rows;
  j["similar"] = s.similar();
  if (s.scale_sq()) j["scale_sq"] = to_string(*s.scale_sq());
  return j;
}

}  // namespace

nlohmann::ordered_json system_json(const SublatticeSystem& sys) {
  nlohmann::ordered_json j;
  j["lattice"] = to_string(sys.base.kind());
  j["L"] = sys.base.dim();
  j["xi1"] = format_element(sys.xi1);
  j["xi2"] = format_element(sys.xi2);
  j["N1"] = sys.n1;
  j["N2"] = sys.n2;
  j["N_cap"] = sys.n_cap;
  j["N_cup"] = sys.n_cup;
  j["N_s"] = sys.n_s;
  j["N_lcm"] = sys.n_lcm;
  j["clean1"] = sys.clean1;
  j["clean2"] = sys.clean2;
  j["clean_s"] = sys.clean_s;
  j["sub1"] = sub_json(sys.sub1);
  j["sub2"] = sub_json(sys.sub2);
  j["meet"] = sub_json(sys.meet);
  j["join"] = sub_json(sys.join);
  j["product"] = sub_json(sys.product);
  if (sys.lcm_sub) {
    j["lcm"] = sub_json(*sys.lcm_sub);
    if (sys.xi_lcm) j["xi_lcm"] = format_element(*sys.xi_lcm);
  }
  return j;
}

nlohmann::ordered_json prediction_json(const HighRatePrediction& p) {
  nlohmann::ordered_json j;
  j["J"] = p.J;
  j["d0_pred"] = p.d0_pred;
  j["d1_pred"] = p.d1_pred;
  j["d2_pred"] = p.d2_pred;
  j["ratio_pred"] = p.ratio_pred;
  j["js2_bound"] = p.js2_bound;
  nlohmann::ordered_json in;
  in["gamma1"] = p.in.gamma1;
  in["gamma2"] = p.in.gamma2;
  in["R0"] = p.in.R0;
  in["R1"] = p.in.R1;
  in["R2"] = p.in.R2;
  in["h_p"] = p.in.h_p;
  in["G_s"] = p.in.G_s;
  in["G_base"] = p.in.G_base;
  in["L"] = p.in.L;
  in["N1"] = p.in.N1;
  in["N2"] = p.in.N2;
  in["beta"] = p.in.beta;
  in["rho_cap_sq"] = p.in.rho_cap_sq;
  j["inputs"] = in;
  return j;
}

nlohmann::ordered_json report_json(const RateDistortionReport& rep) {
  auto est = [](const Estimate& e) {
    nlohmann::ordered_json j;
    j["value"] = e.value;
    j["std_error"] = e.std_error;
    return j;
  };
  nlohmann::ordered_json j;
  j["seed"] = rep.seed;
  j["n_samples"] = rep.n_samples;
  j["source"] = to_string(rep.source);
  j["beta"] = rep.beta;
  j["d0"] = est(rep.d0);
  j["d1"] = est(rep.d1);
  j["d2"] = est(rep.d2);
  j["R0"] = est(rep.R0);
  j["R1"] = est(rep.R1);
  j["R2"] = est(rep.R2);
  j["support"] = {rep.support0, rep.support1, rep.support2};
  j["entropy_warning"] = rep.entropy_warning;
  j["R0_analytic"] = rep.R0_analytic;
  j["R1_analytic"] = rep.R1_analytic;
  j["R2_analytic"] = rep.R2_analytic;
  j["excess1"] = rep.excess1;
  j["excess2"] = rep.excess2;
  j["d1_closed"] = rep.d1_closed;
  j["d2_closed"] = rep.d2_closed;
  if (rep.predicted) j["predicted"] = prediction_json(*rep.predicted);
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw InputError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace mdlvq
