#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "mdlvq/error.hpp"
#include "mdlvq/io.hpp"

using namespace mdlvq;

#ifndef MDLVQ_GOLDEN_DIR
#error "MDLVQ_GOLDEN_DIR must be defined"
#endif

namespace {

std::string golden(const std::string& name) { return read_text_file(std::string(MDLVQ_GOLDEN_DIR) + "/" + name); }

std::string to_csv(const CsvTable& t) {
  std::ostringstream s;
  write_csv(s, t);
  return s.str();
}

}  // namespace

TEST_CASE("reals print shortest and read back exactly") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5, 123456789.125, 0.0}) CHECK(std::stod(format_real(x)) == x);
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(3.0) == "3");
}

TEST_CASE("csv quoting round trip") {
  CsvTable t;
  t.header = {"a", "b,c", "d"};
  t.rows = {{"1", "x\"y", "line\nbreak"}, {"", ",", "\"\""}};
  const std::string text = to_csv(t);
  CHECK(text.find("\"b,c\"") != std::string::npos);
  CHECK(text.find("\"x\"\"y\"") != std::string::npos);
  const CsvTable back = parse_csv(text);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(csv_field("plain") == "plain");
}

TEST_CASE("malformed csv is an input error") {
  CHECK_THROWS_AS(parse_csv("a,b\n1,\"open\n"), InputError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), InputError);
}

TEST_CASE("schema validation names the bad cell") {
  CsvTable t = parse_csv(golden("catalog_z2_30.csv"));
  CHECK_NOTHROW(validate_csv(t, catalog_schema()));
  t.rows[2][2] = "four";
  CHECK_THROWS_WITH_AS(validate_csv(t, catalog_schema()), doctest::Contains("N"), InputError);
  CsvTable h = parse_csv(golden("catalog_z2_30.csv"));
  h.header[0] = "type";
  CHECK_THROWS_AS(validate_csv(h, catalog_schema()), InputError);
  CHECK_THROWS_AS(schema_by_name("nope"), InputError);
  CHECK(&schema_by_name("labeling") == &labeling_schema());
  CHECK(&schema_by_name("rd_curve") == &rd_curve_schema());

  CsvTable lab = parse_csv(golden("labeling_z2_worked.csv"));
  CHECK_NOTHROW(validate_csv(lab, labeling_schema()));
  lab.rows[0][7] = "1/0";
  CHECK_THROWS_AS(validate_csv(lab, labeling_schema()), InputError);
}

TEST_CASE("catalog output matches the golden file") {
  CHECK(to_csv(catalog_table(catalog(LatticeKind::Zn, 2, 30))) == golden("catalog_z2_30.csv"));
}

TEST_CASE("worked-example labeling matches the golden file") {
  const SublatticeSystem sys = build_system(Lattice::zn(2), GaussianInt{2, 1}, GaussianInt{3, 0});
  const Labeling lab = solve_labeling(sys, Rational(9), Rational(5));
  const std::string text = to_csv(labeling_table(lab));
  CHECK(text == golden("labeling_z2_worked.csv"));
  const CsvTable t = parse_csv(text);
  CHECK(t.rows.size() == 45);
  // The cost column sums to the labeling's total cost.
  Rational total(0);
  for (const auto& r : t.rows) {
    const auto slash = r[7].find('/');
    total += slash == std::string::npos ? Rational(std::stoll(r[7]))
                                        : Rational(std::stoll(r[7].substr(0, slash)), std::stoll(r[7].substr(slash + 1)));
  }
  CHECK(total == lab.total_cost());
}

TEST_CASE("json documents") {
  const SublatticeSystem sys = build_system(Lattice::zn(2), GaussianInt{2, 1}, GaussianInt{3, 0});
  const auto j = system_json(sys);
  CHECK(j["N1"] == 5);
  CHECK(j["N2"] == 9);
  CHECK(j["N_s"] == 45);
  CHECK(j["xi1"] == "2,1");
  CHECK(j.dump() == system_json(sys).dump());
}

TEST_CASE("missing files are input errors") {
  CHECK_THROWS_AS(read_text_file("/nonexistent/file.csv"), InputError);
}
