#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdlvq/labeling.hpp"
#include "mdlvq/quantizer.hpp"
#include "mdlvq/sublattice.hpp"

namespace mdlvq {

/// Shortest decimal string that reads back to the same double.
std::string format_real(double x);

/// RFC 4180 field quoting: quotes when the field holds a comma, quote or newline.
std::string csv_field(const std::string& s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);
/// Throws InputError on unterminated quotes or ragged rows.
CsvTable parse_csv(std::istream& in);
CsvTable parse_csv(const std::string& text);

/// Frac is an exact rational "p/q", Vec a space separated integer vector,
/// Reals a space separated real vector.
enum class ColumnType { Int, Real, Frac, Vec, Reals, Text, Flag };

struct CsvColumn {
  std::string name;
  ColumnType type = ColumnType::Text;
};

/// Frozen column lists of the emitted files.
struct CsvSchema {
  std::string name;
  std::vector<CsvColumn> columns;
};
const CsvSchema& labeling_schema();
const CsvSchema& catalog_schema();
const CsvSchema& rd_curve_schema();
const CsvSchema& schema_by_name(const std::string& name);

/// Header must equal the schema and every cell must parse as its column type.
/// Throws InputError naming the first bad cell.
void validate_csv(const CsvTable& table, const CsvSchema& schema);

CsvTable labeling_table(const Labeling& lab);
CsvTable catalog_table(const std::vector<CatalogEntry>& entries);

nlohmann::ordered_json system_json(const SublatticeSystem& sys);
nlohmann::ordered_json report_json(const RateDistortionReport& rep);
nlohmann::ordered_json prediction_json(const HighRatePrediction& p);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace mdlvq
