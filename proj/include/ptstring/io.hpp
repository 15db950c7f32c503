#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ptstring/critical.hpp"
#include "ptstring/density.hpp"
#include "ptstring/fit.hpp"

namespace ptstring {

inline constexpr int kSchemaVersion = 1;

/// {"kind": "LinearPT", "alpha": 2.0, "c1": [re, im], "c2": [re, im], "kappa": 0.0}
nlohmann::json density_to_json(const DensityModel& model);
/// Throws Config on malformed input. Only "kind" is required.
DensityModel density_from_json(const nlohmann::json& j);
/// Accepts inline JSON, a bare kind name ("LinearPT"), or a path to a JSON file.
DensityModel parse_density(const std::string& text);

nlohmann::json critical_to_json(const CriticalPoint& p);
CriticalPoint critical_from_json(const nlohmann::json& j);
nlohmann::json fit_to_json(const FitResult& f);

/// A result table: fixed columns, rows of numbers or strings.
using Cell = std::variant<double, long long, std::string>;
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  friend bool operator==(const Table&, const Table&) = default;
};

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// "# ptstring <command> schema=1" comment line, header, rows.
void write_csv(std::ostream& os, const std::string& command, const Table& table,
               const std::vector<std::string>& notes = {});
nlohmann::json table_to_json(const Table& table);
Table table_from_json(const nlohmann::json& j);

/// Reads (alpha_c, e_c, branch) columns from a CSV written by the critical command.
std::vector<CriticalPoint> read_critical_csv(std::istream& is);

}  // namespace ptstring
