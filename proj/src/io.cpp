#include "ptstring/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ptstring/errors.hpp"

namespace ptstring {

using nlohmann::json;

namespace {

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorCode::Config, "complex values must be a number or [re, im]");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

json density_to_json(const DensityModel& model) {
  return {{"kind", to_string(model.kind())},
          {"alpha", model.alpha()},
          {"c1", complex_to_json(model.c1())},
          {"c2", complex_to_json(model.c2())},
          {"kappa", model.kappa()}};
}

DensityModel density_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("kind")) {
      throw Error(ErrorCode::Config, "density JSON needs a \"kind\" field");
    }
    const DensityKind kind = density_kind_from_string(j.at("kind").get<std::string>());
    const double alpha = j.value("alpha", 0.0);
    switch (kind) {
      case DensityKind::Uniform: return DensityModel::uniform();
      case DensityKind::LinearPT: return DensityModel::linear_pt(alpha);
      case DensityKind::QuadraticPT: return DensityModel::quadratic_pt(alpha);
      case DensityKind::Borg: return DensityModel::borg(alpha);
      case DensityKind::PTBorg: return DensityModel::pt_borg(alpha);
      case DensityKind::SolvableFamily:
        return DensityModel::solvable_family(complex_from_json(j.at("c1")),
                                             complex_from_json(j.at("c2")), j.value("kappa", 0.0));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("bad density JSON: ") + e.what());
  }
  throw Error(ErrorCode::Config, "bad density JSON");
}

DensityModel parse_density(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return density_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Config, std::string("bad density JSON: ") + e.what());
    }
  }
  std::ifstream file(text);
  if (file) {
    try {
      return density_from_json(json::parse(file));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Config, "bad density JSON in " + text + ": " + e.what());
    }
  }
  return density_from_json(json{{"kind", text}});
}

json critical_to_json(const CriticalPoint& p) {
  return {{"index", p.index},           {"alpha_c", p.alpha_c},
          {"e_c", p.e_c},               {"branch", to_string(p.branch)},
          {"log_abs_F", p.log_abs_F},   {"log_abs_FE", p.log_abs_FE},
          {"trunc_N", p.trunc_N},       {"degraded", p.degraded},
          {"iterations", p.iterations}, {"alpha_check", p.alpha_check}};
}

CriticalPoint critical_from_json(const json& j) {
  CriticalPoint p;
  p.index = j.at("index").get<int>();
  p.alpha_c = j.at("alpha_c").get<double>();
  p.e_c = j.at("e_c").get<double>();
  p.branch = branch_from_string(j.at("branch").get<std::string>());
  p.log_abs_F = j.value("log_abs_F", 0.0);
  p.log_abs_FE = j.value("log_abs_FE", 0.0);
  p.trunc_N = j.value("trunc_N", 0);
  p.degraded = j.value("degraded", false);
  p.iterations = j.value("iterations", 0);
  p.alpha_check = j.value("alpha_check", 0.0);
  return p;
}

json fit_to_json(const FitResult& f) {
  json points = json::array();
  for (const auto& [a, e] : f.points_used) points.push_back({a, e});
  return {{"b", f.b},
          {"c", f.c},
          {"s", f.s},
          {"sigma_b", f.sigma_b},
          {"sigma_c", f.sigma_c},
          {"sigma_s", f.sigma_s},
          {"residual_norm", f.residual_norm},
          {"orientation", f.orientation == FitOrientation::AlphaOfE ? "alpha_of_e" : "e_of_alpha"},
          {"points_used", points}};
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

void write_csv(std::ostream& os, const std::string& command, const Table& table,
               const std::vector<std::string>& notes) {
  os << "# ptstring " << command << " schema=" << kSchemaVersion << '\n';
  for (const auto& n : notes) os << "# " << n << '\n';
  for (std::size_t k = 0; k < table.columns.size(); ++k) {
    os << (k ? "," : "") << table.columns[k];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) os << format_double(v);
            else os << v;
          },
          row[k]);
    }
    os << '\n';
  }
}

json table_to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t k = 0; k < row.size(); ++k) {
      std::visit([&](const auto& v) { obj[table.columns[k]] = v; }, row[k]);
    }
    rows.push_back(std::move(obj));
  }
  return {{"columns", table.columns}, {"rows", rows}};
}

Table table_from_json(const json& j) {
  Table t;
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& obj : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : t.columns) {
      const json& v = obj.at(c);
      if (v.is_number_integer()) row.emplace_back(v.get<long long>());
      else if (v.is_number()) row.emplace_back(v.get<double>());
      else row.emplace_back(v.get<std::string>());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<CriticalPoint> read_critical_csv(std::istream& is) {
  std::string line;
  std::map<std::string, std::size_t> col;
  std::vector<CriticalPoint> out;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (col.empty()) {
      for (std::size_t k = 0; k < cells.size(); ++k) col[cells[k]] = k;
      for (const char* need : {"alpha_c", "e_c", "branch"}) {
        if (!col.count(need)) throw Error(ErrorCode::Config, std::string("CSV lacks column ") + need);
      }
      continue;
    }
    CriticalPoint p;
    p.index = static_cast<int>(out.size()) + 1;
    p.alpha_c = std::stod(cells.at(col["alpha_c"]));
    p.e_c = std::stod(cells.at(col["e_c"]));
    p.branch = branch_from_string(cells.at(col["branch"]));
    out.push_back(p);
  }
  return out;
}

}  // namespace ptstring
