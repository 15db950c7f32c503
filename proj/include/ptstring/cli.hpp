#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ptstring/critical.hpp"
#include "ptstring/density.hpp"
#include "ptstring/io.hpp"

namespace ptstring {

enum class Command { Spectrum, Sumrules, Bounds, Shanks, Critical, Fit, BorgVerify, Delta, Table1 };
std::string to_string(Command c);

struct AlphaRange {
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;  ///< number of intervals; steps + 1 points
};

/// Parses "a:b:k". Throws Config unless k >= 1 and a <= b.
AlphaRange parse_alpha_range(const std::string& text);

struct RunConfig {
  Command command = Command::Spectrum;
  DensityModel model = DensityModel::uniform();
  std::optional<double> alpha;
  std::optional<AlphaRange> alpha_range;
  std::vector<double> alpha_list;  ///< --alphas a,b,c; exclusive with alpha_range
  int N = 0;  ///< 0 selects the command's default
  int M = 0;  ///< collocation grid; 0 = not used / default
  int depth = 4;
  Branch branch = Branch::PositiveE;
  int count = 8;
  std::string out;  ///< empty = stdout
  std::string format = "csv";
  std::string input;  ///< fit: CSV written by `critical`
  int terms = 50;     ///< delta: kernel truncation K
  double y = 0.0;     ///< delta: second argument of the kernel
  int mode = 0;       ///< delta: print φ_mode instead of the kernel when > 0
  int grid = 201;
};

/// Throws Error(Config) on any invalid flag or value.
RunConfig parse_args(int argc, const char* const* argv);

struct RunResult {
  Table table;
  std::vector<std::string> notes;  ///< CSV comment lines
  nlohmann::json extra = nlohmann::json::object();  ///< merged into JSON output
};

/// Runs one command and returns its table (no I/O).
RunResult execute(const RunConfig& config);

/// Executes and writes CSV/JSON to config.out (or `out`). Returns 0, or 3 on a
/// numerical failure with an error JSON object on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run; config errors exit with 2.
int cli_main(int argc, const char* const* argv);

}  // namespace ptstring
