#include "ptstring/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "ptstring/collocation.hpp"
#include "ptstring/discretize.hpp"
#include "ptstring/errors.hpp"
#include "ptstring/exact_solutions.hpp"
#include "ptstring/extrapolate.hpp"
#include "ptstring/fit.hpp"
#include "ptstring/parallel.hpp"
#include "ptstring/spectrum.hpp"
#include "ptstring/sumrules.hpp"

namespace ptstring {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::pair<std::string, Command>> kCommands = {
    {"spectrum", Command::Spectrum}, {"sumrules", Command::Sumrules},
    {"bounds", Command::Bounds},     {"shanks", Command::Shanks},
    {"critical", Command::Critical}, {"fit", Command::Fit},
    {"borg-verify", Command::BorgVerify}, {"delta", Command::Delta},
    {"table1", Command::Table1}};

std::vector<double> alphas(const RunConfig& c) {
  if (!c.alpha_list.empty()) return c.alpha_list;
  if (c.alpha_range) {
    std::vector<double> out;
    const auto& r = *c.alpha_range;
    for (int i = 0; i <= r.steps; ++i) out.push_back(r.start + (r.stop - r.start) * i / r.steps);
    return out;
  }
  return {c.alpha.value_or(c.model.alpha())};
}

DensityModel model_at(const RunConfig& c, double alpha) { return c.model.with_alpha(alpha); }

// NaN has no JSON encoding; undefined values travel as the string "nan".
Cell number(double v) { return std::isfinite(v) ? Cell(v) : Cell(std::string("nan")); }

int pick(int value, int fallback) { return value > 0 ? value : fallback; }

std::string tag_name(EigenTag t) {
  switch (t) {
    case EigenTag::Real: return "real";
    case EigenTag::PairLower: return "pair_lower";
    case EigenTag::PairUpper: return "pair_upper";
  }
  return "real";
}

RunResult cmd_spectrum(const RunConfig& c) {
  const auto as = alphas(c);
  const int N = pick(c.N, 64);
  const int count = std::min(c.count, N);
  // both --N and --M: put the two discretizations side by side
  const bool compare = c.N > 0 && c.M > 0;
  std::vector<ComplexSpectrum> spectra(as.size());
  std::vector<ComplexSpectrum> colloc(compare ? as.size() : 0);
  parallel_for(static_cast<int>(as.size()), [&](int i) {
    const DensityModel m = model_at(c, as[i]);
    if (compare) {
      spectra[i] = spectrum(assemble(m, N));
      colloc[i] = spectrum_collocation(build(m, c.M), count);
    } else {
      spectra[i] = c.M > 0 ? spectrum_collocation(build(m, c.M), count)
                           : spectrum(assemble(m, N));
    }
  });
  RunResult r;
  if (compare) {
    r.table.columns = {"alpha", "n", "rr_re", "rr_im", "colloc_re", "colloc_im", "rel_diff"};
    double worst = 0.0;
    for (std::size_t i = 0; i < as.size(); ++i) {
      for (int n = 0; n < count; ++n) {
        const cplx a = spectra[i].eigenvalues[n];
        const cplx b = colloc[i].eigenvalues[n];
        const double d = std::abs(a - b) / std::abs(b);
        worst = std::max(worst, d);
        r.table.rows.push_back({as[i], static_cast<long long>(n + 1), a.real(), a.imag(), b.real(),
                                b.imag(), d});
      }
    }
    r.extra["max_rel_diff"] = worst;
    r.notes.push_back("rayleigh-ritz N=" + std::to_string(N) + " vs collocation M=" +
                      std::to_string(c.M) + " max rel diff " + format_double(worst));
    return r;
  }
  r.table.columns = {"alpha", "n", "re", "im", "tag"};
  for (std::size_t i = 0; i < as.size(); ++i) {
    for (int n = 0; n < count; ++n) {
      const cplx e = spectra[i].eigenvalues[n];
      r.table.rows.push_back({as[i], static_cast<long long>(n + 1), e.real(), e.imag(),
                              tag_name(spectra[i].tags[n])});
    }
  }
  r.notes.push_back(c.M > 0 ? "collocation M=" + std::to_string(c.M)
                            : "rayleigh-ritz N=" + std::to_string(N));
  return r;
}

RunResult cmd_sumrules(const RunConfig& c) {
  const double alpha = alphas(c).front();
  const DensityModel m = model_at(c, alpha);
  const int N = pick(c.N, 256);
  const int top = max_sum_rule_order(m.kind());
  if (top == 0) throw Error(ErrorCode::Config, "sumrules needs LinearPT, QuadraticPT or Uniform");
  const PencilMatrices p = assemble(m, N);
  RunResult r;
  r.table.columns = {"s", "exact_fraction", "exact", "trace_re", "trace_im", "rel_diff"};
  for (int s = 1; s <= top; ++s) {
    const Rational q = exact_sum_rule_rational(m.kind(), s, Rational(alpha));
    const double exact = static_cast<double>(q);
    const cplx tr = trace_sum_rule(p, s, true).value;
    r.table.rows.push_back({static_cast<long long>(s), to_fraction(q), exact, tr.real(), tr.imag(),
                            std::abs(tr / exact - 1.0)});
  }
  r.notes.push_back(m.describe() + " trace N=" + std::to_string(N));
  return r;
}

RunResult cmd_bounds(const RunConfig& c) {
  const auto as = alphas(c);
  const int top = max_sum_rule_order(c.model.kind());
  if (top == 0) throw Error(ErrorCode::Config, "bounds needs LinearPT, QuadraticPT or Uniform");
  RunResult r;
  r.table.columns = {"alpha", "s", "lower", "upper", "complex_signaled"};
  for (double a : as) {
    for (int s = 1; s < top; ++s) {
      const auto b = eigenvalue_bounds(model_at(c, a), s);
      r.table.rows.push_back({a, static_cast<long long>(s), b.lower, b.upper,
                              static_cast<long long>(b.complex_signaled)});
    }
  }
  return r;
}

RunResult cmd_shanks(const RunConfig& c) {
  RunResult r;
  if (!c.alpha && !c.alpha_range) {
    r.table.columns = {"depth", "alpha_star"};
    const double a = singularity_estimate(c.depth);
    r.table.rows.push_back({static_cast<long long>(c.depth), a});
    r.extra["singularity"] = a;
    return r;
  }
  const auto as = alphas(c);
  const int M = pick(c.M, 400);
  r.table.columns = {"alpha", "e1_estimate", "lower", "upper", "collocation_e1"};
  std::vector<std::vector<Cell>> rows(as.size());
  parallel_for(static_cast<int>(as.size()), [&](int i) {
    const DensityModel m = DensityModel::linear_pt(as[i]);
    const auto b = eigenvalue_bounds(m, 8);
    double est = std::nan("");
    try {
      est = e1_estimate(as[i], c.depth);
    } catch (const Error&) {
      // estimate undefined once some Z(s) <= 0
    }
    const double col = spectrum_collocation(build(m, M), 1).eigenvalues[0].real();
    rows[i] = {as[i], number(est), number(b.complex_signaled ? std::nan("") : b.lower),
               number(b.complex_signaled ? std::nan("") : b.upper), col};
  });
  r.table.rows = std::move(rows);
  r.notes.push_back("depth=" + std::to_string(c.depth) + " bounds s=8 collocation M=" +
                    std::to_string(M));
  return r;
}

int critical_default_N(const RunConfig& c) {
  if (c.model.kind() == DensityKind::QuadraticPT) return c.branch == Branch::NegativeE ? 128 : 96;
  return 64;
}

Table critical_table(const std::vector<CriticalPoint>& pts) {
  Table t;
  t.columns = {"n",          "alpha_c",    "e_c",     "branch",  "log_abs_F",
               "log_abs_FE", "alpha_check", "trunc_N", "degraded"};
  for (const auto& p : pts) {
    t.rows.push_back({static_cast<long long>(p.index), p.alpha_c, p.e_c, to_string(p.branch),
                      p.log_abs_F, p.log_abs_FE, p.alpha_check, static_cast<long long>(p.trunc_N),
                      static_cast<long long>(p.degraded)});
  }
  return t;
}

RunResult cmd_critical(const RunConfig& c) {
  const int N = pick(c.N, critical_default_N(c));
  const auto pts = critical_sequence(c.model, c.count, N, c.branch);
  RunResult r;
  r.table = critical_table(pts);
  r.notes.push_back(to_string(c.model.kind()) + " N=" + std::to_string(N) + " validated at N=" +
                    std::to_string(3 * N / 2));
  return r;
}

RunResult cmd_fit(const RunConfig& c) {
  std::vector<CriticalPoint> pts;
  if (!c.input.empty()) {
    std::ifstream in(c.input);
    if (!in) throw Error(ErrorCode::Config, "cannot open " + c.input);
    pts = read_critical_csv(in);
  } else {
    pts = critical_sequence(c.model, c.count, pick(c.N, critical_default_N(c)), c.branch);
  }
  const FitOrientation o = !pts.empty() && pts.front().branch == Branch::NegativeE
                               ? FitOrientation::EOfAlpha
                               : FitOrientation::AlphaOfE;
  const FitResult f = fit_critical(pts, o);
  RunResult r;
  r.table.columns = {"alpha_c", "e_c", "fitted", "residual"};
  for (const auto& [a, e] : f.points_used) {
    const double x = std::abs(o == FitOrientation::AlphaOfE ? e : a);
    const double y = o == FitOrientation::AlphaOfE ? a : e;
    const double fitted = f.b + f.c * std::pow(x, -f.s);
    r.table.rows.push_back({a, e, fitted, y - fitted});
  }
  r.extra["fit"] = fit_to_json(f);
  std::ostringstream note;
  note << "b=" << format_double(f.b) << " c=" << format_double(f.c) << " s=" << format_double(f.s)
       << " sigma_b=" << format_double(f.sigma_b) << " sigma_c=" << format_double(f.sigma_c)
       << " sigma_s=" << format_double(f.sigma_s);
  r.notes.push_back(note.str());
  return r;
}

RunResult cmd_borg_verify(const RunConfig& c) {
  const int N = pick(c.N, 64);
  RunResult r;
  r.table.columns = {"alpha", "check", "value", "tolerance", "pass"};
  for (double a : alphas(c)) {
    const DensityModel m = model_at(c, a);
    const SolvableString str(m);
    auto add = [&](const std::string& name, double v, double tol) {
      r.table.rows.push_back({a, name, v, tol, static_cast<long long>(v <= tol)});
    };
    add("isospectrality_N" + std::to_string(N), isospectrality_check(m, N), 1e-7);
    for (int n = 1; n <= 4; ++n) {
      add("helmholtz_residual_n" + std::to_string(n), helmholtz_residual(str, n, 201), 1e-5);
    }
    add("bilinear_gram_8", bilinear_gram(str, 8).deviation, 1e-8);
  }
  r.notes.push_back(to_string(c.model.kind()));
  return r;
}

RunResult cmd_delta(const RunConfig& c) {
  const SolvableString str(model_at(c, alphas(c).front()));
  const int g = std::max(2, c.grid);
  RunResult r;
  r.table.columns = {"x", "re", "im", "abs"};
  for (int j = 0; j < g; ++j) {
    const double x = -0.5 + static_cast<double>(j) / (g - 1);
    const cplx v = c.mode > 0 ? exact_eigenfunction(str, c.mode, x) : pt_delta(str, x, c.y, c.terms);
    r.table.rows.push_back({x, v.real(), v.imag(), std::abs(v)});
  }
  r.notes.push_back(c.mode > 0 ? "eigenfunction n=" + std::to_string(c.mode)
                               : "kernel K=" + std::to_string(c.terms) + " y=" + format_double(c.y));
  return r;
}

RunResult cmd_table1(const RunConfig& c) {
  const double alpha = c.alpha.value_or(30.0);
  const DensityModel m = DensityModel::quadratic_pt(alpha);
  RunResult r;
  r.table.columns = {"s", "numerical_re", "numerical_im", "exact_fraction", "exact", "rel_diff"};
  std::vector<cplx> numeric(8);
  std::string method;
  if (c.M > 0) {
    // the collocation route: sum every eigenvalue of the M-point operator
    const ComplexSpectrum sp = spectrum_collocation(build(m, c.M), c.M);
    for (int s = 1; s <= 7; ++s) {
      for (const cplx& e : sp.eigenvalues) numeric[s] += std::pow(e, -s);
    }
    method = "collocation M=" + std::to_string(c.M);
  } else {
    const int N = pick(c.N, 256);
    const PencilMatrices p = assemble(m, N);
    for (int s = 1; s <= 7; ++s) numeric[s] = trace_sum_rule(p, s, true).value;
    method = "trace N=" + std::to_string(N) + " (s<=2 truncation tail added)";
  }
  for (int s = 1; s <= 7; ++s) {
    const Rational q = exact_sum_rule_rational(DensityKind::QuadraticPT, s, Rational(alpha));
    const double exact = static_cast<double>(q);
    r.table.rows.push_back({static_cast<long long>(s), numeric[s].real(), numeric[s].imag(),
                            to_fraction(q), exact, std::abs(numeric[s] / exact - 1.0)});
  }
  r.notes.push_back("QuadraticPT alpha=" + format_double(alpha) + " " + method);
  return r;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [name, cmd] : kCommands) {
    if (cmd == c) return name;
  }
  return "spectrum";
}

AlphaRange parse_alpha_range(const std::string& text) {
  AlphaRange r;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> r.start >> c1 >> r.stop >> c2 >> r.steps) || c1 != ':' || c2 != ':' ||
      !is.eof()) {
    throw Error(ErrorCode::Config, "alpha range must look like start:stop:steps");
  }
  if (r.steps < 1 || r.start > r.stop) {
    throw Error(ErrorCode::Config, "alpha range needs steps >= 1 and start <= stop");
  }
  return r;
}

namespace {

std::string command_help(Command c) {
  switch (c) {
    case Command::Spectrum: return "eigenvalues (Rayleigh-Ritz, collocation, or both)";
    case Command::Sumrules: return "exact and trace sum rules Z(s)";
    case Command::Bounds: return "E1 bounds from consecutive sum rules";
    case Command::Shanks: return "Shanks-accelerated E1 and singularity estimate";
    case Command::Critical: return "exceptional points (alpha_n, e_n)";
    case Command::Fit: return "power-law fit of a critical sequence";
    case Command::BorgVerify: return "isospectrality and eigenfunction checks for solvable strings";
    case Command::Delta: return "truncated delta kernel or exact eigenfunctions on a grid";
    case Command::Table1: return "sum-rule table for QuadraticPT";
  }
  return "";
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"PT-symmetric string spectra, sum rules and exceptional points", "ptstring"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string model_text = "Uniform";
  std::string range_text;
  std::string branch_text = "pos";
  double alpha = 0.0;

  for (const auto& [name, cmd] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, command_help(cmd));
    sub->add_option("--model", model_text, "density as JSON, a JSON file, or a kind name");
    sub->add_option("--alpha", alpha, "density parameter");
    sub->add_option("--alpha-range", range_text, "sweep start:stop:steps");
    sub->add_option("--alphas", cfg.alpha_list, "explicit alpha values, comma separated")
        ->delimiter(',');
    sub->add_option("--N", cfg.N, "Rayleigh-Ritz truncation");
    sub->add_option("--M", cfg.M, "collocation grid size");
    sub->add_option("--depth", cfg.depth, "Shanks levels (0..4)");
    sub->add_option("--branch", branch_text, "pos or neg");
    sub->add_option("--count", cfg.count, "eigenvalues or critical points to report");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json");
    sub->add_option("--in", cfg.input, "fit: CSV written by the critical command");
    sub->add_option("--terms", cfg.terms, "delta: kernel truncation");
    sub->add_option("--y", cfg.y, "delta: kernel second argument");
    sub->add_option("--mode", cfg.mode, "delta: print this eigenfunction instead");
    sub->add_option("--grid", cfg.grid, "delta: number of x samples");
    sub->callback([&cfg, cmd = cmd] { cfg.command = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    throw Error(ErrorCode::Config, app.help());
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::Config, e.what());
  }

  CLI::App* used = app.get_subcommands().front();
  try {
    cfg.model = parse_density(model_text);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  if (used->count("--alpha")) {
    cfg.alpha = alpha;
    cfg.model = cfg.model.with_alpha(alpha);
  }
  if (!range_text.empty()) cfg.alpha_range = parse_alpha_range(range_text);
  if (cfg.alpha_range && !cfg.alpha_list.empty()) {
    throw Error(ErrorCode::Config, "use either --alpha-range or --alphas");
  }
  cfg.branch = branch_from_string(branch_text);
  if (cfg.format != "csv" && cfg.format != "json") {
    throw Error(ErrorCode::Config, "format must be csv or json");
  }
  if (cfg.N != 0 && cfg.N < 2) throw Error(ErrorCode::Config, "N must be >= 2");
  if (cfg.M != 0 && cfg.M < 8) throw Error(ErrorCode::Config, "M must be >= 8");
  if (cfg.count < 1) throw Error(ErrorCode::Config, "count must be positive");
  return cfg;
}

RunResult execute(const RunConfig& c) {
  switch (c.command) {
    case Command::Spectrum: return cmd_spectrum(c);
    case Command::Sumrules: return cmd_sumrules(c);
    case Command::Bounds: return cmd_bounds(c);
    case Command::Shanks: return cmd_shanks(c);
    case Command::Critical: return cmd_critical(c);
    case Command::Fit: return cmd_fit(c);
    case Command::BorgVerify: return cmd_borg_verify(c);
    case Command::Delta: return cmd_delta(c);
    case Command::Table1: return cmd_table1(c);
  }
  throw Error(ErrorCode::Config, "unknown command");
}

namespace {

void error_json(std::ostream& err, const Error& e) {
  err << nlohmann::json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << '\n';
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunResult result;
  try {
    result = execute(config);
  } catch (const Error& e) {
    error_json(err, e);
    return e.code() == ErrorCode::Config ? 2 : 3;
  }
  std::ofstream file;
  std::ostream* os = &out;
  if (!config.out.empty()) {
    file.open(config.out);
    if (!file) {
      error_json(err, Error(ErrorCode::Config, "cannot write " + config.out));
      return 2;
    }
    os = &file;
  }
  if (config.format == "json") {
    nlohmann::json j = table_to_json(result.table);
    j["schema_version"] = kSchemaVersion;
    j["command"] = to_string(config.command);
    j["model"] = density_to_json(config.model);
    j["notes"] = result.notes;
    for (auto& [k, v] : result.extra.items()) j[k] = v;
    *os << j.dump(2) << '\n';
  } else {
    write_csv(*os, to_string(config.command), result.table, result.notes);
  }
  return 0;
}

int cli_main(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--help" || a == "-h") {
      try {
        parse_args(argc, argv);
      } catch (const Error& e) {
        std::cout << e.what() << '\n';
      }
      return 0;
    }
  }
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const Error& e) {
    error_json(std::cerr, e);
    return 2;
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace ptstring
