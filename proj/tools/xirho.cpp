// Command-line front end: measures, region geometry, attainment, sampling,
// estimation, the gap table, the discrete optimization check and plot data.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "xirho/xirho.hpp"

namespace {

using json = nlohmann::json;
using namespace xirho;

enum Exit { kOk = 0, kInput = 2, kNumeric = 3, kIo = 4, kDomain = 5 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownFamily:
    case ErrorCode::MissingParam:
    case ErrorCode::ParamOutOfRange:
    case ErrorCode::ParseError:
    case ErrorCode::TooFewPoints:
    case ErrorCode::DimensionMismatch:
      return kInput;
    case ErrorCode::IoError:
      return kIo;
    case ErrorCode::NotInRegion:
    case ErrorCode::InfeasibleBudget:
    case ErrorCode::DomainError:
      return kDomain;
    default:
      return kNumeric;
  }
}

std::optional<long long> env_integer(const char* name) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const long long value = std::strtoll(raw, &end, 10);
  if (*end != '\0') throw Error(ErrorCode::ParseError, std::string(name) + "='" + raw + "' is not an integer");
  return value;
}

void print_json(const json& j) { std::cout << j.dump() << '\n'; }

json to_json(const MeasureResult& r) {
  return {{"xi", r.xi}, {"rho", r.rho}, {"method", std::string(method_name(r.method))}, {"err", r.err}};
}

// Writes CSV to `path`, or stdout when the path is empty or "-".
template <class Writer>
void emit_csv(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  auto out = open_output(path);
  write(out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

struct Options {
  std::string spec;
  std::string method = "auto";
  int nodes = 64;
  std::uint64_t seed = 1;
  std::size_t n = 100000;
  int grid = 200;
  double tol = 1e-6;
  std::string out;
  std::string in;
  int k = 101;
  double xi = 0.0;
  double rho = 0.0;
  double c = 0.3;
  bool check = false;
  std::string figure;
  double b = 1.0;
};

int cmd_measures(const Options& o) {
  const CopulaSpec spec = parse_spec(o.spec);
  MeasureResult r;
  std::string method = o.method;
  if (method == "auto") method = has_closed_form(spec) ? "closed" : "quad";
  if (method == "closed") {
    r = measures_closed(spec);
  } else if (method == "quad") {
    r = measures_quadrature(CopulaModel(spec), {o.nodes, 4});
  } else {
    r = measures_monte_carlo(CopulaModel(spec), o.n, o.seed);
  }
  print_json(to_json(r));
  return kOk;
}

int cmd_boundary(const Options& o) {
  const auto rows = boundary_table(o.k);
  emit_csv(o.out, [&](std::ostream& out) { write_boundary_csv(out, rows); });
  return kOk;
}

int cmd_attain(const Options& o) {
  const RegionPoint where = classify(o.xi, o.rho, o.tol);
  if (where.classification == Classification::Outside) {
    std::cerr << "NotInRegion: (xi=" << o.xi << ", rho=" << o.rho << ") is outside; |rho| must not exceed M_xi";
    if (o.xi >= 0.0 && o.xi <= 1.0) std::cerr << " = " << M_of_x(o.xi);
    std::cerr << '\n';
    return kDomain;
  }
  const AttainmentRecipe r = attain(o.xi, o.rho, std::max(o.tol, kQuadratureTol));
  print_json({{"b", r.b},
              {"p", r.p},
              {"xi", r.achieved.xi},
              {"rho", r.achieved.rho},
              {"classification", std::string(classification_name(where.classification))}});
  return kOk;
}

int cmd_table1(const Options& o) {
  const auto reference = reference_gap_maxima();
  std::printf("%-9s %9s %7s %7s %7s  %s\n", "family", "param", "rho", "xi", "gap", "status");
  int failures = 0;
  for (const auto& ref : reference) {
    const GapMaximum row = table1_search(ref.family, default_gap_grid(ref.family), o.nodes, 1e-6);
    const double diffs[] = {row.param - ref.param, row.rho - ref.rho, row.xi - ref.xi, row.gap - ref.gap};
    std::string status = "PASS";
    const char* names[] = {"param", "rho", "xi", "gap"};
    for (int k = 0; k < 4; ++k) {
      if (std::abs(diffs[k]) > 0.005) {
        status = status == "PASS" ? std::string("FAIL ") + names[k] : status + "," + names[k];
      }
    }
    if (status != "PASS") ++failures;
    std::printf("%-9s %9.3f %7.3f %7.3f %7.3f  %s\n", std::string(family_name(ref.family)).c_str(), row.param,
                row.rho, row.xi, row.gap, status.c_str());
  }
  std::printf("%d of %zu rows within 0.005 of the reference values\n", static_cast<int>(reference.size()) - failures,
              reference.size());
  return kOk;
}

int cmd_sample(const Options& o) {
  const Sample s = sample(CopulaModel(parse_spec(o.spec)), o.n, o.seed);
  emit_csv(o.out, [&](std::ostream& out) { write_sample_csv(out, s); });
  return kOk;
}

int cmd_estimate(const Options& o) {
  Sample s;
  if (o.in.empty() || o.in == "-") {
    s = read_sample_csv(std::cin);
  } else {
    auto in = open_input(o.in);
    s = read_sample_csv(in);
  }
  print_json({{"xi_n", xi_n(s, o.seed)}, {"rho_n", rho_n(s)}, {"n", s.size()}});
  return kOk;
}

int cmd_oracle(const Options& o) {
  const DiscreteProblem problem{o.grid, o.grid, o.c};
  const OracleSolution sol = solve(problem);
  const double m = M_of_x(o.c);
  const double b = b_of_x(o.c);
  json j = {{"c", o.c},
            {"grid", o.grid},
            {"objective", sol.objective},
            {"M_x", m},
            {"gap", sol.objective - m},
            {"mu", sol.mu},
            {"slope", sol.common_slope},
            {"expected_slope", -b},
            {"slope_rel_err", sol.common_slope / -b - 1.0},
            {"slope_spread", sol.slope_spread},
            {"monotone_in_v", sol.monotone_in_v}};
  if (o.check) {
    const auto pg = cross_check_projected_gradient(problem);
    j["pg_objective"] = pg.objective;
    j["pg_iterations"] = pg.iterations;
    j["pg_monotone_constraint_active"] = pg.monotone_constraint_active;
  }
  if (!o.out.empty()) emit_csv(o.out, [&](std::ostream& out) { write_oracle_rows_csv(out, sol.rows); });
  print_json(j);
  return kOk;
}

void write_region(std::ostream& out, int k) {
  out << "curve,xi,rho\n";
  const auto rows = boundary_table(k);
  for (const auto& r : rows) out << "upper," << format_number(r.x) << ',' << format_number(r.m) << '\n';
  for (const auto& r : rows) out << "lower," << format_number(r.x) << ',' << format_number(-r.m) << '\n';
  // Boundary family traced by its parameter: b > 0 is SI, b < 0 is SD.
  for (int sign : {1, -1}) {
    const char* name = sign > 0 ? "cb_si" : "cb_sd";
    for (int i = 0; i < k; ++i) {
      const double b = sign * std::pow(10.0, -2.0 + 5.0 * i / (k - 1));
      out << name << ',' << format_number(xi_closed_cb(b)) << ',' << format_number(rho_closed_cb(b)) << '\n';
    }
  }
}

void write_density(std::ostream& out, const CopulaModel& model, int n) {
  // d/dv h_v(t) by central differences at cell midpoints.
  const double dv = 1e-6;
  out << "t,v,density\n";
  for (int j = 0; j < n; ++j) {
    const double v = (j + 0.5) / n;
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) / n;
      const double d = (model.d1(t, v + dv) - model.d1(t, v - dv)) / (2.0 * dv);
      out << format_number(t) << ',' << format_number(v) << ',' << format_number(std::max(d, 0.0)) << '\n';
    }
  }
}

void write_hcurves(std::ostream& out, const CopulaModel& model, int n) {
  out << "v,t,h\n";
  for (int k = 1; k <= 9; ++k) {
    const double v = k / 10.0;
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      out << format_number(v) << ',' << format_number(t) << ',' << format_number(model.d1(t, v)) << '\n';
    }
  }
}

int cmd_plotdata(const Options& o) {
  if (o.figure == "region") {
    emit_csv(o.out, [&](std::ostream& out) { write_region(out, o.grid + 1); });
  } else {
    const CopulaModel model(CopulaSpec::cb(o.b));
    if (o.figure == "density") {
      emit_csv(o.out, [&](std::ostream& out) { write_density(out, model, o.grid); });
    } else {
      emit_csv(o.out, [&](std::ostream& out) { write_hcurves(out, model, o.grid); });
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  try {
    if (auto nodes = env_integer("XIRHO_NODES")) o.nodes = static_cast<int>(*nodes);
    if (auto seed = env_integer("XIRHO_SEED")) o.seed = static_cast<std::uint64_t>(*seed);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kInput;
  }

  CLI::App app{"Chatterjee's xi and Spearman's rho: measures, attainable region and checks"};
  app.require_subcommand(1);

  const auto nodes_check = CLI::Range(16, 256);

  auto* measures = app.add_subcommand("measures", "xi and rho of a copula as JSON");
  measures->add_option("spec", o.spec, "copula, e.g. cb:b=1, gauss:r=0.707, pi")->required();
  measures->add_option("--method", o.method, "closed, quad, mc or auto")
      ->check(CLI::IsMember({"auto", "closed", "quad", "mc"}));
  measures->add_option("--nodes", o.nodes, "Gauss-Legendre nodes per panel")->check(nodes_check);
  measures->add_option("--n", o.n, "sample size for --method mc")->check(CLI::PositiveNumber);
  measures->add_option("--seed", o.seed, "seed for --method mc");

  auto* boundary = app.add_subcommand("boundary", "boundary of the attainable region as CSV x,M_x,b_x");
  boundary->add_option("k", o.k, "number of equally spaced x")->check(CLI::Range(2, 10000000));
  boundary->add_option("--out", o.out, "output file (default stdout)");

  auto* attain_cmd = app.add_subcommand("attain", "shuffled boundary copula reaching (xi, rho)");
  attain_cmd->add_option("xi", o.xi)->required();
  attain_cmd->add_option("rho", o.rho)->required();
  attain_cmd->add_option("--tol", o.tol, "classification tolerance");

  auto* table1 = app.add_subcommand("table1", "gap-maximizing parameters of six families");
  table1->add_option("--nodes", o.nodes, "Gauss-Legendre nodes per panel")->check(nodes_check);

  auto* sample_cmd = app.add_subcommand("sample", "draw a sample as CSV x,y");
  sample_cmd->add_option("spec", o.spec)->required();
  sample_cmd->add_option("--n", o.n, "sample size")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", o.seed);
  sample_cmd->add_option("--out", o.out, "output file (default stdout)");

  auto* estimate = app.add_subcommand("estimate", "rank estimators xi_n and rho_n of a two-column CSV");
  estimate->add_option("input", o.in, "CSV file, '-' for stdin")->required();
  estimate->add_option("--seed", o.seed, "seed for breaking ties in x");

  auto* oracle = app.add_subcommand("oracle", "discrete maximization of rho under a xi budget");
  oracle->add_option("--c", o.c, "xi budget in (0,1)")->required();
  oracle->add_option("--grid", o.grid, "cells per axis")->check(CLI::Range(2, 4000));
  oracle->add_option("--diag-out", o.out, "per-row diagnostics CSV");
  oracle->add_flag("--check", o.check, "also run the projected-gradient cross-check");

  auto* plot = app.add_subcommand("plotdata", "figure data as CSV");
  plot->add_option("figure", o.figure)->required()->check(CLI::IsMember({"region", "density", "hcurves"}));
  plot->add_option("--b", o.b, "boundary copula parameter");
  plot->add_option("--grid", o.grid, "resolution")->check(CLI::Range(2, 4000));
  plot->add_option("--out", o.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*measures) return cmd_measures(o);
    if (*boundary) return cmd_boundary(o);
    if (*attain_cmd) return cmd_attain(o);
    if (*table1) return cmd_table1(o);
    if (*sample_cmd) return cmd_sample(o);
    if (*estimate) return cmd_estimate(o);
    if (*oracle) return cmd_oracle(o);
    if (*plot) {
      if (o.figure != "region" && o.b == 0.0) throw Error(ErrorCode::ParamOutOfRange, "--b must be nonzero");
      return cmd_plotdata(o);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kInput;
}
