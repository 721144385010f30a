#pragma once

// Command-line front end. `run` takes the argument list (without argv[0])
// and two streams so that tests can drive it in-process.
//
// Exit codes: 0 success, 2 config/domain, 3 solver, 4 bound violated,
// 5 sweep failure.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "torsionlab/bounds.hpp"
#include "torsionlab/geometry.hpp"
#include "torsionlab/mesh.hpp"
#include "torsionlab/radial.hpp"
#include "torsionlab/report.hpp"
#include "torsionlab/torsion.hpp"

namespace torsionlab::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_solver = 3, exit_bound = 4, exit_sweep = 5 };

struct RunConfig {
  std::string command;
  std::string domain_file;
  std::string family;
  std::vector<double> params;
  double h = 0.04;
  double cg_tol = 1e-10;
  double asym_tol = 1e-3;
  TruncationExponents exponents;
  std::string out_dir;
  bool plot = false;
  int jobs = 1;
  int vary_index = -1;
  std::vector<double> values;
  int n = 2;
  double br = 1.0, bR = 2.0, G = 10.0;
  int samples = 200;
  std::optional<double> corrupt_T;  // test hook for verify

  void validate() const {
    auto bad = [](const std::string& why) { return Error(ErrorCode::invalid_argument, why); };
    if (!(h > 0) || !std::isfinite(h)) throw bad("--h must be positive");
    if (!(cg_tol > 0 && cg_tol <= 1e-6)) throw bad("--cg-tol must lie in (0, 1e-6]");
    if (!(asym_tol > 0)) throw bad("--asym-tol must be positive");
    if (jobs < 1) throw bad("--jobs must be at least 1");
    exponents.validate();
  }
};

inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::not_converged:
    case ErrorCode::tag_mismatch:
    case ErrorCode::quadrature_failure:
    case ErrorCode::tolerance_not_met:
    case ErrorCode::plateau_level:
    case ErrorCode::mesh_mismatch:
      return exit_solver;
    default:
      return exit_config;
  }
}

namespace detail {

inline Domain load_input(const RunConfig& c) {
  if (!c.domain_file.empty() && !c.family.empty())
    throw Error(ErrorCode::invalid_argument, "give either --domain or --family, not both");
  if (!c.domain_file.empty()) return load_domain(c.domain_file);
  if (!c.family.empty()) return domain_family(family_from_string(c.family), std::span<const double>(c.params));
  throw Error(ErrorCode::invalid_argument, "no domain given (use --domain FILE or --family NAME --params ...)");
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::invalid_argument, "cannot write '" + p.string() + "'");
  f << content;
}

inline std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
  return std::filesystem::path(c.out_dir.empty() ? "." : c.out_dir) / name;
}

inline DeficitOptions deficit_options(const RunConfig& c) {
  DeficitOptions o;
  o.cg_tol = c.cg_tol;
  o.asymmetry.tolerance = c.asym_tol;
  o.exponents = c.exponents;
  return o;
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline std::string bound_table(const DeficitReport& r) {
  std::string s;
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %14s %14s %14s  %s\n", "bound", "lhs", "rhs", "slack", "status");
  s += line;
  for (auto& b : r.records) {
    const char* status = !b.applicable ? "n/a" : b.satisfied ? "ok" : b.hard ? "VIOLATED" : "exceeds (reported)";
    std::snprintf(line, sizeof line, "%-24s %14s %14s %14s  %s\n", b.name.c_str(), sci(b.lhs).c_str(),
                  sci(b.rhs).c_str(), sci(b.slack).c_str(), status);
    s += line;
  }
  return s;
}

}  // namespace detail

inline int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream&) {
  Domain d = detail::load_input(c);
  auto run = solve_torsion(d, c.h, c.cg_tol);
  std::string json = solution_to_json(run.solution).dump(2) + "\n";
  out << json;
  if (!c.out_dir.empty()) detail::write_file(detail::out_path(c, "solution.json"), json);
  if (c.plot)
    detail::write_file(detail::out_path(c, "solution.svg"),
                       field_svg(d, extended_field(run.solution, run.mesh, d)));
  return exit_ok;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream&) {
  Domain d = detail::load_input(c);
  DeficitReport rep = deficit(d, c.h, detail::deficit_options(c));
  if (c.corrupt_T) {
    rep.T = *c.corrupt_T;
    evaluate_bounds(rep);
  }
  out << detail::bound_table(rep);
  std::string json = to_json(rep).dump(2) + "\n";
  if (c.out_dir.empty())
    out << json;
  else
    detail::write_file(detail::out_path(c, "report.json"), json);
  return rep.hard_bounds_hold() ? exit_ok : exit_bound;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.family.empty()) throw Error(ErrorCode::invalid_argument, "sweep needs --family");
  FamilyKind kind = family_from_string(c.family);
  if (c.vary_index < 0 || c.vary_index >= int(c.params.size()))
    throw Error(ErrorCode::invalid_argument, "--vary-index must name one of the --params");
  if (c.values.empty()) throw Error(ErrorCode::invalid_argument, "--values is empty");

  const std::size_t n = c.values.size();
  std::vector<std::optional<DeficitReport>> reports(n);
  std::vector<std::string> errors(n);
  const DeficitOptions opt = detail::deficit_options(c);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        auto p = c.params;
        p[c.vary_index] = c.values[i];
        reports[i] = deficit(domain_family(kind, std::span<const double>(p)), c.h, opt);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::min<int>(c.jobs, int(n)); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = csv_row(sweep_header());
  bool failed = false;
  std::vector<TrendPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    csv += csv_row(sweep_row(int(i), c.values[i], reports[i] ? &*reports[i] : nullptr, errors[i]));
    if (reports[i])
      pts.push_back({c.values[i], reports[i]->epsilon, reports[i]->beta});
    else {
      failed = true;
      err << "member " << i << " failed: " << errors[i] << "\n";
    }
  }
  if (c.out_dir.empty())
    out << csv;
  else
    detail::write_file(detail::out_path(c, "sweep.csv"), csv);
  if (c.plot) detail::write_file(detail::out_path(c, "sweep.svg"), trend_svg(pts));

  try {
    BetaTrend trend = beta_trend(pts);
    std::string json = to_json(trend).dump(2) + "\n";
    if (!c.out_dir.empty()) detail::write_file(detail::out_path(c, "trend.json"), json);
    err << "beta trend: spearman " << format_number(trend.spearman)
        << (trend.slope ? ", log-log slope " + format_number(*trend.slope) : std::string()) << "\n";
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_sweep;
  }
  return failed ? exit_sweep : exit_ok;
}

inline int cmd_radial(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.n < 2) throw Error(ErrorCode::invalid_argument, "--n must be at least 2");
  if (c.samples < 2) throw Error(ErrorCode::invalid_argument, "--samples must be at least 2");
  auto ce = counterexample_profile(c.n, c.G, c.br, c.bR);
  RadialSpec spec;
  spec.n = c.n;
  spec.G = c.G;
  spec.S = c.bR - c.br;
  RadialProfile w = ce.V;
  if (spec.S > 0) {
    spec.holes = {{c.br, spec.S}};
    w = pointwise_bound_w(spec, zeta_inverse(spec));
  }
  std::vector<double> s;
  for (int i = 0; i <= c.samples; ++i) s.push_back(c.G * i / c.samples);
  for (double b : {c.br, c.bR, spec.S})
    if (b > 0 && b < c.G) s.push_back(b);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::string csv = csv_row({"s", "V", "u", "w"});
  double worst = -std::numeric_limits<double>::infinity();
  for (double x : s) {
    csv += csv_row({format_number(x), format_number(ce.V(x)), format_number(ce.u(x)), format_number(w(x))});
    worst = std::max(worst, ce.u(x) - ce.V(x));
  }
  std::ostream& summary = c.out_dir.empty() ? err : out;
  if (c.out_dir.empty())
    out << csv;
  else
    detail::write_file(detail::out_path(c, "radial.csv"), csv);
  summary << "gap " << format_number(ce.gap) << "\n" << "max(u - V) " << format_number(worst) << "\n";
  return exit_ok;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"torsional rigidity lab for multiply connected planar domains", "torsionlab"};
  app.set_help_flag("--help", "print this help");  // -h would clash with --h
  app.require_subcommand(1);
  RunConfig c;
  double corrupt = 0;

  auto domain_opts = [&](CLI::App* s) {
    s->add_option("--domain", c.domain_file, "domain JSON file");
    s->add_option("--family", c.family, "offset_hole_annulus | elliptic_outer | square_with_square_hole | multi_hole");
    s->add_option("--params", c.params, "family parameters");
  };
  auto solver_opts = [&](CLI::App* s) {
    s->add_option("--h", c.h, "mesh size")->capture_default_str();
    s->add_option("--cg-tol", c.cg_tol, "relative CG residual")->capture_default_str();
    s->add_option("--out", c.out_dir, "output directory");
  };
  auto bound_opts = [&](CLI::App* s) {
    s->add_option("--asym-tol", c.asym_tol, "asymmetry tolerance")->capture_default_str();
    s->add_option("--alpha", c.exponents.alpha, "I-set exponent")->capture_default_str();
    s->add_option("--beta", c.exponents.beta, "t_{eps,beta} exponent")->capture_default_str();
    s->add_option("--q", c.exponents.q, "gradient threshold exponent")->capture_default_str();
    s->add_option("--r", c.exponents.r, "M evaluation exponent")->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "FEM torsion solve, JSON record");
  domain_opts(solve);
  solver_opts(solve);
  solve->add_flag("--plot", c.plot, "write solution.svg");

  auto* verify = app.add_subcommand("verify", "deficit report and bound checks");
  domain_opts(verify);
  solver_opts(verify);
  bound_opts(verify);
  auto* corrupt_opt = verify->add_option("--corrupt-T", corrupt, "replace T before checking (negative control)");
  corrupt_opt->group("");

  auto* sweep = app.add_subcommand("sweep", "family sweep to CSV with beta trend");
  domain_opts(sweep);
  solver_opts(sweep);
  bound_opts(sweep);
  sweep->add_option("--vary-index", c.vary_index, "index into --params that is varied")->required();
  sweep->add_option("--values", c.values, "values for the varied parameter")->required();
  sweep->add_option("--jobs", c.jobs, "parallel members")->capture_default_str();
  sweep->add_flag("--plot", c.plot, "write sweep.svg (log-log epsilon vs beta)");

  auto* radial = app.add_subcommand("radial", "radial profiles and the n >= 3 counterexample");
  radial->add_option("--n", c.n, "dimension")->capture_default_str();
  radial->add_option("--br", c.br, "|B_r|")->capture_default_str();
  radial->add_option("--bR", c.bR, "|B_R|")->capture_default_str();
  radial->add_option("--G", c.G, "|G|")->capture_default_str();
  radial->add_option("--samples", c.samples, "grid intervals")->capture_default_str();
  radial->add_option("--out", c.out_dir, "output directory");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }
  if (corrupt_opt->count() > 0) c.corrupt_T = corrupt;

  try {
    c.validate();
    if (solve->parsed()) return cmd_solve(c, out, err);
    if (verify->parsed()) return cmd_verify(c, out, err);
    if (sweep->parsed()) return cmd_sweep(c, out, err);
    return cmd_radial(c, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  }
}

}  // namespace torsionlab::cli
