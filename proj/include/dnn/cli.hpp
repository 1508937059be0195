// SPDX-License-Identifier: Apache-2.0
#pragma once

// Command-line front end: solve | bound | bench | profile.
// Exit codes: 0 ok, 1 usage, 2 parse or IO error, 3 budget exceeded (solve --strict).

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnn/report_io.hpp"

namespace dnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitBudget = 3;

inline constexpr std::string_view kAlphaLabel = "upper bound on α(G)";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSpec {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::vector<std::string> solvers;
  double eps = 1e-5;
  double time_limit = 3600.0;
  long long max_iter = -1;
  int inner_iters = 2;
  std::string direction = "scaled";
  std::string line_search = "grid";
  std::string trace_path;
  bool no_complement = false;
  std::string out_path;
  std::string format = "csv";
  int jobs = 1;
  std::string measure = "time";
  bool strict = false;
  bool include_timeouts = false;

  SolverConfig solver_config() const {
    SolverConfig c;
    c.epsilon = eps;
    c.time_limit_s = time_limit;
    if (max_iter >= 0) c.max_iter = static_cast<std::size_t>(max_iter);
    c.inner_iters = inner_iters;
    c.direction = direction == "grad" ? Direction::gradient : Direction::scaled_gradient;
    c.line_search = line_search == "quartic" ? LineSearch::quartic : LineSearch::grid;
    c.validate();
    return c;
  }

  std::vector<Method> methods() const {
    std::vector<Method> out;
    for (const auto& s : solvers) {
      const auto m = parse_method(s);
      if (!m) throw InputError("unknown solver '" + s + "'");
      if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
    }
    if (out.empty()) out.assign(std::begin(kAllMethods), std::end(kAllMethods));
    return out;
  }
};

namespace detail {

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline SuiteInstance load_instance(const std::string& path, bool complement_graph) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  Graph g = parse_dimacs(f);
  if (complement_graph) g = complement(g);
  return {std::filesystem::path(path).stem().string(), std::move(g)};
}

/// Expands directories into their DIMACS files, sorted by name.
inline std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const auto& in : inputs) {
    std::error_code ec;
    if (std::filesystem::is_directory(in, ec)) {
      std::vector<std::string> found;
      for (const auto& e : std::filesystem::directory_iterator(in)) {
        const auto ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".clq" || ext == ".col" || ext == ".dimacs")) {
          found.push_back(e.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (std::filesystem::exists(in, ec)) {
      out.push_back(in);
    } else {
      throw IoError("no such file or directory '" + in + "'");
    }
  }
  return out;
}

template <class Writer>
void write_output(const std::string& path, std::ostream& fallback, Writer&& w) {
  if (path.empty() || path == "-") {
    w(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path + "'");
  w(f);
  if (!f) throw IoError("write failed for '" + path + "'");
}

inline void print_residuals(std::ostream& out, const Residuals& r) {
  out << "residuals: r_P=" << sci(r.r_p) << " r_D=" << sci(r.r_d) << " r_PP=" << sci(r.r_pp)
      << " r_CS=" << sci(r.r_cs);
  if (r.r_pd) out << " r_PD=" << sci(*r.r_pd);
  if (r.r_cz) out << " r_CZ=" << sci(*r.r_cz);
  out << " delta=" << sci(r.delta) << '\n';
}

inline void print_solve(std::ostream& out, const SuiteInstance& inst, const DnnProblem& p,
                        const SolveReport& rep) {
  out << "instance: " << inst.name << " (n=" << p.n() << ", m=" << p.m() << ")\n";
  out << "solver: " << method_name(rep.method) << '\n';
  out << "theta+ estimate (-dual_ofv): " << fixed(-rep.dual_ofv) << '\n';
  print_residuals(out, rep.residuals);
  out << "iterations: " << rep.iterations << '\n';
  out << "time: " << fixed(rep.elapsed_s, 3) << " s\n";
  out << "status: " << status_name(rep.status) << '\n';
}

inline SuiteRow row_from(const SuiteInstance& inst, const DnnProblem& p, const SolveReport& rep) {
  SuiteRow r;
  r.instance = inst.name;
  r.solver = rep.method;
  r.n = static_cast<int>(p.n());
  r.m = static_cast<std::size_t>(p.m());
  r.theta = -rep.dual_ofv;
  r.iterations = rep.iterations;
  r.elapsed_s = rep.elapsed_s;
  r.status = std::string(status_name(rep.status));
  return r;
}

inline int cmd_solve(const RunSpec& spec, std::ostream& out, bool with_bounds) {
  if (spec.inputs.size() != 1) throw InputError("expected exactly one instance file");
  const auto methods = spec.methods();
  if (methods.size() != 1) throw InputError("expected exactly one --solver");
  SolverConfig cfg = spec.solver_config();
  cfg.trace = !spec.trace_path.empty() || spec.format == "json";

  const SuiteInstance inst = load_instance(spec.inputs[0], !spec.no_complement);
  const DnnProblem p = build_theta_plus(inst.graph);
  const SolveReport rep = solve(p, methods[0], cfg);
  print_solve(out, inst, p, rep);

  SuiteRow row = row_from(inst, p, rep);
  std::optional<BoundResult> eb, nb;
  if (with_bounds) {
    eb = error_bound(p, rep.state.y, rep.state.S, 1.0);
    nb = nightjet_theta_plus(p, rep.state.Z);
    row.eb = -*eb->value;
    out << "EB: " << fixed(*row.eb) << " (" << kAlphaLabel << ")\n";
    if (nb->ok()) {
      row.nb = -*nb->value;
      row.nb_status = "ok";
      out << "NB: " << fixed(*row.nb) << " (" << kAlphaLabel << ")\n";
    } else {
      row.nb_status = std::string(failure_name(*nb->failure));
      out << "NB: " << kNoBoundMessage << '\n';
    }
  }

  if (!spec.trace_path.empty()) {
    write_output(spec.trace_path, out, [&](std::ostream& o) { io::write_trace_csv(o, rep.trace); });
  }
  if (!spec.out_path.empty()) {
    write_output(spec.out_path, out, [&](std::ostream& o) {
      if (spec.format == "json") {
        io::json j{{"instance", inst.name}, {"n", p.n()}, {"m", p.m()}, {"report", io::to_json(rep, true)}};
        if (eb) j["error_bound"] = io::to_json(*eb);
        if (nb) j["nightjet"] = io::to_json(*nb);
        o << j.dump(2) << '\n';
      } else {
        io::write_results_csv(o, {row});
      }
    });
  }
  if (spec.strict && rep.status != SolveStatus::converged) return kExitBudget;
  return kExitOk;
}

inline int cmd_bench(const RunSpec& spec, std::ostream& out) {
  if (spec.inputs.empty()) throw InputError("expected an instance directory or files");
  SuiteConfig cfg;
  cfg.solver = spec.solver_config();
  cfg.jobs = spec.jobs;
  const auto methods = spec.methods();
  std::vector<SuiteInstance> instances;
  for (const auto& path : expand_inputs(spec.inputs)) instances.push_back(load_instance(path, !spec.no_complement));
  const auto rows = run_suite(instances, methods, cfg);
  write_output(spec.out_path, out, [&](std::ostream& o) {
    if (spec.format == "json") {
      io::json j = io::json::array();
      for (const auto& r : rows) j.push_back(io::to_json(r));
      o << j.dump(2) << '\n';
    } else {
      io::write_results_csv(o, rows);
    }
  });
  return kExitOk;
}

inline int cmd_profile(const RunSpec& spec, std::ostream& out) {
  if (spec.inputs.size() != 1) throw InputError("expected exactly one results CSV");
  std::ifstream f(spec.inputs[0]);
  if (!f) throw IoError("cannot open '" + spec.inputs[0] + "'");
  const auto rows = io::read_results_csv(f);
  const auto curves =
      performance_profiles(profile_input_from_rows(rows, spec.measure == "iters"), spec.include_timeouts);
  write_output(spec.out_path, out, [&](std::ostream& o) {
    if (spec.format == "json") {
      o << io::to_json(curves).dump(2) << '\n';
    } else {
      io::write_profile_csv(o, curves);
    }
  });
  return kExitOk;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunSpec spec;
  CLI::App app{"Doubly nonnegative programming ADMM solvers and certified bounds for theta-plus"};
  app.require_subcommand(1);

  auto add_solver_flags = [&](CLI::App* sc, bool single_solver) {
    auto* opt = sc->add_option("--solver", spec.solvers, "adal+ | dadal+ | conic3c | dadmm3c")
                    ->check(CLI::IsMember({"adal+", "dadal+", "conic3c", "dadmm3c"}));
    if (single_solver) opt->expected(1);
    sc->add_option("--eps", spec.eps, "stopping tolerance on the residual maximum")->check(CLI::PositiveNumber);
    sc->add_option("--time-limit", spec.time_limit, "wall-clock budget in seconds")->check(CLI::NonNegativeNumber);
    sc->add_option("--max-iter", spec.max_iter, "iteration budget")->check(CLI::NonNegativeNumber);
    sc->add_option("--inner-iters", spec.inner_iters, "(y,V) ascent passes per iteration")->check(CLI::PositiveNumber);
    sc->add_option("--direction", spec.direction, "grad | scaled")->check(CLI::IsMember({"grad", "scaled"}));
    sc->add_option("--line-search", spec.line_search, "grid | quartic")->check(CLI::IsMember({"grid", "quartic"}));
    sc->add_flag("--no-complement", spec.no_complement, "use the graph as given instead of its complement");
    sc->add_option("--out", spec.out_path, "output path");
    sc->add_option("--format", spec.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* solve_cmd = app.add_subcommand("solve", "solve one instance with one solver");
  add_solver_flags(solve_cmd, true);
  solve_cmd->add_option("--trace", spec.trace_path, "per-iteration trace CSV");
  solve_cmd->add_flag("--strict", spec.strict, "exit 3 when the budget is exhausted");
  solve_cmd->add_option("instance", spec.inputs, "DIMACS file")->required();

  auto* bound_cmd = app.add_subcommand("bound", "solve, then report the error bound and the Nightjet bound");
  add_solver_flags(bound_cmd, true);
  bound_cmd->add_option("--trace", spec.trace_path, "per-iteration trace CSV");
  bound_cmd->add_option("instance", spec.inputs, "DIMACS file")->required();

  auto* bench_cmd = app.add_subcommand("bench", "run every instance against every selected solver");
  add_solver_flags(bench_cmd, false);
  bench_cmd->add_option("--jobs", spec.jobs, "worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("instances", spec.inputs, "directories or DIMACS files")->required();

  auto* profile_cmd = app.add_subcommand("profile", "performance profiles from a results CSV");
  profile_cmd->add_option("--measure", spec.measure, "time | iters")->check(CLI::IsMember({"time", "iters"}));
  profile_cmd->add_option("--out", spec.out_path, "output path");
  profile_cmd->add_option("--format", spec.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  profile_cmd->add_flag("--include-timeouts", spec.include_timeouts, "keep budget-exceeded rows at ratio infinity");
  profile_cmd->add_option("results", spec.inputs, "results CSV")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return detail::cmd_solve(spec, out, false);
    if (bound_cmd->parsed()) return detail::cmd_solve(spec, out, true);
    if (bench_cmd->parsed()) return detail::cmd_bench(spec, out);
    return detail::cmd_profile(spec, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const EmptyProfileError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace dnn::cli
