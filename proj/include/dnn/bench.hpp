// SPDX-License-Identifier: Apache-2.0
#pragma once

// Stability-number oracle, suite runner and performance profiles.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dnn/admm.hpp"
#include "dnn/bounds.hpp"

namespace dnn {

inline constexpr int kAlphaMaxVertices = 30;

namespace detail {

inline void alpha_search(const std::vector<std::uint32_t>& adj, std::uint32_t cand, int size, int& best) {
  if (cand == 0) {
    best = std::max(best, size);
    return;
  }
  if (size + std::popcount(cand) <= best) return;
  const int v = std::countr_zero(cand);
  alpha_search(adj, cand & ~adj[v] & ~(1u << v), size + 1, best);
  alpha_search(adj, cand & ~(1u << v), size, best);
}

}  // namespace detail

/// Exact α(G) by branch and bound on vertex bitmasks.
inline int alpha_bruteforce(const Graph& g) {
  const int n = g.num_vertices();
  if (n > kAlphaMaxVertices) throw InputError("alpha_bruteforce: at most 30 vertices");
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : g.edges()) {
    adj[i] |= 1u << j;
    adj[j] |= 1u << i;
  }
  const std::uint32_t all = (std::uint32_t{1} << n) - 1u;
  int best = 0;
  detail::alpha_search(adj, all, 0, best);
  return best;
}

// ---------------------------------------------------------------------------
// Performance profiles

/// times[p][s]; nullopt marks a run that exceeded its budget.
struct ProfileInput {
  std::vector<std::string> solvers;
  std::vector<std::string> problems;
  std::vector<std::vector<std::optional<double>>> times;
};

struct ProfileCurve {
  std::string solver;
  std::vector<std::pair<double, double>> steps;  // (τ, ρ(τ)) at every breakpoint
};

/// r_{p,s} = t_{p,s} / min_s' t_{p,s'}, ρ_s(τ) = |{p : r_{p,s} <= τ}| / |P|.
/// Rows containing a budget marker are dropped unless include_timeouts is
/// set, in which case those entries get r = ∞.
inline std::vector<ProfileCurve> performance_profiles(const ProfileInput& in, bool include_timeouts = false) {
  const std::size_t ns = in.solvers.size();
  if (ns == 0 || in.times.empty()) throw InputError("performance_profiles: need at least one solver and problem");
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> ratios;
  for (const auto& row : in.times) {
    if (row.size() != ns) throw InputError("performance_profiles: ragged time matrix");
    bool any_marker = false;
    double best = inf;
    for (const auto& t : row) {
      if (!t) {
        any_marker = true;
        continue;
      }
      if (!(*t >= 0.0) || !std::isfinite(*t)) throw InputError("performance_profiles: times must be finite and >= 0");
      best = std::min(best, *t);
    }
    if (any_marker && !include_timeouts) continue;
    if (best == inf) continue;
    std::vector<double> r(ns, inf);
    for (std::size_t s = 0; s < ns; ++s) {
      if (!row[s]) continue;
      const double t = *row[s];
      r[s] = best > 0.0 ? t / best : (t == 0.0 ? 1.0 : inf);
    }
    ratios.push_back(std::move(r));
  }
  if (ratios.empty()) throw EmptyProfileError("performance_profiles: every problem was excluded");

  std::vector<double> taus;
  for (const auto& r : ratios)
    for (double v : r)
      if (std::isfinite(v)) taus.push_back(v);
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

  const double np = static_cast<double>(ratios.size());
  std::vector<ProfileCurve> curves(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    curves[s].solver = in.solvers[s];
    for (double tau : taus) {
      const auto hit = std::count_if(ratios.begin(), ratios.end(), [&](const auto& r) { return r[s] <= tau; });
      curves[s].steps.emplace_back(tau, static_cast<double>(hit) / np);
    }
  }
  return curves;
}

// ---------------------------------------------------------------------------
// Suite runner

/// A named stable-set instance; the graph is used as given.
struct SuiteInstance {
  std::string name;
  Graph graph;
};

/// One (instance, solver) row. Values use the θ⁺ reporting sign, so
/// theta, eb and nb are upper bounds on α(G).
struct SuiteRow {
  std::string instance;
  Method solver = Method::adal_plus;
  int n = 0;
  std::size_t m = 0;
  std::optional<double> theta;
  std::optional<double> eb;
  std::optional<double> nb;
  std::string nb_status;  // "ok" or a failure name
  std::size_t iterations = 0;
  double elapsed_s = 0.0;
  std::string status;     // solve status, or "error"
  std::string error;
};

struct SuiteConfig {
  SolverConfig solver;
  int jobs = 1;
};

inline SuiteRow run_suite_row(const SuiteInstance& inst, Method method, const SolverConfig& cfg) {
  SuiteRow row;
  row.instance = inst.name;
  row.solver = method;
  row.n = inst.graph.num_vertices();
  row.m = inst.graph.num_edges() + 1;
  try {
    const DnnProblem p = build_theta_plus(inst.graph);
    SolverConfig c = cfg;
    c.trace = false;
    c.observer = nullptr;
    const SolveReport rep = solve(p, method, c);
    row.theta = -rep.dual_ofv;
    row.iterations = rep.iterations;
    row.elapsed_s = rep.elapsed_s;
    row.status = std::string(status_name(rep.status));
    row.eb = -*error_bound(p, rep.state.y, rep.state.S, 1.0).value;
    const BoundResult nb = nightjet_theta_plus(p, rep.state.Z);
    if (nb.ok()) {
      row.nb = -*nb.value;
      row.nb_status = "ok";
    } else {
      row.nb_status = std::string(failure_name(*nb.failure));
    }
  } catch (const std::exception& e) {
    row.status = "error";
    row.error = e.what();
  }
  return row;
}

/// Rows ordered by (instance, solver) in input order, whatever the job count.
inline std::vector<SuiteRow> run_suite(const std::vector<SuiteInstance>& instances,
                                       const std::vector<Method>& solvers, const SuiteConfig& cfg) {
  const std::size_t total = instances.size() * solvers.size();
  std::vector<SuiteRow> rows(total);
  if (total == 0) return rows;
  cfg.solver.validate();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      rows[k] = run_suite_row(instances[k / solvers.size()], solvers[k % solvers.size()], cfg.solver);
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(cfg.jobs, 1)), 1, total);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

/// Builds a profile input from suite rows; a row counts as a budget marker
/// unless it converged.
inline ProfileInput profile_input_from_rows(const std::vector<SuiteRow>& rows, bool use_iterations) {
  ProfileInput in;
  std::map<std::string, std::size_t> pidx;
  std::map<Method, std::size_t> sidx;
  for (const auto& r : rows) {
    if (!pidx.count(r.instance)) {
      pidx[r.instance] = in.problems.size();
      in.problems.push_back(r.instance);
    }
    if (!sidx.count(r.solver)) {
      sidx[r.solver] = in.solvers.size();
      in.solvers.emplace_back(method_name(r.solver));
    }
  }
  in.times.assign(in.problems.size(), std::vector<std::optional<double>>(in.solvers.size()));
  for (const auto& r : rows) {
    if (r.status != "converged") continue;
    in.times[pidx[r.instance]][sidx[r.solver]] =
        use_iterations ? static_cast<double>(r.iterations) : r.elapsed_s;
  }
  return in;
}

}  // namespace dnn
