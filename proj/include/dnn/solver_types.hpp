// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dnn/linalg.hpp"

namespace dnn {

enum class Method { adal_plus, dadal_plus, conic3c, dadmm3c };

inline constexpr Method kAllMethods[] = {Method::adal_plus, Method::dadal_plus, Method::conic3c,
                                         Method::dadmm3c};

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::adal_plus: return "adal+";
    case Method::dadal_plus: return "dadal+";
    case Method::conic3c: return "conic3c";
    case Method::dadmm3c: return "dadmm3c";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : kAllMethods)
    if (method_name(m) == s) return m;
  return std::nullopt;
}

/// Methods that keep Z = VVᵀ and update (y, V) by ascent.
inline bool is_factorized(Method m) { return m == Method::dadal_plus || m == Method::dadmm3c; }

/// Methods whose stopping test also covers r_PD and r_CZ.
inline bool uses_six_term_delta(Method m) { return m == Method::conic3c || m == Method::dadmm3c; }

enum class Direction { gradient, scaled_gradient };
enum class LineSearch { grid, quartic };

struct Residuals;
struct SolverState;

struct SolverConfig {
  double epsilon = 1e-5;
  double time_limit_s = 3600.0;
  std::size_t max_iter = std::numeric_limits<std::size_t>::max();
  int inner_iters = 2;
  Direction direction = Direction::scaled_gradient;
  LineSearch line_search = LineSearch::grid;
  double sigma_floor = 1e-6;
  double sigma_cap = 1e6;
  double rank_tol = kDefaultRankTol;
  bool trace = false;
  /// Called once per iteration after the residuals are known and before
  /// sigma is updated.
  std::function<void(const SolverState&, const Residuals&)> observer;

  void validate() const {
    if (!(epsilon > 0.0)) throw InputError("SolverConfig: epsilon must be positive");
    if (inner_iters < 1) throw InputError("SolverConfig: inner_iters must be at least 1");
    if (!(sigma_floor > 0.0) || !(sigma_floor < sigma_cap)) {
      throw InputError("SolverConfig: need 0 < sigma_floor < sigma_cap");
    }
    if (!(time_limit_s >= 0.0)) throw InputError("SolverConfig: negative time limit");
    if (!(rank_tol > 0.0)) throw InputError("SolverConfig: rank_tol must be positive");
  }
};

struct SolverState {
  SymMatrix X;
  VectorXd y;
  SymMatrix S;
  SymMatrix Z;
  std::optional<Factor> V;
  double sigma = 1.0;
  std::size_t iter = 0;
  double elapsed_s = 0.0;
};

/// Scaled optimality errors. r_PD and r_CZ are only tracked by the methods
/// that do not keep X PSD and ZX = 0 by construction.
struct Residuals {
  double r_p = 0.0;
  double r_d = 0.0;
  double r_pp = 0.0;
  double r_cs = 0.0;
  std::optional<double> r_pd;
  std::optional<double> r_cz;
  double delta = 0.0;
};

enum class SolveStatus { converged, time_limit, iter_limit };

inline std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::iter_limit: return "iter_limit";
  }
  return "?";
}

struct TraceRow {
  std::size_t iter;
  double dual_ofv;
  Residuals residuals;
  double sigma;
};

struct SolveReport {
  Method method;
  SolverState state;
  double dual_ofv = 0.0;
  Residuals residuals;
  std::size_t iterations = 0;
  double elapsed_s = 0.0;
  SolveStatus status = SolveStatus::iter_limit;
  std::vector<TraceRow> trace;
  /// Spectral work done inside the iteration loop (initial residuals excluded).
  SpectralCounters loop_spectral;
};

}  // namespace dnn
