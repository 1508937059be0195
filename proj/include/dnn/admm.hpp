// SPDX-License-Identifier: Apache-2.0
#pragma once

// ADAL+, ConicADMM3c and their dual-factorized variants DADAL+ and DADMM3c
// for  max bᵀy  s.t.  Aᵀy + Z + S = C,  Z PSD,  S >= 0.

#include <chrono>
#include <optional>
#include <utility>

#include "dnn/factorized.hpp"
#include "dnn/residuals.hpp"

namespace dnn {

/// X = I/n, Z = I, S = 0, y = 0, σ = 1; factorized methods also get V = I.
inline SolverState initial_state(const DnnProblem& p, Method method) {
  const Index n = p.n();
  SolverState st;
  st.X = SymMatrix::identity(n) / static_cast<double>(n);
  st.y = VectorXd::Zero(p.m());
  st.S = SymMatrix(n);
  st.Z = SymMatrix::identity(n);
  if (is_factorized(method)) st.V = Factor{MatrixXd::Identity(n, n)};
  st.sigma = 1.0;
  return st;
}

namespace detail {

inline void check_state(const DnnProblem& p, const SolverState& st, Method method) {
  const Index n = p.n();
  if (st.X.dim() != n || st.S.dim() != n || st.Z.dim() != n || st.y.size() != p.m()) {
    throw InputError("solver: initial state does not match problem");
  }
  if (!(st.sigma > 0.0)) throw InputError("solver: sigma must be positive");
  if (is_factorized(method)) {
    if (!st.V || st.V->dim() != n || st.V->rank() < 1 || st.V->rank() > n) {
      throw InputError("solver: factorized method needs an n×r factor with 1 <= r <= n");
    }
  }
}

/// Shared outer loop: stopping test, budgets, trace, observer, σ rule.
template <class Step>
SolveReport run_admm(const DnnProblem& p, const SolverConfig& cfg, SolverState st, Method method,
                     Step&& step) {
  cfg.validate();
  check_state(p, st, method);
  st.sigma = std::clamp(st.sigma, cfg.sigma_floor, cfg.sigma_cap);
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  SolveReport rep;
  rep.method = method;
  Residuals res = compute_residuals(p, st, method);
  const SpectralCounters before = spectral_counters();
  SolveStatus status = SolveStatus::converged;
  while (res.delta > cfg.epsilon) {
    if (st.iter >= cfg.max_iter) {
      status = SolveStatus::iter_limit;
      break;
    }
    if (elapsed() >= cfg.time_limit_s) {
      status = SolveStatus::time_limit;
      break;
    }
    step(st);
    ++st.iter;
    res = compute_residuals(p, st, method);
    st.elapsed_s = elapsed();
    if (cfg.trace) rep.trace.push_back({st.iter, p.b().dot(st.y), res, st.sigma});
    if (cfg.observer) cfg.observer(st, res);
    st.sigma = update_sigma(st, cfg);
  }
  const SpectralCounters after = spectral_counters();
  rep.loop_spectral.decompositions = after.decompositions - before.decompositions;
  rep.loop_spectral.eigenvalue_only = after.eigenvalue_only - before.eigenvalue_only;

  st.elapsed_s = elapsed();
  rep.dual_ofv = p.b().dot(st.y);
  rep.residuals = res;
  rep.iterations = st.iter;
  rep.elapsed_s = st.elapsed_s;
  rep.status = status;
  rep.state = std::move(st);
  return rep;
}

/// Z = −(W)−, X = σ(W)+ from one decomposition of W = X/σ − C + Aᵀy + S.
/// Returns the decomposition so callers can reuse it.
inline EigenDecomposition joint_zx_update(const DnnProblem& p, SolverState& st,
                                          const SymMatrix& aty) {
  const SymMatrix w = st.X / st.sigma - p.C() + aty + st.S;
  EigenDecomposition eig = eig_sym(w);
  PsdSplit split = project_psd_split(w, eig);
  st.Z = -std::move(split.minus);
  st.X = st.sigma * std::move(split.plus);
  return eig;
}

inline void s_update(const DnnProblem& p, SolverState& st, const SymMatrix& aty) {
  st.S = project_nonneg(p.C() - aty - st.Z - st.X / st.sigma);
}

}  // namespace detail

inline SolveReport solve_adal_plus(const DnnProblem& p, const SolverConfig& cfg,
                                   std::optional<SolverState> init = std::nullopt) {
  SolverState st = init ? std::move(*init) : initial_state(p, Method::adal_plus);
  return detail::run_admm(p, cfg, std::move(st), Method::adal_plus, [&](SolverState& s) {
    s.y = y_closed_form(p, s.X, s.S, s.Z, s.sigma);
    const SymMatrix aty = p.apply_At(s.y);
    detail::s_update(p, s, aty);
    detail::joint_zx_update(p, s, aty);
  });
}

inline SolveReport solve_conic3c(const DnnProblem& p, const SolverConfig& cfg,
                                 std::optional<SolverState> init = std::nullopt) {
  SolverState st = init ? std::move(*init) : initial_state(p, Method::conic3c);
  return detail::run_admm(p, cfg, std::move(st), Method::conic3c, [&](SolverState& s) {
    SymMatrix aty = p.apply_At(s.y);
    s.Z = -project_psd_split(s.X / s.sigma - p.C() + aty + s.S).minus;
    s.y = y_closed_form(p, s.X, s.S, s.Z, s.sigma);
    aty = p.apply_At(s.y);
    detail::s_update(p, s, aty);
    s.y = y_closed_form(p, s.X, s.S, s.Z, s.sigma);
    aty = p.apply_At(s.y);
    s.X += s.sigma * (aty + s.Z + s.S - p.C());
  });
}

inline SolveReport solve_dadal_plus(const DnnProblem& p, const SolverConfig& cfg,
                                    std::optional<SolverState> init = std::nullopt) {
  SolverState st = init ? std::move(*init) : initial_state(p, Method::dadal_plus);
  return detail::run_admm(p, cfg, std::move(st), Method::dadal_plus, [&](SolverState& s) {
    inner_yv_update(p, s, cfg);
    s.Z = s.V->product();
    SymMatrix aty = p.apply_At(s.y);
    detail::s_update(p, s, aty);
    s.y = y_closed_form(p, s.X, s.S, s.Z, s.sigma);
    aty = p.apply_At(s.y);
    const EigenDecomposition w = detail::joint_zx_update(p, s, aty);
    // Z = −(W)− shares W's eigenvectors; its spectrum is max(−λ(W), 0) in
    // reversed order.
    const VectorXd mu = (-w.values).reverse().cwiseMax(0.0);
    const MatrixXd q = w.vectors.rowwise().reverse();
    s.V = factor_from_spectrum(mu, q, cfg.rank_tol);
  });
}

inline SolveReport solve_dadmm3c(const DnnProblem& p, const SolverConfig& cfg,
                                 std::optional<SolverState> init = std::nullopt) {
  SolverState st = init ? std::move(*init) : initial_state(p, Method::dadmm3c);
  return detail::run_admm(p, cfg, std::move(st), Method::dadmm3c, [&](SolverState& s) {
    inner_yv_update(p, s, cfg);
    s.Z = s.V->product();
    SymMatrix aty = p.apply_At(s.y);
    detail::s_update(p, s, aty);
    s.y = y_closed_form(p, s.X, s.S, s.Z, s.sigma);
    aty = p.apply_At(s.y);
    s.X += s.sigma * (s.Z + s.S + aty - p.C());
  });
}

inline SolveReport solve(const DnnProblem& p, Method method, const SolverConfig& cfg,
                         std::optional<SolverState> init = std::nullopt) {
  switch (method) {
    case Method::adal_plus: return solve_adal_plus(p, cfg, std::move(init));
    case Method::dadal_plus: return solve_dadal_plus(p, cfg, std::move(init));
    case Method::conic3c: return solve_conic3c(p, cfg, std::move(init));
    case Method::dadmm3c: return solve_dadmm3c(p, cfg, std::move(init));
  }
  throw InputError("solve: unknown method");
}

}  // namespace dnn
