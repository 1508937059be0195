// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>

#include "dnn/problem.hpp"
#include "dnn/solver_types.hpp"

namespace dnn {

/// ‖(−X)+‖ from the spectrum of X; no eigenvectors are formed.
inline double psd_violation_norm(const SymMatrix& x) {
  const VectorXd lam = eigenvalues_sym(x);
  return lam.cwiseMin(0.0).norm();
}

inline Residuals compute_residuals(const DnnProblem& p, const SolverState& st, Method method) {
  const SymMatrix& x = st.X;
  if (x.dim() != p.n() || st.S.dim() != p.n() || st.Z.dim() != p.n() || st.y.size() != p.m()) {
    throw InputError("residuals: state does not match problem");
  }
  Residuals r;
  const double norm_x = x.norm();
  const double norm_s = st.S.norm();
  const double norm_z = st.Z.norm();

  r.r_p = (p.apply_A(x) - p.b()).norm() / (1.0 + p.b().norm());
  SymMatrix dual = p.apply_At(st.y) + st.Z + st.S - p.C();
  r.r_d = dual.norm() / (1.0 + p.C().norm());
  r.r_pp = x.dense().cwiseMin(0.0).norm() / (1.0 + norm_x);
  r.r_cs = std::abs(inner(st.S, x)) / (1.0 + norm_x + norm_s);
  r.delta = std::max({r.r_p, r.r_d, r.r_pp, r.r_cs});

  if (uses_six_term_delta(method)) {
    r.r_pd = psd_violation_norm(x) / (1.0 + norm_x);
    r.r_cz = std::abs(inner(st.Z, x)) / (1.0 + norm_x + norm_z);
    r.delta = std::max({r.delta, *r.r_pd, *r.r_cz});
  }
  return r;
}

/// σ = ‖X‖/‖Z‖ clamped to [sigma_floor, sigma_cap]; Z = 0 gives sigma_cap.
inline double update_sigma(const SolverState& st, const SolverConfig& cfg) {
  const double nz = st.Z.norm();
  if (nz == 0.0) return cfg.sigma_cap;
  return std::clamp(st.X.norm() / nz, cfg.sigma_floor, cfg.sigma_cap);
}

}  // namespace dnn
