// SPDX-License-Identifier: Apache-2.0
#pragma once

// Certified lower bounds on min <C,X> from approximate dual points.
//
//   error_bound         keeps (y, S), charges the negative spectrum of
//                       C − Aᵀy − S against an upper bound x̄ on λmax(X*).
//   nightjet_generic    keeps Z̆ = (Z)+ and recovers (y, S) from the LP
//                       max{bᵀy : Aᵀy <= C − Z̆}, solved by a caller delegate.
//   nightjet_theta_plus the same LP in closed form for theta-plus problems.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "dnn/problem.hpp"

namespace dnn {

enum class BoundKind { error_bound, nightjet };

enum class BoundFailure { nightjet_infeasible, lp_unbounded, lp_delegate_missing };

inline std::string_view bound_kind_name(BoundKind k) {
  return k == BoundKind::error_bound ? "error-bound" : "nightjet";
}

inline std::string_view failure_name(BoundFailure f) {
  switch (f) {
    case BoundFailure::nightjet_infeasible: return "nightjet-infeasible";
    case BoundFailure::lp_unbounded: return "lp-unbounded";
    case BoundFailure::lp_delegate_missing: return "lp-delegate-missing";
  }
  return "?";
}

inline constexpr std::string_view kNoBoundMessage = "No dual feasible solution and no bound found";

struct DualTriple {
  VectorXd y;
  SymMatrix S;
  SymMatrix Z;
};

struct BoundResult {
  BoundKind kind = BoundKind::error_bound;
  std::optional<double> value;  // lower bound on min <C,X>
  std::optional<DualTriple> feasible_triple;
  std::optional<BoundFailure> failure;

  bool ok() const noexcept { return value.has_value(); }

  static BoundResult failed(BoundKind kind, BoundFailure why) {
    BoundResult r;
    r.kind = kind;
    r.failure = why;
    return r;
  }
};

struct DualFeasibility {
  double equality = 0.0;  // ‖Aᵀy + Z + S − C‖∞
  double psd = 0.0;       // max(−λmin(Z), 0)
  double nonneg = 0.0;    // max(−min S, 0)
  double max_violation = 0.0;
  bool pass = false;
};

inline DualFeasibility check_dual_feasible(const DnnProblem& p, const VectorXd& y, const SymMatrix& s,
                                           const SymMatrix& z, double tol) {
  if (s.dim() != p.n() || z.dim() != p.n() || y.size() != p.m()) {
    throw InputError("check_dual_feasible: dimension mismatch");
  }
  DualFeasibility f;
  f.equality = (p.apply_At(y) + z + s - p.C()).dense().cwiseAbs().maxCoeff();
  f.psd = std::max(-eigenvalues_sym(z)(0), 0.0);
  f.nonneg = std::max(-s.min_entry(), 0.0);
  f.max_violation = std::max({f.equality, f.psd, f.nonneg});
  f.pass = f.max_violation <= tol;
  return f;
}

/// EB = bᵀy + x̄·Σ_{λ<0} λ(C − Aᵀy − S). Valid whenever S >= 0 and
/// x̄ >= λmax(X*); for theta-plus x̄ = 1 since trace(X) = 1.
inline BoundResult error_bound(const DnnProblem& p, const VectorXd& y, const SymMatrix& s, double xbar) {
  if (s.dim() != p.n() || y.size() != p.m()) throw InputError("error_bound: dimension mismatch");
  if (s.min_entry() < 0.0) throw InputError("error_bound: S must be entrywise nonnegative");
  if (!(xbar >= 0.0)) throw InputError("error_bound: xbar must be nonnegative");
  const VectorXd lam = eigenvalues_sym(p.C() - p.apply_At(y) - s);
  BoundResult r;
  r.kind = BoundKind::error_bound;
  r.value = p.b().dot(y) + xbar * lam.cwiseMin(0.0).sum();
  return r;
}

// ---------------------------------------------------------------------------
// LP delegate contract for the generic Nightjet procedure.

/// maximize objectiveᵀy  s.t.  for every 0 <= i <= j < n:
///   Σ_{terms t with (t.row_i, t.row_j) = (i,j)} t.coef · y[t.var] <= rhs(i,j)
/// Rows without terms still carry the constraint 0 <= rhs(i,j).
struct LpRequest {
  struct Term {
    int row_i;
    int row_j;
    int var;
    double coef;
  };
  VectorXd objective;
  std::vector<Term> terms;
  SymMatrix rhs;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  VectorXd y;  // set when optimal
};

using LpDelegate = std::function<LpOutcome(const LpRequest&)>;

inline constexpr double kSlackClampTol = 1e-9;

namespace detail {

/// Clamps roundoff-level negatives of S to 0; anything below −tol means the
/// (y, Z) pair violates the LP and is reported to the caller.
inline bool clamp_slack(SymMatrix& s) {
  if (s.min_entry() < -kSlackClampTol) return false;
  s = project_nonneg(s);
  return true;
}

}  // namespace detail

inline BoundResult nightjet_generic(const DnnProblem& p, const SymMatrix& z, const LpDelegate& lp) {
  if (!lp) return BoundResult::failed(BoundKind::nightjet, BoundFailure::lp_delegate_missing);
  if (z.dim() != p.n()) throw InputError("nightjet_generic: dimension mismatch");

  SymMatrix zc = project_psd_split(z).plus;
  LpRequest req;
  req.objective = p.b();
  for (Index k = 0; k < p.m(); ++k)
    for (const auto& e : p.constraints()[k].entries)
      req.terms.push_back({e.i, e.j, static_cast<int>(k), e.value});
  req.rhs = p.C() - zc;

  LpOutcome out = lp(req);
  if (out.status == LpStatus::infeasible) {
    return BoundResult::failed(BoundKind::nightjet, BoundFailure::nightjet_infeasible);
  }
  if (out.status == LpStatus::unbounded) {
    return BoundResult::failed(BoundKind::nightjet, BoundFailure::lp_unbounded);
  }
  if (out.y.size() != p.m()) throw InputError("nightjet_generic: LP delegate returned wrong length");

  SymMatrix s = p.C() - zc - p.apply_At(out.y);
  if (!detail::clamp_slack(s)) {
    throw InputError("nightjet_generic: LP delegate returned a point violating Aᵀy <= C − Z");
  }
  BoundResult r;
  r.kind = BoundKind::nightjet;
  r.value = p.b().dot(out.y);
  r.feasible_triple = DualTriple{std::move(out.y), std::move(s), std::move(zc)};
  return r;
}

/// Largest entry of Z over the non-edges {i,j}, i != j; −∞ for complete graphs.
inline double max_nonedge_entry(const Graph& g, const SymMatrix& z) {
  double m = -std::numeric_limits<double>::infinity();
  const int n = g.num_vertices();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.has_edge(i, j)) m = std::max(m, z(i, j));
  return m;
}

inline BoundResult nightjet_theta_plus(const DnnProblem& p, const SymMatrix& z) {
  if (p.kind() != ProblemKind::theta_plus || p.graph() == nullptr) {
    throw InputError("nightjet_theta_plus: not a theta-plus problem");
  }
  if (z.dim() != p.n()) throw InputError("nightjet_theta_plus: dimension mismatch");
  const Graph& g = *p.graph();

  SymMatrix zc = project_psd_split(z).plus;
  const double m = max_nonedge_entry(g, zc);
  if (m >= 0.0) return BoundResult::failed(BoundKind::nightjet, BoundFailure::nightjet_infeasible);
  if (m > -1.0) zc *= -1.0 / m;

  VectorXd y(p.m());
  y(0) = (-1.0 - zc.dense().diagonal().array()).minCoeff();
  Index k = 1;
  for (const auto& [i, j] : g.edges()) y(k++) = 2.0 * (-1.0 - zc(i, j));

  SymMatrix s = p.C() - zc - p.apply_At(y);
  if (!detail::clamp_slack(s)) {
    throw std::logic_error("nightjet_theta_plus: closed-form slack is negative");
  }
  BoundResult r;
  r.kind = BoundKind::nightjet;
  r.value = p.b().dot(y);
  r.feasible_triple = DualTriple{std::move(y), std::move(s), std::move(zc)};
  return r;
}

}  // namespace dnn
