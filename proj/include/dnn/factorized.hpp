// SPDX-License-Identifier: Apache-2.0
#pragma once

// Augmented Lagrangian of the dual in the factorized form Z = VVᵀ and the
// (y, V) ascent step shared by the factorized ADMMs.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dnn/problem.hpp"
#include "dnn/solver_types.hpp"

namespace dnn {

/// Maximizer of L_σ over y for fixed (S, Z; X):
/// y = (AAᵀ)⁻¹(b/σ − A(X/σ + Z + S − C)).
inline VectorXd y_closed_form(const DnnProblem& p, const SymMatrix& x, const SymMatrix& s,
                              const SymMatrix& z, double sigma) {
  if (!(sigma > 0.0)) throw InputError("y_closed_form: sigma must be positive");
  const SymMatrix t = x / sigma + z + s - p.C();
  VectorXd y = p.solve_AAt(p.b() / sigma - p.apply_A(t));
  // One refinement step; large sigma amplifies roundoff in the first solve.
  const SymMatrix r = p.apply_At(y) + z + s - p.C();
  y += p.solve_AAt(p.b() - p.apply_A(x + sigma * r)) / sigma;
  return y;
}

/// ∇_y L_σ = b − A(X + σ(Aᵀy + Z + S − C)).
inline VectorXd grad_y(const DnnProblem& p, const VectorXd& y, const SymMatrix& s,
                       const SymMatrix& z, const SymMatrix& x, double sigma) {
  const SymMatrix r = p.apply_At(y) + z + s - p.C();
  return p.b() - p.apply_A(x + sigma * r);
}

/// L_σ(y,S,Z;X) = bᵀy − <R,X> − σ/2‖R‖², R = Aᵀy + Z + S − C.
inline double lagrangian_value(const DnnProblem& p, const VectorXd& y, const SymMatrix& s,
                               const SymMatrix& z, const SymMatrix& x, double sigma) {
  const SymMatrix r = p.apply_At(y) + z + s - p.C();
  const double nr = r.norm();
  return p.b().dot(y) - inner(r, x) - 0.5 * sigma * nr * nr;
}

inline double lagrangian_value(const DnnProblem& p, const VectorXd& y, const SymMatrix& s,
                               const MatrixXd& v, const SymMatrix& x, double sigma) {
  return lagrangian_value(p, y, s, gram(v), x, sigma);
}

/// ∇_V L_σ = −2(X + σ(Aᵀy + VVᵀ + S − C))V.
inline MatrixXd grad_V(const DnnProblem& p, const VectorXd& y, const SymMatrix& s,
                       const MatrixXd& v, const SymMatrix& x, double sigma) {
  const SymMatrix m = x + sigma * (p.apply_At(y) + gram(v) + s - p.C());
  return -2.0 * m.dense() * v;
}

/// Diagonal of the Hessian of L_σ with respect to V (y fixed):
/// H_kl = −2(M_kk + σ(‖v_l‖² + V_kl²)), M = X + σR.
inline MatrixXd hessian_diag_V(const DnnProblem& p, const VectorXd& y, const SymMatrix& s,
                               const MatrixXd& v, const SymMatrix& x, double sigma) {
  const SymMatrix m = x + sigma * (p.apply_At(y) + gram(v) + s - p.C());
  const VectorXd col_sq = v.colwise().squaredNorm().transpose();
  MatrixXd h(v.rows(), v.cols());
  for (Index l = 0; l < v.cols(); ++l)
    for (Index k = 0; k < v.rows(); ++k)
      h(k, l) = -2.0 * (m(k, k) + sigma * (col_sq(l) + v(k, l) * v(k, l)));
  return h;
}

/// φ(α) = L_σ(y(V+αD), S, V+αD; X) as an exact quartic in α. With
/// Z(α) = Z0 + αZ1 + α²Z2 the closed-form y is y0 + αy1 + α²y2, so every
/// term of L_σ expands into polynomial coefficients.
struct AscentQuartic {
  std::array<double, 5> coef{};  // coef[k] multiplies α^k

  double operator()(double a) const {
    return (((coef[4] * a + coef[3]) * a + coef[2]) * a + coef[1]) * a + coef[0];
  }
  double derivative(double a) const {
    return ((4.0 * coef[4] * a + 3.0 * coef[3]) * a + 2.0 * coef[2]) * a + coef[1];
  }
};

inline AscentQuartic ascent_quartic(const DnnProblem& p, const SymMatrix& s, const MatrixXd& v,
                                    const MatrixXd& d, const SymMatrix& x, double sigma) {
  const SymMatrix z0 = gram(v);
  const SymMatrix z1 = SymMatrix::from_dense(2.0 * (v * d.transpose()));  // VDᵀ + DVᵀ
  const SymMatrix z2 = gram(d);

  const VectorXd y0 = y_closed_form(p, x, s, z0, sigma);
  const VectorXd y1 = -p.solve_AAt(p.apply_A(z1));
  const VectorXd y2 = -p.solve_AAt(p.apply_A(z2));

  const SymMatrix r0 = p.apply_At(y0) + z0 + s - p.C();
  const SymMatrix r1 = p.apply_At(y1) + z1;
  const SymMatrix r2 = p.apply_At(y2) + z2;

  const VectorXd& b = p.b();
  AscentQuartic q;
  q.coef[0] = b.dot(y0) - inner(r0, x) - 0.5 * sigma * inner(r0, r0);
  q.coef[1] = b.dot(y1) - inner(r1, x) - sigma * inner(r0, r1);
  q.coef[2] = b.dot(y2) - inner(r2, x) - 0.5 * sigma * (inner(r1, r1) + 2.0 * inner(r0, r2));
  q.coef[3] = -sigma * inner(r1, r2);
  q.coef[4] = -0.5 * sigma * inner(r2, r2);
  return q;
}

inline constexpr int kGridSteps = 1000;
inline constexpr double kGridSpacing = 0.01;
inline constexpr double kMaxStep = kGridSteps * kGridSpacing;

/// Best α on the grid 0.01·j, j = 1..1000; 0 when no grid point beats φ(0).
inline double grid_argmax(const AscentQuartic& phi) {
  double best_a = 0.0;
  double best = phi(0.0);
  for (int j = 1; j <= kGridSteps; ++j) {
    const double a = kGridSpacing * j;
    const double v = phi(a);
    if (v > best) {
      best = v;
      best_a = a;
    }
  }
  return best_a;
}

/// Real roots of c0 + c1·t + c2·t² + c3·t³, dropping negligible leading terms.
inline std::vector<double> real_cubic_roots(double c0, double c1, double c2, double c3) {
  std::array<double, 4> c{c0, c1, c2, c3};
  const double scale = std::max({std::abs(c0), std::abs(c1), std::abs(c2), std::abs(c3)});
  if (scale == 0.0) return {};
  int deg = 3;
  while (deg > 0 && std::abs(c[deg]) <= 1e-14 * scale) --deg;
  if (deg == 0) return {};
  if (deg == 1) return {-c[0] / c[1]};
  MatrixXd comp = MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<MatrixXd> es(comp, false);
  std::vector<double> roots;
  for (Index i = 0; i < deg; ++i) {
    const std::complex<double> z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()))) {
      double t = z.real();
      // One Newton polish on the original polynomial.
      double f = 0.0, df = 0.0;
      for (int k = deg; k >= 0; --k) {
        df = df * t + f;
        f = f * t + c[k];
      }
      if (df != 0.0) t -= f / df;
      roots.push_back(t);
    }
  }
  return roots;
}

/// Step along D for the factorized ascent. Returns 0 when no candidate
/// improves on φ(0); the caller then keeps V.
inline double line_search_alpha(const AscentQuartic& phi, LineSearch mode) {
  if (mode == LineSearch::grid) return grid_argmax(phi);
  const auto& c = phi.coef;
  double best_a = 0.0;
  double best = phi(0.0);
  for (double a : real_cubic_roots(c[1], 2.0 * c[2], 3.0 * c[3], 4.0 * c[4])) {
    if (!(a > 0.0) || a > kMaxStep) continue;
    const double v = phi(a);
    if (v > best) {
      best = v;
      best_a = a;
    }
  }
  if (best_a > 0.0) return best_a;
  return grid_argmax(phi);
}

inline double line_search_alpha(const DnnProblem& p, const SymMatrix& s, const MatrixXd& v,
                                const MatrixXd& d, const SymMatrix& x, double sigma,
                                const SolverConfig& cfg) {
  if (d.size() == 0 || d.isZero(0.0)) return 0.0;
  return line_search_alpha(ascent_quartic(p, s, v, d, x, sigma), cfg.line_search);
}

inline constexpr double kInnerGradTol = 1e-12;
inline constexpr double kHessianDiagFloor = 1e-12;

struct InnerUpdateStats {
  int passes = 0;
  std::vector<double> alphas;
};

/// Ascent in (y, V) for fixed (S; X): up to cfg.inner_iters passes of
/// direction, step, move V; y is reset to its closed form at every V so
/// ∇_y L_σ = 0 on exit.
inline InnerUpdateStats inner_yv_update(const DnnProblem& p, SolverState& st,
                                        const SolverConfig& cfg) {
  if (!st.V) throw InputError("inner_yv_update: state has no factor");
  MatrixXd& v = st.V->v;
  InnerUpdateStats stats;
  st.y = y_closed_form(p, st.X, st.S, gram(v), st.sigma);
  for (int pass = 0; pass < cfg.inner_iters; ++pass) {
    const MatrixXd g = grad_V(p, st.y, st.S, v, st.X, st.sigma);
    if (g.norm() < kInnerGradTol) break;
    MatrixXd d = g;
    if (cfg.direction == Direction::scaled_gradient) {
      const MatrixXd h = hessian_diag_V(p, st.y, st.S, v, st.X, st.sigma);
      for (Index k = 0; k < d.size(); ++k) {
        const double hk = std::abs(h(k));
        if (hk > kHessianDiagFloor) d(k) = g(k) / hk;
      }
    }
    const double alpha = line_search_alpha(p, st.S, v, d, st.X, st.sigma, cfg);
    ++stats.passes;
    stats.alphas.push_back(alpha);
    if (alpha > 0.0) {
      v += alpha * d;
      st.y = y_closed_form(p, st.X, st.S, gram(v), st.sigma);
    }
  }
  return stats;
}

}  // namespace dnn
