// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "dnn/errors.hpp"

namespace dnn {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Dense symmetric matrix. Entry (i,j) and (j,i) are always the same double:
/// every constructor symmetrizes and every mutator writes both halves.
class SymMatrix {
 public:
  /// Empty placeholder (dimension 0); every other constructor requires n >= 1.
  SymMatrix() = default;

  explicit SymMatrix(Index n) : m_(MatrixXd::Zero(check_dim(n), n)) {}

  /// Symmetrizes by averaging with the transpose.
  static SymMatrix from_dense(const MatrixXd& m) {
    if (m.rows() != m.cols()) throw InputError("SymMatrix: matrix is not square");
    check_dim(m.rows());
    SymMatrix s;
    s.m_ = 0.5 * (m + m.transpose());
    return s;
  }

  /// Keeps the lower triangle and mirrors it into the upper one.
  static SymMatrix from_lower(MatrixXd m) {
    if (m.rows() != m.cols()) throw InputError("SymMatrix: matrix is not square");
    check_dim(m.rows());
    m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
    SymMatrix s;
    s.m_ = std::move(m);
    return s;
  }

  static SymMatrix identity(Index n) {
    SymMatrix s(n);
    s.m_.diagonal().setOnes();
    return s;
  }

  static SymMatrix constant(Index n, double value) {
    SymMatrix s(n);
    s.m_.setConstant(value);
    return s;
  }

  static SymMatrix diagonal(const VectorXd& d) {
    SymMatrix s(d.size());
    s.m_.diagonal() = d;
    return s;
  }

  Index dim() const noexcept { return m_.rows(); }
  bool empty() const noexcept { return m_.size() == 0; }

  double operator()(Index i, Index j) const { return m_(i, j); }

  void set(Index i, Index j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  void add(Index i, Index j, double v) {
    m_(i, j) += v;
    if (i != j) m_(j, i) += v;
  }

  const MatrixXd& dense() const noexcept { return m_; }

  bool all_finite() const { return m_.allFinite(); }
  double norm() const { return m_.norm(); }
  double trace() const { return m_.trace(); }
  double min_entry() const { return m_.minCoeff(); }
  double max_entry() const { return m_.maxCoeff(); }

  SymMatrix& operator+=(const SymMatrix& o) {
    same_dim(o);
    m_ += o.m_;
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& o) {
    same_dim(o);
    m_ -= o.m_;
    return *this;
  }
  SymMatrix& operator*=(double a) {
    m_ *= a;
    return *this;
  }

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator/(SymMatrix a, double s) { return a *= 1.0 / s; }
  friend SymMatrix operator-(SymMatrix a) { return a *= -1.0; }

 private:
  static Index check_dim(Index n) {
    if (n < 1) throw InputError("SymMatrix: dimension must be at least 1");
    return n;
  }
  void same_dim(const SymMatrix& o) const {
    if (o.dim() != dim()) throw InputError("SymMatrix: dimension mismatch");
  }

  MatrixXd m_;
};

inline double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InputError("inner: dimension mismatch");
  return a.dense().cwiseProduct(b.dense()).sum();
}

/// V·Vᵀ, exactly symmetric.
inline SymMatrix gram(const MatrixXd& v) {
  MatrixXd g = MatrixXd::Zero(v.rows(), v.rows());
  if (v.cols() > 0) g.selfadjointView<Eigen::Lower>().rankUpdate(v);
  return SymMatrix::from_lower(std::move(g));
}

/// Eigenvalues ascending; columns of `vectors` are the matching eigenvectors.
struct EigenDecomposition {
  VectorXd values;
  MatrixXd vectors;
};

/// Per-thread counts of spectral work. Solvers snapshot these around their
/// main loop to report how many decompositions they performed.
struct SpectralCounters {
  std::uint64_t decompositions = 0;    // eigenvalues and eigenvectors
  std::uint64_t eigenvalue_only = 0;   // spectrum without eigenvectors
};

inline SpectralCounters& spectral_counters() {
  thread_local SpectralCounters counters;
  return counters;
}

inline EigenDecomposition eig_sym(const SymMatrix& m) {
  if (m.empty()) throw InputError("eig_sym: empty matrix");
  if (!m.all_finite()) throw InputError("eig_sym: non-finite entries");
  ++spectral_counters().decompositions;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m.dense(), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw InputError("eig_sym: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Ascending eigenvalues only.
inline VectorXd eigenvalues_sym(const SymMatrix& m) {
  if (m.empty()) throw InputError("eigenvalues_sym: empty matrix");
  if (!m.all_finite()) throw InputError("eigenvalues_sym: non-finite entries");
  ++spectral_counters().eigenvalue_only;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m.dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw InputError("eigenvalues_sym: eigensolver did not converge");
  return es.eigenvalues();
}

struct PsdSplit {
  SymMatrix plus;   // (M)+
  SymMatrix minus;  // (M)-
};

/// Split of M given its decomposition. The side with fewer eigenpairs is
/// assembled explicitly and the other one is M minus it, so plus + minus
/// reproduces M up to a single rounding.
inline PsdSplit project_psd_split(const SymMatrix& m, const EigenDecomposition& eig) {
  const Index n = m.dim();
  const VectorXd& lam = eig.values;
  const Index n_pos = (lam.array() > 0.0).count();
  const Index n_neg = n - n_pos;
  if (n_pos <= n_neg) {
    // Ascending order puts the positive eigenvalues last.
    MatrixXd v = eig.vectors.rightCols(n_pos) * lam.tail(n_pos).cwiseSqrt().asDiagonal();
    SymMatrix plus = gram(v);
    SymMatrix minus = m - plus;
    return {std::move(plus), std::move(minus)};
  }
  MatrixXd v = eig.vectors.leftCols(n_neg) * (-lam.head(n_neg)).cwiseSqrt().asDiagonal();
  SymMatrix minus = -gram(v);
  SymMatrix plus = m - minus;
  return {std::move(plus), std::move(minus)};
}

inline PsdSplit project_psd_split(const SymMatrix& m) { return project_psd_split(m, eig_sym(m)); }

inline SymMatrix project_nonneg(const SymMatrix& m) {
  if (!m.all_finite()) throw InputError("project_nonneg: non-finite entries");
  return SymMatrix::from_lower(m.dense().cwiseMax(0.0));
}

/// V (n×r) with Z = V·Vᵀ.
struct Factor {
  MatrixXd v;

  Index dim() const noexcept { return v.rows(); }
  Index rank() const noexcept { return v.cols(); }
  SymMatrix product() const { return gram(v); }
};

inline constexpr double kDefaultRankTol = 1e-8;

/// Factor built from the eigenpairs (lam, q) of a PSD matrix, lam ascending.
/// Keeps eigenvalues above rank_tol·max(λmax, 1); if none survive, returns the
/// top eigenvector scaled by √max(λmax, 0) so the rank never drops to zero.
inline Factor factor_from_spectrum(const VectorXd& lam, const MatrixXd& q, double rank_tol) {
  const Index n = lam.size();
  const double lmax = lam(n - 1);
  const double cut = rank_tol * std::max(lmax, 1.0);
  Index r = 0;
  while (r < n && lam(n - 1 - r) > cut) ++r;
  if (r == 0) {
    return {q.rightCols(1) * std::sqrt(std::max(lmax, 0.0))};
  }
  return {q.rightCols(r) * lam.tail(r).cwiseSqrt().asDiagonal()};
}

inline Factor low_rank_factor(const SymMatrix& m, double rank_tol = kDefaultRankTol) {
  if (!(rank_tol > 0.0)) throw InputError("low_rank_factor: rank_tol must be positive");
  const EigenDecomposition eig = eig_sym(m);
  const double lmin = eig.values(0);
  const double lmax = eig.values(eig.values.size() - 1);
  if (lmin < -1e-8 * (1.0 + std::max(lmax, 0.0))) {
    throw ConeError("low_rank_factor: matrix is not positive semidefinite");
  }
  return factor_from_spectrum(eig.values, eig.vectors, rank_tol);
}

}  // namespace dnn
