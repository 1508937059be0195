// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>

#include "dnn/graph.hpp"
#include "dnn/linalg.hpp"

namespace dnn {

/// Sparse symmetric coefficient matrix A_i. Each entry (i, j, value) with
/// i <= j stands for A(i,j) = A(j,i) = value.
struct ConstraintMatrix {
  struct Entry {
    int i;
    int j;
    double value;
  };
  std::vector<Entry> entries;
};

enum class ProblemKind { generic, theta_plus };

/// min <C,X> s.t. <A_i,X> = b_i, X PSD, X >= 0.
///
/// Immutable once built. The Gram matrix AAᵀ is factored at construction:
/// it is diagonal for theta-plus problems and goes through a dense Cholesky
/// factorization otherwise.
class DnnProblem {
 public:
  static DnnProblem create(SymMatrix c, std::vector<ConstraintMatrix> constraints, VectorXd b) {
    DnnProblem p(std::move(c), std::move(constraints), std::move(b));
    p.factor_generic();
    return p;
  }

  Index n() const noexcept { return c_.dim(); }
  Index m() const noexcept { return b_.size(); }
  const SymMatrix& C() const noexcept { return c_; }
  const VectorXd& b() const noexcept { return b_; }
  const std::vector<ConstraintMatrix>& constraints() const noexcept { return constraints_; }
  ProblemKind kind() const noexcept { return kind_; }
  /// Graph the theta-plus problem was built from; null for generic problems.
  const Graph* graph() const noexcept { return graph_.get(); }
  /// Diagonal of AAᵀ when it is diagonal (theta-plus), empty otherwise.
  const VectorXd& aat_diagonal() const noexcept { return aat_diag_; }

  /// (AX)_i = <A_i, X>.
  VectorXd apply_A(const SymMatrix& x) const {
    if (x.dim() != n()) throw InputError("apply_A: dimension mismatch");
    const MatrixXd& xd = x.dense();
    VectorXd out(m());
    for (Index k = 0; k < m(); ++k) {
      double s = 0.0;
      for (const auto& e : constraints_[k].entries) {
        s += (e.i == e.j ? 1.0 : 2.0) * e.value * xd(e.i, e.j);
      }
      out(k) = s;
    }
    return out;
  }

  /// Aᵀy = sum_i y_i A_i.
  SymMatrix apply_At(const VectorXd& y) const {
    if (y.size() != m()) throw InputError("apply_At: length mismatch");
    SymMatrix out(n());
    for (Index k = 0; k < m(); ++k) {
      const double yk = y(k);
      if (yk == 0.0) continue;
      for (const auto& e : constraints_[k].entries) out.add(e.i, e.j, yk * e.value);
    }
    return out;
  }

  /// u with (AAᵀ)u = v.
  VectorXd solve_AAt(const VectorXd& v) const {
    if (v.size() != m()) throw InputError("solve_AAt: length mismatch");
    if (aat_diag_.size() == m()) return v.cwiseQuotient(aat_diag_);
    return aat_llt_.solve(v);
  }

  /// AAᵀ·u, assembled entry by entry from the constraint matrices.
  VectorXd apply_AAt(const VectorXd& u) const { return apply_A(apply_At(u)); }

  friend DnnProblem build_theta_plus(const Graph& g);

 private:
  DnnProblem(SymMatrix c, std::vector<ConstraintMatrix> constraints, VectorXd b)
      : c_(std::move(c)), constraints_(std::move(constraints)), b_(std::move(b)) {
    if (c_.empty()) throw InputError("DnnProblem: empty cost matrix");
    if (!c_.all_finite() || !b_.allFinite()) throw InputError("DnnProblem: non-finite data");
    if (static_cast<Index>(constraints_.size()) != b_.size()) {
      throw InputError("DnnProblem: constraint count does not match b");
    }
    if (b_.size() == 0) throw InputError("DnnProblem: at least one constraint required");
    const int nn = static_cast<int>(c_.dim());
    for (auto& a : constraints_) {
      std::set<std::pair<int, int>> seen;
      for (auto& e : a.entries) {
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i < 0 || e.j >= nn) throw InputError("DnnProblem: constraint index out of range");
        if (!std::isfinite(e.value)) throw InputError("DnnProblem: non-finite constraint value");
        if (!seen.emplace(e.i, e.j).second) throw InputError("DnnProblem: duplicate constraint entry");
      }
    }
  }

  void factor_generic() {
    const Index nn = n();
    const Index cols = nn * (nn + 1) / 2;
    std::vector<Eigen::Triplet<double>> trip;
    for (Index k = 0; k < m(); ++k) {
      for (const auto& e : constraints_[k].entries) {
        const Index col = static_cast<Index>(e.j) * (e.j + 1) / 2 + e.i;
        const double w = e.i == e.j ? 1.0 : std::sqrt(2.0);
        trip.emplace_back(k, col, w * e.value);
      }
    }
    Eigen::SparseMatrix<double> bmat(m(), cols);
    bmat.setFromTriplets(trip.begin(), trip.end());
    const Eigen::SparseMatrix<double> gram_sp = bmat * bmat.transpose();
    const MatrixXd g = MatrixXd(gram_sp);
    aat_llt_.compute(g);
    if (aat_llt_.info() != Eigen::Success || aat_llt_.rcond() < 1e-13) {
      throw InputError("DnnProblem: constraints are linearly dependent (AAᵀ is singular)");
    }
  }

  SymMatrix c_;
  std::vector<ConstraintMatrix> constraints_;
  VectorXd b_;
  ProblemKind kind_ = ProblemKind::generic;
  std::shared_ptr<const Graph> graph_;
  VectorXd aat_diag_;
  Eigen::LLT<MatrixXd> aat_llt_;
};

/// theta-plus(G) in minimization form: C = -J, trace(X) = 1, and for every
/// edge {i,j} the constraint with coefficient 1/2 at (i,j) and (j,i) and
/// right-hand side 0. AAᵀ = diag(n, 1/2, ..., 1/2).
inline DnnProblem build_theta_plus(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<ConstraintMatrix> cons;
  cons.reserve(g.num_edges() + 1);
  ConstraintMatrix trace;
  trace.entries.reserve(n);
  for (int i = 0; i < n; ++i) trace.entries.push_back({i, i, 1.0});
  cons.push_back(std::move(trace));
  for (const auto& [i, j] : g.edges()) cons.push_back({{{i, j, 0.5}}});
  VectorXd b = VectorXd::Zero(static_cast<Index>(cons.size()));
  b(0) = 1.0;

  DnnProblem p(SymMatrix::constant(n, -1.0), std::move(cons), std::move(b));
  p.kind_ = ProblemKind::theta_plus;
  p.graph_ = std::make_shared<const Graph>(g);
  p.aat_diag_ = VectorXd::Constant(p.m(), 0.5);
  p.aat_diag_(0) = static_cast<double>(n);
  return p;
}

}  // namespace dnn
