// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "lp_oracles.hpp"
#include "test_support.hpp"

namespace dnn {
namespace {

SymMatrix mat2(double a, double b, double c) {
  MatrixXd m(2, 2);
  m << a, b, b, c;
  return SymMatrix::from_dense(m);
}

void expect_triple_feasible(const DnnProblem& p, const BoundResult& r) {
  ASSERT_TRUE(r.feasible_triple.has_value());
  const auto& t = *r.feasible_triple;
  const DualFeasibility f = check_dual_feasible(p, t.y, t.S, t.Z, 1e-8);
  EXPECT_TRUE(f.pass) << "violation " << f.max_violation;
  EXPECT_NEAR(*r.value, p.b().dot(t.y), 1e-12 * (1 + std::abs(*r.value)));
}

// ---------------------------------------------------------------------------
// error bound

TEST(ErrorBound, ExactDualPointGivesDualObjective) {
  // K₃ optimum: y_t = −1, y_e = −2, S = 0, Z̃ = 0.
  const DnnProblem p = build_theta_plus(complement(Graph(3, {})));
  VectorXd y = VectorXd::Constant(p.m(), -2.0);
  y(0) = -1.0;
  const BoundResult r = error_bound(p, y, SymMatrix(3), 1.0);
  EXPECT_EQ(r.kind, BoundKind::error_bound);
  EXPECT_EQ(*r.value, p.b().dot(y));
  EXPECT_FALSE(r.feasible_triple.has_value());
}

TEST(ErrorBound, ZeroTwoByTwo) {
  const DnnProblem p = DnnProblem::create(SymMatrix(2), {{{{0, 0, 1.0}}}}, VectorXd::Zero(1));
  EXPECT_EQ(*error_bound(p, VectorXd::Zero(1), SymMatrix(2), 1.0).value, 0.0);
}

TEST(ErrorBound, RejectsNegativeSlack) {
  const DnnProblem p = build_theta_plus(Graph(2, {}));
  EXPECT_THROW(error_bound(p, VectorXd::Zero(1), mat2(0, -1e-3, 0), 1.0), InputError);
  EXPECT_THROW(error_bound(p, VectorXd::Zero(1), SymMatrix(2), -1.0), InputError);
  EXPECT_THROW(error_bound(p, VectorXd::Zero(2), SymMatrix(2), 1.0), InputError);
}

TEST(ErrorBound, NeverExceedsDualObjective) {
  std::mt19937_64 rng(40);
  for (int t = 0; t < 100; ++t) {
    const DnnProblem p = t % 2 ? test::random_problem(rng, 5, 3) : build_theta_plus(test::random_graph(rng, 6, 0.5));
    const VectorXd y = test::random_vec(rng, p.m());
    const BoundResult r = error_bound(p, y, test::random_nonneg(rng, p.n()), 2.0);
    EXPECT_LE(*r.value, p.b().dot(y));
  }
}

// ---------------------------------------------------------------------------
// theta-plus Nightjet

TEST(NightjetThetaPlus, K2WithZeroZ) {
  const DnnProblem p = build_theta_plus(Graph(2, {{0, 1}}));
  const BoundResult r = nightjet_theta_plus(p, SymMatrix(2));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.kind, BoundKind::nightjet);
  EXPECT_DOUBLE_EQ(-*r.value, 1.0);
  expect_triple_feasible(p, r);
}

TEST(NightjetThetaPlus, NonnegativeNonEdgeFails) {
  const DnnProblem p = build_theta_plus(Graph(3, {{0, 1}}));
  const BoundResult r = nightjet_theta_plus(p, SymMatrix::constant(3, 1.0));
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.failure, BoundFailure::nightjet_infeasible);
  EXPECT_FALSE(r.feasible_triple.has_value());
  EXPECT_EQ(kNoBoundMessage, "No dual feasible solution and no bound found");
  // M = 0 exactly is also a failure.
  EXPECT_FALSE(nightjet_theta_plus(p, SymMatrix::identity(3)).ok());
}

TEST(NightjetThetaPlus, RescaleBranch) {
  const DnnProblem p = build_theta_plus(Graph(2, {}));
  const BoundResult r = nightjet_theta_plus(p, mat2(1.0, -0.5, 1.0));
  ASSERT_TRUE(r.ok());
  const SymMatrix& z = r.feasible_triple->Z;
  EXPECT_NEAR(max_nonedge_entry(Graph(2, {}), z), -1.0, 1e-12);
  EXPECT_GE(test::min_eig(z), -1e-12);
  EXPECT_NEAR(-*r.value, 3.0, 1e-12);  // y_t = −1 − 2
  expect_triple_feasible(p, r);
}

TEST(NightjetThetaPlus, NoRescaleWhenBelowMinusOne) {
  const DnnProblem p = build_theta_plus(Graph(2, {}));
  const SymMatrix z = mat2(2.0, -2.0, 2.0);
  const BoundResult r = nightjet_theta_plus(p, z);
  ASSERT_TRUE(r.ok());
  EXPECT_LE((r.feasible_triple->Z - z).norm(), 1e-12);
}

TEST(NightjetThetaPlus, RejectsGenericProblem) {
  const DnnProblem p = DnnProblem::create(SymMatrix(2), {{{{0, 0, 1.0}}}}, VectorXd::Zero(1));
  EXPECT_THROW(nightjet_theta_plus(p, SymMatrix(2)), InputError);
}

TEST(NightjetThetaPlus, CompleteGraphAlwaysSucceeds) {
  std::mt19937_64 rng(41);
  const DnnProblem p = build_theta_plus(complement(Graph(5, {})));
  for (int t = 0; t < 20; ++t) {
    const BoundResult r = nightjet_theta_plus(p, test::random_sym(rng, 5));
    ASSERT_TRUE(r.ok());
    expect_triple_feasible(p, r);
    EXPECT_GE(-*r.value, 1.0 - 1e-9);
  }
}

// ---------------------------------------------------------------------------
// generic Nightjet

TEST(NightjetGeneric, MissingDelegate) {
  const DnnProblem p = build_theta_plus(Graph(2, {{0, 1}}));
  const BoundResult r = nightjet_generic(p, SymMatrix(2), nullptr);
  EXPECT_EQ(r.failure, BoundFailure::lp_delegate_missing);
  EXPECT_FALSE(r.ok());
}

TEST(NightjetGeneric, DelegateFailuresMapToReasons) {
  const DnnProblem p = build_theta_plus(Graph(2, {{0, 1}}));
  EXPECT_EQ(nightjet_generic(p, SymMatrix(2), [](const LpRequest&) { return LpOutcome{LpStatus::infeasible, {}}; })
                .failure,
            BoundFailure::nightjet_infeasible);
  EXPECT_EQ(nightjet_generic(p, SymMatrix(2), [](const LpRequest&) { return LpOutcome{LpStatus::unbounded, {}}; })
                .failure,
            BoundFailure::lp_unbounded);
}

TEST(NightjetGeneric, DelegateViolatingItsConstraintsIsRejected) {
  const DnnProblem p = build_theta_plus(Graph(2, {{0, 1}}));
  auto bad = [](const LpRequest&) { return LpOutcome{LpStatus::optimal, VectorXd::Constant(2, 5.0)}; };
  EXPECT_THROW(nightjet_generic(p, SymMatrix(2), bad), InputError);
}

TEST(NightjetGeneric, RequestStructure) {
  const DnnProblem p = build_theta_plus(Graph(3, {{0, 2}}));
  LpRequest seen;
  nightjet_generic(p, SymMatrix(3), [&](const LpRequest& r) {
    seen = r;
    return test::separable_lp(r);
  });
  EXPECT_EQ(seen.objective, p.b());
  EXPECT_EQ(seen.terms.size(), 4u);  // three diagonal trace terms, one edge term
  EXPECT_EQ((seen.rhs - p.C()).norm(), 0.0);
}

TEST(NightjetGeneric, ZeroObjective) {
  const DnnProblem p = DnnProblem::create(SymMatrix::identity(2), {{{{0, 1, 1.0}}}}, VectorXd::Zero(1));
  const BoundResult r = nightjet_generic(p, SymMatrix(2), test::separable_lp);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r.value, 0.0);
  expect_triple_feasible(p, r);
}

TEST(NightjetGeneric, OneDimensionalHandLp) {
  // Aᵀy = y·[[1,1],[1,2]], C = [[3,1],[1,5]], Z = 0:
  // y <= 3, y <= 1, 2y <= 5 → y* = 1, NB = b·y* = 2.
  const DnnProblem p = DnnProblem::create(mat2(3, 1, 5), {{{{0, 0, 1.0}, {0, 1, 1.0}, {1, 1, 2.0}}}},
                                          VectorXd::Constant(1, 2.0));
  const BoundResult r = nightjet_generic(p, SymMatrix(2), test::bisection_lp_1d);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(*r.value, 2.0, 1e-9);
  expect_triple_feasible(p, r);
}

TEST(NightjetGeneric, FeasibleInputIsImproved) {
  std::mt19937_64 rng(42);
  const DnnProblem p = build_theta_plus(complement(Graph(4, {})));
  const SymMatrix z = test::random_psd(rng, 4);
  VectorXd y = VectorXd::Constant(p.m(), -2.0 - 2.0 * z.dense().cwiseAbs().maxCoeff());
  y(0) = -1.0 - z.dense().diagonal().maxCoeff();
  const SymMatrix s = p.C() - z - p.apply_At(y);
  ASSERT_TRUE(check_dual_feasible(p, y, s, z, 1e-12).pass);
  const BoundResult r = nightjet_generic(p, z, test::separable_lp);
  ASSERT_TRUE(r.ok());
  EXPECT_GE(*r.value, p.b().dot(y) - 1e-12);
}

TEST(NightjetGeneric, AgreesWithClosedFormWithoutRescale) {
  int compared = 0;
  for (const char* name : {"johnson8_2_4", "hamming6_4", "MANN_a9"}) {
    const DnnProblem p = build_theta_plus(test::golden_graph(name));
    for (Method m : kAllMethods) {
      SolverConfig cfg;
      cfg.max_iter = 40;
      const SolveReport rep = solve(p, m, cfg);
      BoundResult tp = nightjet_theta_plus(p, rep.state.Z);
      if (!tp.ok()) continue;
      // Push M below −1 so neither path rescales.
      const SymMatrix z = tp.feasible_triple->Z * 1.5;
      const BoundResult a = nightjet_theta_plus(p, z);
      const BoundResult b = nightjet_generic(p, z, test::separable_lp);
      ASSERT_TRUE(a.ok());
      ASSERT_TRUE(b.ok());
      EXPECT_NEAR(*a.value, *b.value, 1e-9 * (1 + std::abs(*a.value)));
      expect_triple_feasible(p, b);
      ++compared;
    }
  }
  EXPECT_GT(compared, 0);
}

// ---------------------------------------------------------------------------
// dual feasibility check

TEST(CheckDualFeasible, PerturbedSlackFails) {
  const DnnProblem p = build_theta_plus(Graph(2, {{0, 1}}));
  const BoundResult r = nightjet_theta_plus(p, SymMatrix(2));
  ASSERT_TRUE(r.ok());
  auto t = *r.feasible_triple;
  t.S.add(0, 0, -1e-3);
  const DualFeasibility f = check_dual_feasible(p, t.y, t.S, t.Z, 1e-8);
  EXPECT_FALSE(f.pass);
  EXPECT_NEAR(f.max_violation, 1e-3, 1e-12);
}

TEST(CheckDualFeasible, ZeroProblem) {
  const DnnProblem p = DnnProblem::create(SymMatrix(2), {{{{0, 0, 1.0}}}}, VectorXd::Zero(1));
  const DualFeasibility f = check_dual_feasible(p, VectorXd::Zero(1), SymMatrix(2), SymMatrix(2), 1e-8);
  EXPECT_TRUE(f.pass);
  EXPECT_EQ(f.max_violation, 0.0);
  EXPECT_THROW(check_dual_feasible(p, VectorXd::Zero(2), SymMatrix(2), SymMatrix(2), 1e-8), InputError);
}

TEST(CheckDualFeasible, ReportsEachCondition) {
  const DnnProblem p = DnnProblem::create(SymMatrix(2), {{{{0, 0, 1.0}}}}, VectorXd::Zero(1));
  const DualFeasibility f = check_dual_feasible(p, VectorXd::Zero(1), mat2(0, -2, 0), mat2(-1, 0, 0), 1e-8);
  EXPECT_DOUBLE_EQ(f.nonneg, 2.0);
  EXPECT_DOUBLE_EQ(f.psd, 1.0);
  EXPECT_DOUBLE_EQ(f.equality, 2.0);
}

// ---------------------------------------------------------------------------
// safety on random graphs

TEST(BoundSafety, RandomGraphsTruncatedRuns) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 40; ++t) {
    const Graph g = test::random_graph(rng, 4 + t % 9, 0.2 + 0.05 * (t % 10));
    const int alpha = alpha_bruteforce(g);
    const DnnProblem p = build_theta_plus(g);
    const Method m = kAllMethods[t % 4];
    for (std::size_t cap : {1u, 5u, 20u}) {
      SolverConfig cfg;
      cfg.max_iter = cap;
      const SolveReport rep = solve(p, m, cfg);
      EXPECT_GE(-*error_bound(p, rep.state.y, rep.state.S, 1.0).value, alpha - 1e-6);
      const BoundResult nb = nightjet_theta_plus(p, rep.state.Z);
      if (nb.ok()) {
        EXPECT_GE(-*nb.value, alpha - 1e-6);
        expect_triple_feasible(p, nb);
      }
    }
  }
}

}  // namespace
}  // namespace dnn
