// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <bit>
#include <sstream>

#include "dnn/report_io.hpp"
#include "test_support.hpp"

namespace dnn {
namespace {

int alpha_full_enumeration(const Graph& g) {
  const int n = g.num_vertices();
  int best = 0;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    bool stable = true;
    for (const auto& [i, j] : g.edges())
      if ((s >> i & 1u) && (s >> j & 1u)) {
        stable = false;
        break;
      }
    if (stable) best = std::max(best, std::popcount(s));
  }
  return best;
}

TEST(AlphaBruteforce, Examples) {
  EXPECT_EQ(alpha_bruteforce(Graph(5, {})), 5);
  EXPECT_EQ(alpha_bruteforce(complement(Graph(5, {}))), 1);
  EXPECT_EQ(alpha_bruteforce(Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}})), 2);
  EXPECT_THROW(alpha_bruteforce(Graph(31, {})), InputError);
  EXPECT_EQ(alpha_bruteforce(Graph(30, {})), 30);
}

TEST(AlphaBruteforce, MatchesFullEnumeration) {
  std::mt19937_64 rng(50);
  for (int t = 0; t < 300; ++t) {
    const Graph g = test::random_graph(rng, 1 + t % 12, 0.1 + 0.08 * (t % 10));
    EXPECT_EQ(alpha_bruteforce(g), alpha_full_enumeration(g));
  }
}

TEST(AlphaBruteforce, GoldenInstances) {
  for (const auto& row : test::golden_rows()) {
    const Graph g = test::golden_graph(row.name);
    if (g.num_vertices() <= kAlphaMaxVertices) { EXPECT_EQ(alpha_bruteforce(g), row.alpha) << row.name; }
  }
}

// ---------------------------------------------------------------------------

ProfileInput input(std::vector<std::string> solvers, std::vector<std::vector<std::optional<double>>> times) {
  ProfileInput in;
  in.solvers = std::move(solvers);
  for (std::size_t p = 0; p < times.size(); ++p) in.problems.push_back("p" + std::to_string(p));
  in.times = std::move(times);
  return in;
}

double rho_at(const ProfileCurve& c, double tau) {
  double r = 0.0;
  for (const auto& [t, v] : c.steps)
    if (t <= tau) r = v;
  return r;
}

TEST(PerformanceProfiles, SingleSolver) {
  const auto curves = performance_profiles(input({"a"}, {{3.0}, {1.0}, {7.0}}));
  ASSERT_EQ(curves.size(), 1u);
  ASSERT_EQ(curves[0].steps.size(), 1u);
  EXPECT_EQ(curves[0].steps[0], std::make_pair(1.0, 1.0));
}

TEST(PerformanceProfiles, TwoByTwoHandExample) {
  const auto curves = performance_profiles(input({"a", "b"}, {{1.0, 2.0}, {2.0, 1.0}}));
  for (const auto& c : curves) {
    EXPECT_EQ(rho_at(c, 1.0), 0.5);
    EXPECT_EQ(rho_at(c, 2.0), 1.0);
  }
}

TEST(PerformanceProfiles, TimeoutRowExcluded) {
  const auto curves = performance_profiles(input({"a", "b"}, {{1.0, 2.0}, {std::nullopt, 1.0}, {2.0, 1.0}}));
  EXPECT_EQ(rho_at(curves[0], 1.0), 0.5);
  EXPECT_EQ(rho_at(curves[1], 1.0), 0.5);
  EXPECT_EQ(rho_at(curves[1], 2.0), 1.0);
}

TEST(PerformanceProfiles, IncludeTimeoutsAtInfinity) {
  const auto curves =
      performance_profiles(input({"a", "b"}, {{1.0, 2.0}, {std::nullopt, 1.0}, {2.0, 1.0}}), true);
  EXPECT_NEAR(rho_at(curves[0], 1e9), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(rho_at(curves[1], 2.0), 1.0);
}

TEST(PerformanceProfiles, AllRowsDropped) {
  EXPECT_THROW(performance_profiles(input({"a", "b"}, {{std::nullopt, 1.0}})), EmptyProfileError);
  EXPECT_THROW(performance_profiles(input({}, {})), InputError);
  EXPECT_THROW(performance_profiles(input({"a"}, {{-1.0}})), InputError);
  EXPECT_THROW(performance_profiles(input({"a", "b"}, {{1.0}})), InputError);
}

TEST(PerformanceProfiles, ZeroBestTime) {
  const auto curves = performance_profiles(input({"a", "b"}, {{0.0, 0.0}, {0.0, 1.0}}));
  EXPECT_EQ(rho_at(curves[0], 1.0), 1.0);
  EXPECT_EQ(rho_at(curves[1], 1.0), 0.5);
}

TEST(PerformanceProfiles, RandomInvariants) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::bernoulli_distribution timeout(0.1);
  for (int t = 0; t < 100; ++t) {
    const int ns = 1 + t % 4, np = 1 + t % 7;
    std::vector<std::vector<std::optional<double>>> times(np, std::vector<std::optional<double>>(ns));
    for (auto& row : times)
      for (auto& v : row)
        if (!timeout(rng)) v = u(rng);
    std::vector<std::string> names(ns, "s");
    ProfileInput in = input(names, times);
    std::vector<ProfileCurve> curves;
    try {
      curves = performance_profiles(in);
    } catch (const EmptyProfileError&) {
      continue;
    }
    double first_sum = 0.0;
    for (const auto& c : curves) {
      EXPECT_EQ(c.steps.front().first, 1.0);
      first_sum += c.steps.front().second;
      for (std::size_t k = 0; k < c.steps.size(); ++k) {
        EXPECT_GE(c.steps[k].second, 0.0);
        EXPECT_LE(c.steps[k].second, 1.0);
        if (k) {
          EXPECT_GT(c.steps[k].first, c.steps[k - 1].first);
          EXPECT_GE(c.steps[k].second, c.steps[k - 1].second);
        }
      }
      EXPECT_EQ(c.steps.back().second, 1.0);
    }
    EXPECT_GE(first_sum, 1.0 - 1e-12);  // every problem has a best solver
  }
}

// ---------------------------------------------------------------------------

TEST(RunSuite, EmptyInputs) {
  EXPECT_TRUE(run_suite({}, {Method::adal_plus}, SuiteConfig{}).empty());
  EXPECT_TRUE(run_suite({{"x", Graph(3, {})}}, {}, SuiteConfig{}).empty());
}

TEST(RunSuite, Johnson8_2_4AllSolvers) {
  const std::vector<SuiteInstance> inst = {{"johnson8_2_4", test::golden_graph("johnson8_2_4")}};
  SuiteConfig cfg;
  cfg.jobs = 4;
  const auto rows = run_suite(inst, {std::begin(kAllMethods), std::end(kAllMethods)}, cfg);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    const SuiteRow& r = rows[k];
    EXPECT_EQ(r.solver, kAllMethods[k]);
    EXPECT_EQ(r.instance, "johnson8_2_4");
    EXPECT_EQ(r.n, 28);
    EXPECT_EQ(r.m, 169u);
    EXPECT_EQ(r.status, "converged");
    EXPECT_NEAR(*r.theta, 4.0, 1e-2);
    EXPECT_GE(*r.eb, 4.0 - 1e-6);
    if (r.nb) { EXPECT_GE(*r.nb, 4.0 - 1e-6); }
  }
}

TEST(RunSuite, BudgetStillProducesBounds) {
  SuiteConfig cfg;
  cfg.solver.max_iter = 1;
  const auto rows = run_suite({{"j", test::golden_graph("johnson8_2_4")}}, {Method::adal_plus}, cfg);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].status, "iter_limit");
  EXPECT_EQ(rows[0].iterations, 1u);
  ASSERT_TRUE(rows[0].eb.has_value());
  EXPECT_GE(*rows[0].eb, 4.0 - 1e-6);
  EXPECT_FALSE(rows[0].nb_status.empty());
}

TEST(RunSuite, DeterministicAndOrderStable) {
  std::mt19937_64 rng(52);
  std::vector<SuiteInstance> inst;
  for (int k = 0; k < 5; ++k) inst.push_back({"g" + std::to_string(k), test::random_graph(rng, 9, 0.4)});
  const std::vector<Method> methods(std::begin(kAllMethods), std::end(kAllMethods));
  SuiteConfig one, many;
  many.jobs = 8;
  const auto a = run_suite(inst, methods, one);
  const auto b = run_suite(inst, methods, many);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].instance, inst[k / 4].name);
    EXPECT_EQ(a[k].instance, b[k].instance);
    EXPECT_EQ(a[k].solver, b[k].solver);
    EXPECT_EQ(a[k].theta, b[k].theta);
    EXPECT_EQ(a[k].eb, b[k].eb);
    EXPECT_EQ(a[k].nb, b[k].nb);
    EXPECT_EQ(a[k].nb_status, b[k].nb_status);
    EXPECT_EQ(a[k].iterations, b[k].iterations);
    EXPECT_EQ(a[k].status, b[k].status);
  }
}

TEST(RunSuite, RowErrorsAreCaptured) {
  SuiteConfig cfg;
  cfg.solver.time_limit_s = -1.0;
  EXPECT_THROW(run_suite({{"x", Graph(3, {})}}, {Method::adal_plus}, cfg), InputError);
  // A default-constructed graph has no vertices; its rows fail without stopping the suite.
  const auto rows =
      run_suite({{"broken", Graph{}}, {"fine", Graph(3, {})}}, {Method::adal_plus, Method::dadmm3c}, SuiteConfig{});
  ASSERT_EQ(rows.size(), 4u);
  for (int k : {0, 1}) {
    EXPECT_EQ(rows[k].status, "error");
    EXPECT_FALSE(rows[k].error.empty());
    EXPECT_FALSE(rows[k].theta.has_value());
  }
  for (int k : {2, 3}) {
    EXPECT_EQ(rows[k].status, "converged");
    EXPECT_NEAR(*rows[k].theta, 3.0, 1e-4);
  }
}

// ---------------------------------------------------------------------------

TEST(ReportIo, ResultsRoundTrip) {
  std::vector<SuiteRow> rows(2);
  rows[0] = {"a,b", Method::dadal_plus, 28, 169, 4.0000012345678901, 4.0003, std::nullopt,
             "nightjet-infeasible", 25, 0.125, "converged", ""};
  rows[1] = {"plain", Method::conic3c, 3, 1, std::nullopt, std::nullopt, std::nullopt, "", 0, 0.0, "error",
             "bad \"thing\""};
  std::stringstream ss;
  io::write_results_csv(ss, rows);
  const auto back = io::read_results_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(back[k].instance, rows[k].instance);
    EXPECT_EQ(back[k].solver, rows[k].solver);
    EXPECT_EQ(back[k].n, rows[k].n);
    EXPECT_EQ(back[k].m, rows[k].m);
    EXPECT_EQ(back[k].theta, rows[k].theta);
    EXPECT_EQ(back[k].eb, rows[k].eb);
    EXPECT_EQ(back[k].nb, rows[k].nb);
    EXPECT_EQ(back[k].nb_status, rows[k].nb_status);
    EXPECT_EQ(back[k].iterations, rows[k].iterations);
    EXPECT_EQ(back[k].elapsed_s, rows[k].elapsed_s);
    EXPECT_EQ(back[k].status, rows[k].status);
    EXPECT_EQ(back[k].error, rows[k].error);
  }
}

TEST(ReportIo, SeventeenDigits) {
  EXPECT_EQ(io::fmt_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(io::fmt_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(ReportIo, ReadErrors) {
  std::stringstream empty;
  EXPECT_THROW(io::read_results_csv(empty), ParseError);
  std::stringstream header("wrong\n");
  EXPECT_THROW(io::read_results_csv(header), ParseError);
  std::stringstream fields(std::string(io::kResultsHeader) + "\na,adal+,1\n");
  EXPECT_THROW(io::read_results_csv(fields), ParseError);
  std::stringstream solver(std::string(io::kResultsHeader) + "\na,foo,1,1,,,,,1,0,converged,\n");
  EXPECT_THROW(io::read_results_csv(solver), ParseError);
  std::stringstream num(std::string(io::kResultsHeader) + "\na,adal+,1,1,x,,,,1,0,converged,\n");
  EXPECT_THROW(io::read_results_csv(num), ParseError);
}

TEST(ReportIo, TraceBlanksForUntrackedResiduals) {
  const DnnProblem p = build_theta_plus(test::golden_graph("johnson8_2_4"));
  SolverConfig cfg;
  cfg.trace = true;
  cfg.max_iter = 2;
  std::stringstream a, c;
  io::write_trace_csv(a, solve(p, Method::adal_plus, cfg).trace);
  io::write_trace_csv(c, solve(p, Method::conic3c, cfg).trace);
  std::string line;
  std::getline(a, line);
  EXPECT_EQ(line, io::kTraceHeader);
  std::getline(a, line);
  EXPECT_NE(line.find(",,,"), std::string::npos);  // r_PD and r_CZ blank
  std::getline(c, line);
  std::getline(c, line);
  EXPECT_EQ(line.find(",,"), std::string::npos);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
}

}  // namespace
}  // namespace dnn
