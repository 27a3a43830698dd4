#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"

using namespace smcone;
using namespace smcone::bench;
using oracle::Vec;

TEST(Bench, PerformanceRatios) {
  TimingTable t{{"a", "b"}, {"p1", "p2"}, {{1, 4}, {2, 2}}};
  const RatioTable r = performance_ratios(t);
  EXPECT_EQ(r.r, (std::vector<std::vector<double>>{{1, 4}, {1, 1}}));
  t.t = {{kInf, 3}, {kInf, kInf}};
  const RatioTable f = performance_ratios(t);
  EXPECT_TRUE(std::isinf(f.r[0][0]));
  EXPECT_EQ(f.r[0][1], 1.0);
  EXPECT_EQ(f.all_failed, (std::vector<bool>{false, true}));
  TimingTable single{{"a"}, {"p1", "p2"}, {{3}, {7}}};
  EXPECT_EQ(performance_ratios(single).r, (std::vector<std::vector<double>>{{1}, {1}}));
}

TEST(Bench, DolanMoreProfile) {
  const std::vector<std::vector<double>> r{{1, 2}, {2, 1}};
  const auto rho = dm_profile(r, {1.0, 2.0});
  EXPECT_EQ(rho[0][0], 0.5);
  EXPECT_EQ(rho[0][1], 1.0);
  const std::vector<std::vector<double>> with_fail{{1, kInf}, {1, kInf}, {kInf, 1}};
  const auto taus = tau_grid(1e6, 30);
  const auto prof = dm_profile(with_fail, taus);
  EXPECT_NEAR(prof[0].back(), 2.0 / 3.0, 1e-15);
  for (const auto& curve : prof) {
    for (std::size_t k = 1; k < curve.size(); ++k) EXPECT_GE(curve[k], curve[k - 1]);
  }
  const auto none = dm_profile({{kInf, 1}, {kInf, 1}}, taus);
  for (double v : none[0]) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(dm_profile(r, {2.0, 1.0}), Error);
  EXPECT_THROW(dm_profile(r, {0.5}), Error);
}

TEST(Bench, ShiftedGeometricMean) {
  EXPECT_NEAR(sgm({4, 9}, 0.0), 6.0, 1e-12);
  EXPECT_NEAR(sgm({1, 2}, 10.0), std::sqrt(132.0) - 10.0, 1e-12);
  EXPECT_NEAR(sgm({0.001, 0.001}, 0.0), 1.0, 1e-15);
  // failure replaced by 100 x the worst finite time
  EXPECT_NEAR(sgm({2, kInf}, 0.0), std::sqrt(2.0 * 200.0), 1e-12);
  EXPECT_LE(sgm({1, 2}, 10.0), sgm({1, 3}, 10.0));
  try {
    sgm({kInf, kInf}, 10.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllFailed);
  }
  EXPECT_THROW(sgm({1}, -1.0), Error);
}

namespace {

// Independent transcription of splitmix64 and xoshiro256** from their
// published reference code.
std::uint64_t ref_splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

TEST(Bench, RngIsTheReferenceGenerator) {
  std::uint64_t x = 0;
  EXPECT_EQ(ref_splitmix(x), 0xe220a8397b1dcdafULL);

  std::uint64_t seed = 12345, s[4];
  for (auto& w : s) w = ref_splitmix(seed);
  Rng a(12345);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    ASSERT_EQ(a.next_u64(), result);
  }
  Rng b(42), c(43);
  EXPECT_NE(b.next_u64(), c.next_u64());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  double mean = 0, var = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = a.normal();
    mean += z;
    var += z * z;
  }
  EXPECT_NEAR(mean / n, 0.0, 0.01);
  EXPECT_NEAR(var / n, 1.0, 0.02);
}

TEST(Bench, LassoAgainstProximalGradient) {
  for (std::uint64_t seed : {1u, 2u}) {
    const LassoSpec spec{.n = 20, .m = 4, .cond = 10.0, .mu = 0.1};
    const LassoData data = make_lasso_data(spec, seed);
    Eigen::JacobiSVD<oracle::Mat> svd(data.A);
    EXPECT_NEAR(svd.singularValues()[0] / svd.singularValues()[3], 10.0, 1e-9);
    const double ref = oracle::lasso_reference(data.A, data.b, spec.mu);
    const SolveOutcome out = solve(lasso_problem(data), SolverParams::anderson());
    ASSERT_EQ(out.status, Status::Solved);
    EXPECT_NEAR(out.objective, ref, 1e-3 * std::abs(ref));
    EXPECT_NEAR(lasso_objective(data, out.triple.x.head(20)), ref, 1e-3 * std::abs(ref));
  }
}

TEST(Bench, PcaWithoutPenaltyIsTopEigenvalue) {
  const L1PcaSpec spec{.d = 5, .lambda = 0.0};
  const L1PcaData data = make_l1_pca_data(spec, 7);
  const double ref = oracle::top_eigenvalue(data.S);
  const SolveOutcome out = solve(l1_pca_problem(data), SolverParams::anderson());
  ASSERT_EQ(out.status, Status::Solved);
  EXPECT_NEAR(-out.objective, ref, 1e-3 * ref);
  const oracle::Mat Z = oracle::unpack_sym(out.triple.x.head(15));
  EXPECT_NEAR(Z.trace(), 1.0, 1e-4);
}

TEST(Bench, PcaWithPenaltyIsFeasible) {
  const ConicProblem p = gen_l1_pca({.d = 4, .lambda = 0.2}, 3);
  const SolveOutcome out = solve(p, SolverParams::anderson());
  ASSERT_EQ(out.status, Status::Solved);
  EXPECT_NEAR(oracle::unpack_sym(out.triple.x.head(10)).trace(), 1.0, 1e-4);
}

TEST(Bench, LogisticRegressionAgainstProximalGradient) {
  const LogRegSpec spec{.p = 5, .q = 10, .lambda = 1.0};
  const LogRegData data = make_logreg_data(spec, 5);
  const double ref = oracle::logreg_reference(data.features, data.offset, spec.lambda);
  const SolveOutcome out = solve(logreg_problem(data), SolverParams::anderson());
  ASSERT_EQ(out.status, Status::Solved);
  EXPECT_NEAR(out.objective, ref, 1e-3 * std::abs(ref));
  EXPECT_NEAR(logreg_objective(data, out.triple.x.head(5)), ref, 1e-3 * std::abs(ref));
}

TEST(Bench, LogisticRegressionHeavyPenalty) {
  const LogRegSpec spec{.p = 3, .q = 6, .lambda = 1e3};
  const SolveOutcome out = solve(gen_logreg(spec, 2), SolverParams::anderson());
  ASSERT_EQ(out.status, Status::Solved);
  EXPECT_NEAR(out.objective, 6.0 * std::log(2.0), 1e-3 * 6.0 * std::log(2.0));
}

TEST(Bench, GeneratorsAreDeterministic) {
  for (const GeneratorSpec& g : {GeneratorSpec{LassoSpec{}, 9}, GeneratorSpec{L1PcaSpec{}, 9},
                                 GeneratorSpec{LogRegSpec{}, 9}}) {
    EXPECT_EQ(save_problem(generate(g)), save_problem(generate(g)));
    GeneratorSpec other = g;
    other.seed = 10;
    EXPECT_NE(save_problem(generate(g)), save_problem(generate(other)));
  }
  EXPECT_THROW(generate({LassoSpec{.n = 5, .m = 2, .cond = 0.5}, 1}), Error);
}

TEST(Bench, ToySuiteEndToEnd) {
  const std::string suite_text = R"({
    "eps": 1e-4, "max_time": 20, "sigma": 10, "tau_max": 10, "tau_points": 5,
    "problems": [{"family": "lasso", "n": 20, "m": 4, "cond": 10, "mu": 0.1, "seeds": [1, 2]}],
    "solvers": [{"label": "KM", "direction": "none"}, {"label": "AA5", "direction": "aa", "memory": 5}]
  })";
  const Suite suite = parse_suite(suite_text);
  ASSERT_EQ(suite.problems.size(), 2u);
  ASSERT_EQ(suite.solvers.size(), 2u);
  const BenchResult res = run_bench(suite.problems, suite.solvers, 2);
  ASSERT_EQ(res.cells.size(), 4u);
  std::ostringstream timing;
  write_timing_csv(timing, res.cells);
  const std::string ts = timing.str();
  EXPECT_EQ(std::count(ts.begin(), ts.end(), '\n'), 5);
  EXPECT_EQ(ts.rfind("problem_id,solver,status,seconds,iters,projections,linsolves\n", 0), 0u);
  for (const auto& c : res.cells) EXPECT_EQ(c.status, "Solved");

  // profile by hand from the recorded times
  const auto taus = tau_grid(suite.tau_max, suite.tau_points);
  const auto rho = dm_profile(performance_ratios(res.table).r, taus);
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t k = 0; k < taus.size(); ++k) {
      double hits = 0;
      for (std::size_t p = 0; p < 2; ++p) {
        const double best = std::min(res.table.t[p][0], res.table.t[p][1]);
        hits += res.table.t[p][s] / best <= taus[k] ? 1 : 0;
      }
      EXPECT_EQ(rho[s][k], hits / 2.0);
    }
  }
  std::ostringstream prof, sg, svg;
  write_profile_csv(prof, res.table.solvers, taus, rho);
  EXPECT_EQ(prof.str().rfind("solver,tau,rho\n", 0), 0u);
  const auto rows = sgm_summary(res.table, 10.0);
  write_sgm_csv(sg, rows);
  EXPECT_EQ(sg.str().rfind("solver,sgm10,success_rate\n", 0), 0u);
  EXPECT_EQ(rows[0].success_rate, 1.0);
  write_profile_svg(svg, res.table.solvers, taus, rho);
  EXPECT_NE(svg.str().find("<svg"), std::string::npos);

  // same seeds, same instances
  const Suite again = parse_suite(suite_text);
  EXPECT_EQ(save_problem(again.problems[1].problem), save_problem(suite.problems[1].problem));
  EXPECT_EQ(again.problems[1].id, suite.problems[1].id);
}

TEST(Bench, SingleConfigSgmIsOwnMean) {
  TimingTable t{{"only"}, {"p1", "p2"}, {{1}, {2}}};
  const auto rows = sgm_summary(t, 10.0);
  EXPECT_NEAR(rows[0].sgm, std::sqrt(132.0) - 10.0, 1e-12);
}

TEST(Bench, FailedCellsAreRecorded) {
  std::vector<ProblemInstance> probs{{"lp", testing_support::lp_1d()}};
  SolverConfig bad{"tiny-time", SolverParams::km()};
  bad.params.max_iterations = 1;
  SolverConfig good{"aa", SolverParams::anderson()};
  const BenchResult res = run_bench(probs, {bad, good}, 1);
  EXPECT_EQ(res.cells[0].status, "TimedOut");
  EXPECT_TRUE(std::isinf(res.cells[0].seconds));
  EXPECT_EQ(res.cells[1].status, "Solved");
}

TEST(Bench, SuiteErrors) {
  EXPECT_THROW(parse_suite("{"), Error);
  EXPECT_THROW(parse_suite(R"({"problems": [], "solvers": []})"), Error);
  EXPECT_THROW(parse_suite(R"({"problems": [{"family": "nope"}], "solvers": [{}]})"), Error);
  EXPECT_THROW(parse_suite(R"({"problems": [{"family": "lasso"}], "solvers": [{"direction": "x"}]})"), Error);
}
