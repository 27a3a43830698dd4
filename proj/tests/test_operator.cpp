#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace smcone;
using oracle::Vec;

namespace {

/// Tu = u - Ru computed with dense linear algebra and the library projection.
Vec dense_T(const ConicProblem& p, const Vec& u) {
  const Vec ut = oracle::dense_resolvent(oracle::Mat(p.A), p.b, p.c, u);
  const EmbeddedPoint ub = project_embedding(EmbeddedPoint(p.n(), p.m(), Vec(2.0 * ut - u)), p.cones);
  return u - (ut - ub.vec());
}

}  // namespace

TEST(Operator, EvaluateMatchesDefinition) {
  oracle::Gen g(41);
  for (int trial = 0; trial < 10; ++trial) {
    const ConicProblem p = testing_support::random_mixed(g, 5);
    const LinearSolver ls(p, LinSysMode::Direct);
    DrsOperator op(ls, p.cones);
    const EmbeddedPoint u(p.n(), p.m(), g.normal_vec(p.n() + p.m() + 1));
    const IterateBundle b = op.evaluate(u);
    EXPECT_LE(((u.vec() - b.Ru) - dense_T(p, u.vec())).norm(), 1e-9 * (1.0 + u.vec().norm()));
    EXPECT_EQ(b.Ru, b.u_tilde.vec() - b.u_bar.vec());
    EXPECT_EQ(op.counters().linear_solves, 1);
    EXPECT_EQ(op.counters().projections, 1);
  }
}

TEST(Operator, FirmlyNonexpansive) {
  oracle::Gen g(43);
  for (int trial = 0; trial < 5; ++trial) {
    const ConicProblem p = testing_support::random_mixed(g, 6);
    const LinearSolver ls(p, LinSysMode::Direct);
    DrsOperator op(ls, p.cones);
    const Index N = p.n() + p.m() + 1;
    for (int k = 0; k < 200; ++k) {
      const EmbeddedPoint u(p.n(), p.m(), g.normal_vec(N, 3.0));
      const EmbeddedPoint v(p.n(), p.m(), g.normal_vec(N, 3.0));
      const Vec Tu = u.vec() - op.evaluate(u).Ru;
      const Vec Tv = v.vec() - op.evaluate(v).Ru;
      const double scale = std::pow(1.0 + u.vec().norm() + v.vec().norm(), 2);
      EXPECT_LE((Tu - Tv).squaredNorm(), (Tu - Tv).dot(u.vec() - v.vec()) + 1e-10 * scale);
    }
  }
}

TEST(Operator, CandidateResidualMatchesFullEvaluation) {
  oracle::Gen g(47);
  for (int trial = 0; trial < 10; ++trial) {
    const ConicProblem p = testing_support::random_mixed(g, 5);
    const LinearSolver ls(p, LinSysMode::Direct);
    DrsOperator op(ls, p.cones);
    const Index N = p.n() + p.m() + 1;
    const EmbeddedPoint u(p.n(), p.m(), g.normal_vec(N));
    const EmbeddedPoint d(p.n(), p.m(), g.normal_vec(N));
    const IterateBundle b = op.evaluate(u);
    const EmbeddedPoint dt = op.solve(d);
    const auto before = op.counters();
    double alpha = 1.0;
    for (int l = 0; l <= 10; ++l, alpha *= 0.5) {
      const IterateBundle w = op.candidate_residual(b, dt, d, alpha);
      const IterateBundle full = op.evaluate(EmbeddedPoint(p.n(), p.m(), Vec(u.vec() + alpha * d.vec())));
      EXPECT_LE((w.Ru - full.Ru).norm(), 1e-10 * (1.0 + full.Ru.norm()));
    }
    // 11 candidates (1 projection each) and 11 full evaluations
    EXPECT_EQ(op.counters().projections - before.projections, 22);
    EXPECT_EQ(op.counters().linear_solves - before.linear_solves, 11);
    const IterateBundle w0 = op.candidate_residual(b, dt, d, 0.0);
    EXPECT_LE((w0.Ru - b.Ru).norm(), 1e-15 * (1.0 + b.Ru.norm()));
  }
}

TEST(Operator, DrsRecoversLpOptimum) {
  const ConicProblem p = testing_support::lp_1d();
  const LinearSolver ls(p, LinSysMode::Direct);
  DrsOperator op(ls, p.cones);
  EmbeddedPoint u = EmbeddedPoint::initial(1, 1);
  IterateBundle b = op.evaluate(u);
  for (int k = 0; k < 100000 && b.norm_Ru > 1e-9; ++k) {
    u.vec() -= b.Ru;
    b = op.evaluate(u);
  }
  ASSERT_LE(b.norm_Ru, 1e-9);
  EXPECT_NEAR(u.chi()[0] / u.tau(), 1.0, 1e-6);
  // Fixed point: residual is tiny relative to the point.
  EXPECT_LE(b.norm_Ru, 1e-9 * (1.0 + u.vec().norm()));
}
