#pragma once

#include "oracles.hpp"
#include "smcone/smcone.hpp"

namespace testing_support {

inline smcone::ConicProblem make_problem(const oracle::Mat& A, const oracle::Vec& b,
                                         const oracle::Vec& c, smcone::ConeSpec cones) {
  smcone::ConicProblem p;
  p.A = A.sparseView();
  p.A.makeCompressed();
  p.b = b;
  p.c = c;
  p.cones = std::move(cones);
  return p;
}

/// min x  s.t.  x >= 1.
inline smcone::ConicProblem lp_1d() {
  return make_problem(oracle::Mat::Constant(1, 1, -1.0), oracle::Vec::Constant(1, -1.0),
                      oracle::Vec::Constant(1, 1.0), {.l = 1});
}

/// x <= -1 and x >= 1.
inline smcone::ConicProblem lp_infeasible() {
  oracle::Mat A(2, 1);
  A << 1.0, -1.0;
  return make_problem(A, oracle::Vec::Constant(2, -1.0), oracle::Vec::Constant(1, 1.0), {.l = 2});
}

/// min -x  s.t.  x >= 0.
inline smcone::ConicProblem lp_unbounded() {
  return make_problem(oracle::Mat::Constant(1, 1, -1.0), oracle::Vec::Zero(1),
                      oracle::Vec::Constant(1, -1.0), {.l = 1});
}

/// A mixed-cone random problem with every cone family present.
inline smcone::ConicProblem random_mixed(oracle::Gen& g, int n) {
  smcone::ConeSpec k;
  k.f = g.integer(0, 2);
  k.l = g.integer(1, 4);
  k.q = {g.integer(2, 4)};
  k.s = {g.integer(1, 3)};
  k.ep = g.integer(0, 2);
  k.ed = g.integer(0, 1);
  const auto m = smcone::total_rows(k);
  return make_problem(g.sparse_mat(m, n, 0.6), g.normal_vec(m), g.normal_vec(n), k);
}

/// min c'x  s.t.  -1 <= x <= 1,  G x <= h  (h > 0 so x = 0 is interior).
struct BoxLp {
  oracle::Mat G;
  oracle::Vec h;
  oracle::Vec c;
};

inline BoxLp random_box_lp(oracle::Gen& g, int n, int extra) {
  BoxLp lp;
  lp.G = oracle::Mat::Zero(2 * n + extra, n);
  lp.h = oracle::Vec::Ones(2 * n + extra);
  for (int i = 0; i < n; ++i) {
    lp.G(i, i) = 1.0;
    lp.G(n + i, i) = -1.0;
  }
  for (int r = 0; r < extra; ++r) {
    lp.G.row(2 * n + r) = g.normal_vec(n).transpose();
    lp.h[2 * n + r] = g.uniform(0.5, 1.5);
  }
  lp.c = g.normal_vec(n);
  return lp;
}

/// As a cone program: s = h - G x >= 0.
inline smcone::ConicProblem box_lp_problem(const BoxLp& lp) {
  return make_problem(lp.G, lp.h, lp.c, {.l = lp.G.rows()});
}

/// min tr(C Z)  s.t.  tr Z = 1, Z psd; optimum lambda_min(C).
inline smcone::ConicProblem psd_trace_problem(const oracle::Mat& C) {
  const int d = int(C.rows());
  const int D = d * (d + 1) / 2;
  oracle::Mat A = oracle::Mat::Zero(1 + D, D);
  oracle::Vec b = oracle::Vec::Zero(1 + D);
  b[0] = 1.0;
  const oracle::Vec diag = oracle::pack_sym(oracle::Mat::Identity(d, d));
  for (int k = 0; k < D; ++k) {
    if (diag[k] == 1.0) A(0, k) = 1.0;
    A(1 + k, k) = -1.0;
  }
  return make_problem(A, b, oracle::pack_sym(C), {.f = 1, .s = {d}});
}

}  // namespace testing_support
