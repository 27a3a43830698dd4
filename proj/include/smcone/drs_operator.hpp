#pragma once

#include <vector>

#include "smcone/cones.hpp"
#include "smcone/linsys.hpp"

namespace smcone {

/// One evaluation of the splitting at a point:
///   u~ = (I + Q)^{-1} u,  u_bar = proj_C(2 u~ - u),  Ru = u~ - u_bar,
/// so that Tu = u - Ru. Tu itself is never formed.
struct IterateBundle {
  EmbeddedPoint u;
  EmbeddedPoint u_tilde;
  EmbeddedPoint u_bar;
  Vector Ru;
  double norm_Ru = 0.0;
};

struct OracleCounters {
  long long linear_solves = 0;
  long long projections = 0;
};

/// Fixed-point operator T and residual R = I - T of Douglas-Rachford applied
/// to 0 in Qu + N_C(u). Holds a reference to a shared LinearSolver; the
/// oracle counters are owned by this object, so use one per solve.
class DrsOperator {
 public:
  DrsOperator(const LinearSolver& linsys, const ConeSpec& cones)
      : linsys_(&linsys), blocks_(cone_blocks(cones)) {
    if (total_rows(cones) != linsys.m()) {
      throw Error(ErrorCode::DimensionMismatch, "cones do not match the linear system");
    }
  }

  IterateBundle evaluate(const EmbeddedPoint& u, const SolveControl& ctl = {}) {
    IterateBundle b;
    b.u = u;
    b.u_tilde = solve(u, ctl);
    finish(b);
    return b;
  }

  /// (I + Q)^{-1} d, counted as a linear solve.
  EmbeddedPoint solve(const EmbeddedPoint& d, const SolveControl& ctl = {}) {
    ++counters_.linear_solves;
    return linsys_->solve(d, ctl, &last_info_);
  }

  /// Residual at w = u + alpha d using w~ = u~ + alpha d~ (no linear solve,
  /// exactly one projection).
  IterateBundle candidate_residual(const IterateBundle& at, const EmbeddedPoint& d_tilde,
                                   const EmbeddedPoint& d, double alpha) {
    IterateBundle w;
    w.u = at.u;
    w.u.vec() += alpha * d.vec();
    w.u_tilde = at.u_tilde;
    w.u_tilde.vec() += alpha * d_tilde.vec();
    finish(w);
    return w;
  }

  const OracleCounters& counters() const { return counters_; }
  const LinSolveInfo& last_solve_info() const { return last_info_; }
  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  const LinearSolver& linsys() const { return *linsys_; }

 private:
  void finish(IterateBundle& b) {
    b.u_bar = b.u_tilde;
    b.u_bar.vec() *= 2.0;
    b.u_bar.vec() -= b.u.vec();
    project_embedding_inplace(b.u_bar, blocks_);
    ++counters_.projections;
    b.Ru = b.u_tilde.vec() - b.u_bar.vec();
    b.norm_Ru = b.Ru.norm();
  }

  const LinearSolver* linsys_;
  std::vector<ConeBlock> blocks_;
  OracleCounters counters_;
  LinSolveInfo last_info_;
};

}  // namespace smcone
