#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include "smcone/problem.hpp"

namespace smcone {

enum class LinSysMode { Direct, Indirect };

/// Decreasing CG tolerance: tol_k = max(floor, eps_cg / (k + 1)^exponent).
struct CgSchedule {
  double eps_cg = 1e-3;
  double floor = 1e-9;
  double exponent = 1.5;

  double at(long long iteration) const {
    return std::max(floor, eps_cg / std::pow(double(iteration) + 1.0, exponent));
  }
};

struct SolveControl {
  /// Relative CG tolerance (Indirect mode only).
  double cg_tol = 1e-9;
  /// Optional warm start for the CG unknown; updated in place with the result.
  Vector* warm = nullptr;
  /// 0 selects max(100, 2n).
  Index cg_max_iter = 0;
};

struct LinSolveInfo {
  Index cg_iterations = 0;
  /// Set when CG stopped on its iteration cap; the returned iterate is the last one.
  bool cg_max_iterations = false;
};

/// Applies (I + Q)^{-1} for a fixed problem. With h = (c, b) and
/// M = [[I, A'], [-A, I]], block elimination gives
///   (M + h h') p = u_xy - u_tau h,   tau~ = u_tau + <h, p>,
/// and Sherman-Morrison reduces the first system to solves with M using the
/// cached g = M^{-1} h. Direct mode factors K = [[I, A'], [A, -I]] once.
class LinearSolver {
 public:
  LinearSolver(const ConicProblem& p, LinSysMode mode) : mode_(mode), A_(p.A) {
    A_.makeCompressed();
    h_.resize(p.n() + p.m());
    h_ << p.c, p.b;
    if (mode_ == LinSysMode::Direct) factorize();
    SolveControl ctl;
    ctl.cg_tol = 1e-12;
    g_ = solve_m(h_, ctl);
    denom_ = 1.0 + h_.dot(g_);
    if (!(denom_ > 0.0) || !std::isfinite(denom_)) {
      throw Error(ErrorCode::FactorizationFailure, "1 + <h, M^{-1} h> is not positive");
    }
  }

  LinSysMode mode() const { return mode_; }
  Index n() const { return A_.cols(); }
  Index m() const { return A_.rows(); }
  const Vector& g() const { return g_; }
  const Vector& h() const { return h_; }
  double denom() const { return denom_; }
  /// Number of numeric factorizations performed (1 in Direct mode, 0 otherwise).
  int factorizations() const { return factorizations_; }

  /// z with M z = r.
  Vector solve_m(const Eigen::Ref<const Vector>& r, const SolveControl& ctl = {},
                 LinSolveInfo* info = nullptr) const {
    const Index n = this->n(), m = this->m();
    if (r.size() != n + m) throw Error(ErrorCode::DimensionMismatch, "solve_m: wrong length");
    Vector z(n + m);
    if (mode_ == LinSysMode::Direct) {
      Vector rhs(n + m);
      rhs << r.head(n), -r.tail(m);
      z = ldl_->solve(rhs);
      if (info) *info = {};
      return z;
    }
    // z2 = r2 + A z1 and (I + A'A) z1 = r1 - A' r2.
    const Vector rhs = r.head(n) - A_.transpose() * r.tail(m);
    Vector z1 = (ctl.warm && ctl.warm->size() == n) ? *ctl.warm : Vector::Zero(n);
    const double target = ctl.cg_tol * (1.0 + r.norm());
    const Index max_iter = ctl.cg_max_iter > 0 ? ctl.cg_max_iter : std::max<Index>(100, 2 * n);
    LinSolveInfo local = conjugate_gradient(rhs, z1, target, max_iter);
    if (ctl.warm) *ctl.warm = z1;
    z.head(n) = z1;
    z.tail(m) = r.tail(m) + A_ * z1;
    if (info) *info = local;
    return z;
  }

  /// u~ = (I + Q)^{-1} u.
  EmbeddedPoint solve(const EmbeddedPoint& u, const SolveControl& ctl = {},
                      LinSolveInfo* info = nullptr) const {
    if (u.n() != n() || u.m() != m()) {
      throw Error(ErrorCode::DimensionMismatch, "solve: point does not match problem");
    }
    const Index nm = n() + m();
    const double tau = u.tau();
    const Vector r = u.vec().head(nm) - tau * h_;
    const Vector q = solve_m(r, ctl, info);
    EmbeddedPoint out(n(), m());
    out.vec().head(nm) = q - g_ * (h_.dot(q) / denom_);
    out.tau() = tau + h_.dot(out.vec().head(nm));
    return out;
  }

 private:
  using Ldl = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

  void factorize() {
    const Index n = this->n(), m = this->m();
    std::vector<Eigen::Triplet<double, int>> t;
    t.reserve(static_cast<std::size_t>(n + m + A_.nonZeros()));
    for (Index j = 0; j < n; ++j) t.emplace_back(int(j), int(j), 1.0);
    for (Index j = 0; j < A_.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(A_, j); it; ++it) {
        t.emplace_back(int(n + it.row()), int(j), it.value());
      }
    }
    for (Index i = 0; i < m; ++i) t.emplace_back(int(n + i), int(n + i), -1.0);
    SparseMatrix K = make_sparse(n + m, n + m, t);
    auto ldl = std::make_shared<Ldl>();
    ldl->compute(K);
    ++factorizations_;
    if (ldl->info() != Eigen::Success) {
      throw Error(ErrorCode::FactorizationFailure, "LDL' of the quasi-definite KKT matrix failed");
    }
    ldl_ = std::move(ldl);
  }

  // CG on (I + A'A) z = rhs, matrix-free.
  LinSolveInfo conjugate_gradient(const Vector& rhs, Vector& z, double target,
                                  Index max_iter) const {
    LinSolveInfo info;
    auto apply = [this](const Vector& v) -> Vector {
      return v + A_.transpose() * (A_ * v);
    };
    Vector res = rhs - apply(z);
    double rr = res.squaredNorm();
    if (std::sqrt(rr) <= target) return info;
    Vector dir = res;
    for (Index k = 0; k < max_iter; ++k) {
      const Vector Ad = apply(dir);
      const double alpha = rr / dir.dot(Ad);
      z += alpha * dir;
      res -= alpha * Ad;
      const double rr_next = res.squaredNorm();
      info.cg_iterations = k + 1;
      if (std::sqrt(rr_next) <= target) return info;
      dir = res + (rr_next / rr) * dir;
      rr = rr_next;
    }
    info.cg_max_iterations = true;
    return info;
  }

  LinSysMode mode_;
  SparseMatrix A_;
  Vector h_;
  Vector g_;
  double denom_ = 1.0;
  std::shared_ptr<const Ldl> ldl_;
  int factorizations_ = 0;
};

}  // namespace smcone
