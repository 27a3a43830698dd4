#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "smcone/problem.hpp"

namespace smcone {

enum class ConeTag { Zero, Nonneg, SecondOrder, Psd, ExpPrimal, ExpDual };

/// One cone block. `size` is the row count for Zero/Nonneg/SecondOrder, the
/// matrix order for Psd, and unused (always 3 rows) for the exponential cones.
struct ConeKind {
  ConeTag tag = ConeTag::Zero;
  Index size = 1;

  static ConeKind zero(Index n) { return {ConeTag::Zero, n}; }
  static ConeKind nonneg(Index n) { return {ConeTag::Nonneg, n}; }
  static ConeKind second_order(Index n) { return {ConeTag::SecondOrder, n}; }
  static ConeKind psd(Index order) { return {ConeTag::Psd, order}; }
  static ConeKind exp_primal() { return {ConeTag::ExpPrimal, 3}; }
  static ConeKind exp_dual() { return {ConeTag::ExpDual, 3}; }

  Index rows() const {
    switch (tag) {
      case ConeTag::Psd: return psd_rows(size);
      case ConeTag::ExpPrimal:
      case ConeTag::ExpDual: return 3;
      default: return size;
    }
  }
};

struct ConeBlock {
  ConeKind kind;
  Index offset = 0;
};

/// Blocks of a ConeSpec in canonical stacking order; empty blocks are skipped.
inline std::vector<ConeBlock> cone_blocks(const ConeSpec& k) {
  std::vector<ConeBlock> out;
  Index offset = 0;
  auto push = [&](ConeKind kind) {
    out.push_back({kind, offset});
    offset += kind.rows();
  };
  if (k.f > 0) push(ConeKind::zero(k.f));
  if (k.l > 0) push(ConeKind::nonneg(k.l));
  for (Index qi : k.q) push(ConeKind::second_order(qi));
  for (Index si : k.s) push(ConeKind::psd(si));
  for (Index i = 0; i < k.ep; ++i) push(ConeKind::exp_primal());
  for (Index i = 0; i < k.ed; ++i) push(ConeKind::exp_dual());
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric-matrix vectorization. Lower triangle, column by column, with the
// off-diagonal entries multiplied by sqrt(2) so that <vec X, vec Y> = tr(XY).
// ---------------------------------------------------------------------------

inline Index triangular_order(Index len) {
  if (len < 1) throw Error(ErrorCode::NotTriangularLength, "length must be positive");
  const auto d = static_cast<Index>(std::llround((std::sqrt(8.0 * double(len) + 1.0) - 1.0) / 2.0));
  if (psd_rows(d) != len) {
    throw Error(ErrorCode::NotTriangularLength,
                std::to_string(len) + " is not of the form d(d+1)/2");
  }
  return d;
}

inline Eigen::MatrixXd mat(const Eigen::Ref<const Vector>& x) {
  const Index d = triangular_order(x.size());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd M(d, d);
  Index k = 0;
  for (Index j = 0; j < d; ++j) {
    M(j, j) = x[k++];
    for (Index i = j + 1; i < d; ++i) {
      M(i, j) = M(j, i) = x[k++] * inv_sqrt2;
    }
  }
  return M;
}

/// Inverse of mat; reads the lower triangle only.
inline Vector vec(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::DimensionMismatch, "vec needs a square matrix");
  const Index d = M.rows();
  const double sqrt2 = std::sqrt(2.0);
  Vector x(psd_rows(d));
  Index k = 0;
  for (Index j = 0; j < d; ++j) {
    x[k++] = M(j, j);
    for (Index i = j + 1; i < d; ++i) x[k++] = M(i, j) * sqrt2;
  }
  return x;
}

namespace detail {

inline void project_soc_inplace(Eigen::Ref<Vector> x) {
  const Index n = x.size();
  const double t = x[n - 1];
  const double nv = x.head(n - 1).norm();
  if (nv <= t) return;
  if (nv <= -t) {
    x.setZero();
    return;
  }
  const double a = 0.5 * (t + nv);
  x.head(n - 1) *= a / nv;
  x[n - 1] = a;
}

inline void project_psd_inplace(Eigen::Ref<Vector> x) {
  if (x.size() == 1) {
    x[0] = std::max(x[0], 0.0);
    return;
  }
  Eigen::MatrixXd M = mat(x);
  M = 0.5 * (M + M.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const Vector lambda = es.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd& V = es.eigenvectors();
  x = vec(V * lambda.asDiagonal() * V.transpose());
}

// Exponential cone in internal coordinates (r, s, t):
//   K = cl{ (r, s, t) : s > 0, s * exp(r / s) <= t }.
// The public coordinates (x1, x2, x3) with x1 >= x2 * exp(x3 / x2) map to
// (r, s, t) = (x3, x2, x1).

struct ExpRoot {
  double r0, s0, t0;

  double y_of(double rho) const { return ((rho - 1.0) * r0 + s0) / (rho * rho - rho + 1.0); }
  double w_of(double rho) const { return (r0 - rho * s0) / (rho * rho - rho + 1.0); }

  // Zero of h gives the boundary ray (rho, 1, e^rho) carrying the projection;
  // h is increasing where the primal and polar multipliers are both positive.
  double h(double rho) const {
    const double d = rho * rho - rho + 1.0;
    const double yy = (rho - 1.0) * r0 + s0;
    const double ww = r0 - rho * s0;
    return (yy * std::exp(rho) - ww * std::exp(-rho)) / d - t0;
  }

  double dh(double rho) const {
    const double d = rho * rho - rho + 1.0;
    const double dd = 2.0 * rho - 1.0;
    const double yy = (rho - 1.0) * r0 + s0;
    const double ww = r0 - rho * s0;
    const double ep = std::exp(rho);
    const double em = std::exp(-rho);
    const double num = yy * ep - ww * em;
    const double dnum = (r0 + yy) * ep + (s0 + ww) * em;
    return (dnum * d - num * dd) / (d * d);
  }
};

constexpr double kExpRhoCap = 200.0;
constexpr double kExpTol = 1e-12;
constexpr int kExpMaxIter = 200;

inline double exp_cone_sqdist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
  return d0 * d0 + d1 * d1 + d2 * d2;
}

// Safeguarded Newton (bisection fallback) on h over the bracket where the
// multipliers are positive. Returns NaN when no usable bracket exists.
inline double exp_solve_rho(const ExpRoot& f) {
  const double inf = std::numeric_limits<double>::infinity();
  double lo = -inf, hi = inf;
  if (f.r0 > 0) lo = std::max(lo, 1.0 - f.s0 / f.r0);
  if (f.r0 < 0) hi = std::min(hi, 1.0 - f.s0 / f.r0);
  if (f.r0 == 0 && f.s0 <= 0) return std::numeric_limits<double>::quiet_NaN();
  if (f.s0 > 0) hi = std::min(hi, f.r0 / f.s0);
  if (f.s0 < 0) lo = std::max(lo, f.r0 / f.s0);
  if (f.s0 == 0 && f.r0 <= 0) return std::numeric_limits<double>::quiet_NaN();
  lo = std::max(lo, -kExpRhoCap);
  hi = std::min(hi, kExpRhoCap);
  if (!(lo < hi)) return std::numeric_limits<double>::quiet_NaN();

  double flo = f.h(lo), fhi = f.h(hi);
  if (!(flo < 0.0)) return lo;
  if (!(fhi > 0.0)) return hi;

  double rho = 0.5 * (lo + hi);
  double step_old = hi - lo;
  for (int it = 0; it < kExpMaxIter; ++it) {
    const double val = f.h(rho);
    if (val == 0.0) return rho;
    if (val < 0.0) lo = rho; else hi = rho;
    if (hi - lo <= kExpTol * std::max(1.0, std::abs(rho))) break;
    const double slope = f.dh(rho);
    double next = rho - val / slope;
    // Bisect when Newton leaves the bracket or fails to halve the last step.
    if (!(slope > 0.0) || !(next > lo && next < hi) || 2.0 * std::abs(next - rho) > step_old) {
      next = 0.5 * (lo + hi);
    } else if (std::abs(next - rho) <= kExpTol * std::max(1.0, std::abs(rho))) {
      return next;
    }
    step_old = std::abs(next - rho);
    rho = next;
  }
  return rho;
}

inline std::array<double, 3> project_exp_internal(std::array<double, 3> v) {
  const double r0 = v[0], s0 = v[1], t0 = v[2];
  // already in K
  if ((s0 > 0 && s0 * std::exp(r0 / s0) <= t0) || (r0 <= 0 && s0 == 0 && t0 >= 0)) return v;
  // in the polar cone -K*
  if ((r0 > 0 && r0 * std::exp(s0 / r0) <= -std::numbers::e * t0) || (r0 == 0 && s0 <= 0 && t0 <= 0)) {
    return {0.0, 0.0, 0.0};
  }
  const std::array<double, 3> face{std::min(r0, 0.0), 0.0, std::max(t0, 0.0)};
  if (r0 <= 0 && s0 <= 0) return face;

  const double scale = std::sqrt(r0 * r0 + s0 * s0 + t0 * t0);
  const ExpRoot f{r0 / scale, s0 / scale, t0 / scale};
  std::array<double, 3> best = face;
  double best_d = exp_cone_sqdist(face, v);
  if (std::array<double, 3> zero{0, 0, 0}; exp_cone_sqdist(zero, v) < best_d) {
    best = zero;
    best_d = exp_cone_sqdist(zero, v);
  }
  // Lift in t. Wins when the optimal ray lies beyond the rho cap.
  if (s0 > 0) {
    const std::array<double, 3> lift{r0, s0, std::max(t0, s0 * std::exp(r0 / s0))};
    if (const double dl = exp_cone_sqdist(lift, v); dl < best_d) {
      best = lift;
      best_d = dl;
    }
  }
  const double rho = exp_solve_rho(f);
  if (std::isfinite(rho)) {
    // Optimal scaling along the ray keeps the residual orthogonal to it.
    const double er = std::exp(rho);
    const double aa = rho * rho + 1.0 + er * er;
    const double y = std::max(0.0, (r0 * rho + s0 + t0 * er) / aa);
    const std::array<double, 3> p{y * rho, y, y * er};
    const double dp = exp_cone_sqdist(p, v);
    if (std::isfinite(dp) && dp <= best_d) best = p;
  }
  return best;
}

inline void project_exp_primal_inplace(Eigen::Ref<Vector> x) {
  const auto p = project_exp_internal({x[2], x[1], x[0]});
  x[0] = p[2];
  x[1] = p[1];
  x[2] = p[0];
}

// Moreau: proj onto K* is x + proj_K(-x).
inline void project_exp_dual_inplace(Eigen::Ref<Vector> x) {
  Vector neg = -x;
  project_exp_primal_inplace(neg);
  x += neg;
}

inline void check_length(const Eigen::Ref<const Vector>& x, const ConeKind& kind) {
  if (kind.size < 1) throw Error(ErrorCode::DimensionMismatch, "cone size must be >= 1");
  if (x.size() != kind.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector of length " + std::to_string(x.size()) + " for a cone with " +
                    std::to_string(kind.rows()) + " rows");
  }
}

}  // namespace detail

inline void project_cone_inplace(Eigen::Ref<Vector> x, const ConeKind& kind) {
  detail::check_length(x, kind);
  switch (kind.tag) {
    case ConeTag::Zero: x.setZero(); break;
    case ConeTag::Nonneg: x = x.cwiseMax(0.0); break;
    case ConeTag::SecondOrder: detail::project_soc_inplace(x); break;
    case ConeTag::Psd: detail::project_psd_inplace(x); break;
    case ConeTag::ExpPrimal: detail::project_exp_primal_inplace(x); break;
    case ConeTag::ExpDual: detail::project_exp_dual_inplace(x); break;
  }
}

inline void project_dual_cone_inplace(Eigen::Ref<Vector> x, const ConeKind& kind) {
  detail::check_length(x, kind);
  switch (kind.tag) {
    case ConeTag::Zero: break;  // dual of {0} is the whole space
    case ConeTag::Nonneg:
    case ConeTag::SecondOrder:
    case ConeTag::Psd: project_cone_inplace(x, kind); break;
    case ConeTag::ExpPrimal: detail::project_exp_dual_inplace(x); break;
    case ConeTag::ExpDual: detail::project_exp_primal_inplace(x); break;
  }
}

/// Euclidean projection onto the cone.
inline Vector project_cone(const Eigen::Ref<const Vector>& x, const ConeKind& kind) {
  Vector out = x;
  project_cone_inplace(out, kind);
  return out;
}

/// Euclidean projection onto the dual cone.
inline Vector project_dual_cone(const Eigen::Ref<const Vector>& x, const ConeKind& kind) {
  Vector out = x;
  project_dual_cone_inplace(out, kind);
  return out;
}

/// Projects the psi-block of an embedded point, block by block, onto K*.
inline void project_dual_blocks_inplace(Eigen::Ref<Vector> psi,
                                        const std::vector<ConeBlock>& blocks) {
  for (const ConeBlock& blk : blocks) {
    project_dual_cone_inplace(psi.segment(blk.offset, blk.kind.rows()), blk.kind);
  }
}

/// Projection onto C = R^n x K* x R_+.
inline void project_embedding_inplace(EmbeddedPoint& u, const std::vector<ConeBlock>& blocks) {
  project_dual_blocks_inplace(u.psi(), blocks);
  u.tau() = std::max(u.tau(), 0.0);
}

inline EmbeddedPoint project_embedding(const EmbeddedPoint& u, const ConeSpec& cones) {
  if (total_rows(cones) != u.m()) {
    throw Error(ErrorCode::DimensionMismatch, "cone rows do not match the psi block");
  }
  EmbeddedPoint out = u;
  project_embedding_inplace(out, cone_blocks(cones));
  return out;
}

}  // namespace smcone
