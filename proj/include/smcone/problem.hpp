#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "smcone/error.hpp"

namespace smcone {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Cone blocks, stacked in this fixed order: zero, nonnegative, second-order,
/// PSD, primal exponential, dual exponential.
struct ConeSpec {
  Index f = 0;
  Index l = 0;
  std::vector<Index> q;
  std::vector<Index> s;
  Index ep = 0;
  Index ed = 0;

  bool operator==(const ConeSpec&) const = default;
};

inline Index psd_rows(Index order) { return order * (order + 1) / 2; }

inline Index total_rows(const ConeSpec& k) {
  Index rows = k.f + k.l + 3 * k.ep + 3 * k.ed;
  for (Index qi : k.q) rows += qi;
  for (Index si : k.s) rows += psd_rows(si);
  return rows;
}

/// minimize <c, x>  subject to  b - A x = s,  s in K.
struct ConicProblem {
  SparseMatrix A;
  Vector b;
  Vector c;
  ConeSpec cones;

  Index n() const { return A.cols(); }
  Index m() const { return A.rows(); }
};

/// HSDE iterate u = (chi, psi, tau) of length n + m + 1, stored contiguously.
class EmbeddedPoint {
 public:
  EmbeddedPoint() = default;
  EmbeddedPoint(Index n, Index m) : n_(n), data_(Vector::Zero(n + m + 1)) {}
  EmbeddedPoint(Index n, Index m, Vector data) : n_(n), data_(std::move(data)) {
    if (data_.size() != n + m + 1) {
      throw Error(ErrorCode::DimensionMismatch,
                  "embedded point has length " + std::to_string(data_.size()) + ", expected " +
                      std::to_string(n + m + 1));
    }
  }

  /// u0 = (0, 0, 1).
  static EmbeddedPoint initial(Index n, Index m) {
    EmbeddedPoint u(n, m);
    u.tau() = 1.0;
    return u;
  }

  Index n() const { return n_; }
  Index m() const { return data_.size() - n_ - 1; }
  Index size() const { return data_.size(); }

  auto chi() { return data_.head(n_); }
  auto chi() const { return data_.head(n_); }
  auto psi() { return data_.segment(n_, m()); }
  auto psi() const { return data_.segment(n_, m()); }
  double& tau() { return data_[data_.size() - 1]; }
  double tau() const { return data_[data_.size() - 1]; }

  Vector& vec() { return data_; }
  const Vector& vec() const { return data_; }

 private:
  Index n_ = 0;
  Vector data_;
};

struct PrimalDualTriple {
  Vector x;
  Vector y;
  Vector s;
};

namespace detail {

inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline bool all_finite(const SparseMatrix& A) {
  for (Index k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      if (!std::isfinite(it.value())) return false;
    }
  }
  return true;
}

}  // namespace detail

inline void validate_cones(const ConeSpec& k) {
  if (k.f < 0 || k.l < 0 || k.ep < 0 || k.ed < 0) {
    throw Error(ErrorCode::DimensionMismatch, "cone counts must be nonnegative");
  }
  for (Index qi : k.q) {
    if (qi < 1) throw Error(ErrorCode::DimensionMismatch, "second-order cone size must be >= 1");
  }
  for (Index si : k.s) {
    if (si < 1) throw Error(ErrorCode::DimensionMismatch, "PSD cone order must be >= 1");
  }
}

/// Returns the problem unchanged when all invariants hold; throws otherwise.
inline const ConicProblem& validate(const ConicProblem& p) {
  if (p.n() < 1 || p.m() < 1) {
    throw Error(ErrorCode::EmptyProblem, "problem needs n >= 1 and m >= 1");
  }
  validate_cones(p.cones);
  if (p.b.size() != p.m()) {
    throw Error(ErrorCode::DimensionMismatch,
                "b has length " + std::to_string(p.b.size()) + ", A has " +
                    std::to_string(p.m()) + " rows");
  }
  if (p.c.size() != p.n()) {
    throw Error(ErrorCode::DimensionMismatch,
                "c has length " + std::to_string(p.c.size()) + ", A has " +
                    std::to_string(p.n()) + " columns");
  }
  if (total_rows(p.cones) != p.m()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cones cover " + std::to_string(total_rows(p.cones)) + " rows, m = " +
                    std::to_string(p.m()));
  }
  if (!detail::all_finite(p.b) || !detail::all_finite(p.c) || !detail::all_finite(p.A)) {
    throw Error(ErrorCode::NonFiniteData, "problem data contains NaN or Inf");
  }
  return p;
}

/// Qu with Q = [[0, A', c], [-A, 0, b], [-c', -b', 0]], computed matrix-free.
inline Vector apply_q(const ConicProblem& p, const EmbeddedPoint& u) {
  if (u.n() != p.n() || u.m() != p.m()) {
    throw Error(ErrorCode::DimensionMismatch, "embedded point does not match problem");
  }
  EmbeddedPoint out(p.n(), p.m());
  const double tau = u.tau();
  out.chi().noalias() = p.A.transpose() * u.psi();
  out.chi() += tau * p.c;
  out.psi().noalias() = -(p.A * u.chi());
  out.psi() += tau * p.b;
  out.tau() = -p.c.dot(u.chi()) - p.b.dot(u.psi());
  return std::move(out.vec());
}

/// Builds a column-compressed matrix with sorted row indices from triplets.
inline SparseMatrix make_sparse(Index rows, Index cols,
                                const std::vector<Eigen::Triplet<double, int>>& triplets) {
  SparseMatrix A(rows, cols);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

}  // namespace smcone
