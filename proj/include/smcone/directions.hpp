#pragma once

#include <cmath>
#include <deque>
#include <vector>

#include <Eigen/SVD>

#include "smcone/problem.hpp"

namespace smcone {

/// Secant information from a trial point: z = w - u, xi = Rw - Ru.
struct SecantPair {
  Vector z;
  Vector xi;
};

enum class DirectionEvent {
  NoPair,     // no new secant pair was supplied
  Updated,    // pair absorbed into the buffers
  Restarted,  // RB only: buffers were full, flushed, then the pair stored
  Breakdown,  // RB only: tiny <z, z~>, update skipped, d = -Ru
};

struct DirectionResult {
  Vector d;
  DirectionEvent event = DirectionEvent::NoPair;
  /// RB: gamma * theta + (1 - theta) of the applied update.
  double powell_value = 0.0;
};

/// Powell's modification factor, with sgn(0) = 1.
inline double theta(double gamma, double theta_bar) {
  if (std::abs(gamma) >= theta_bar) return 1.0;
  const double sgn = gamma >= 0.0 ? 1.0 : -1.0;
  return (1.0 - sgn * theta_bar) / (1.0 - gamma);
}

// ---------------------------------------------------------------------------
// Restarted Broyden
// ---------------------------------------------------------------------------

/// Limited-memory Broyden state. The implicit inverse Jacobian estimate is
///   H = (I + z~_k z_k') ... (I + z~_1 z_1'),
/// applied right to left, where each stored z~_i already carries the
/// 1 / <z_i, H_i xi~_i> scaling, so the sweep needs no extra normalisation.
struct RbState {
  Index mem = 50;
  double theta_bar = 0.5;
  std::vector<Vector> Z;
  std::vector<Vector> Z_tilde;

  Index stored() const { return static_cast<Index>(Z.size()); }

  /// H v using the stored pairs.
  Vector apply_h(const Eigen::Ref<const Vector>& v) const {
    Vector out = v;
    for (std::size_t i = 0; i < Z.size(); ++i) out += Z[i].dot(out) * Z_tilde[i];
    return out;
  }
};

inline constexpr double kRbBreakdownTol = 1e-14;

inline DirectionResult rb_direction(RbState& st, const SecantPair* pair,
                                    const Eigen::Ref<const Vector>& Ru) {
  DirectionResult res;
  res.d = -Ru;
  for (std::size_t i = 0; i < st.Z.size(); ++i) res.d += st.Z[i].dot(res.d) * st.Z_tilde[i];
  if (pair == nullptr) return res;

  const Vector& z = pair->z;
  Vector zt = st.apply_h(pair->xi);
  const double zz = z.squaredNorm();
  if (!(zz > 0.0) || !std::isfinite(zz)) {
    res.d = -Ru;
    res.event = DirectionEvent::Breakdown;
    return res;
  }
  const double gamma = zt.dot(z) / zz;
  const double th = theta(gamma, st.theta_bar);
  zt = (1.0 - th) * z + th * zt;
  const double inner = z.dot(zt);
  if (!(std::abs(inner) >= kRbBreakdownTol * std::sqrt(zz) * zt.norm()) || inner == 0.0) {
    res.d = -Ru;
    res.event = DirectionEvent::Breakdown;
    return res;
  }
  zt = (z - zt) / inner;
  res.d += z.dot(res.d) * zt;
  res.powell_value = gamma * th + (1.0 - th);

  if (st.stored() >= st.mem) {
    st.Z.clear();
    st.Z_tilde.clear();
    res.event = DirectionEvent::Restarted;
  } else {
    res.event = DirectionEvent::Updated;
  }
  st.Z.push_back(z);
  st.Z_tilde.push_back(std::move(zt));
  return res;
}

// ---------------------------------------------------------------------------
// Anderson acceleration
// ---------------------------------------------------------------------------

struct AaState {
  Index mem = 5;
  std::deque<Vector> Z;   // oldest first
  std::deque<Vector> Xi;

  Index stored() const { return static_cast<Index>(Z.size()); }
};

inline constexpr double kAaSvdThreshold = 1e-12;

/// Minimum-norm least-squares solution of Xi t = r (singular values below
/// kAaSvdThreshold * sigma_max are dropped).
inline Vector aa_coefficients(const Eigen::Ref<const Eigen::MatrixXd>& Xi,
                              const Eigen::Ref<const Vector>& r) {
  if (Xi.cols() == 0) return Vector();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kAaSvdThreshold);
  return svd.solve(r);
}

struct AaResult : DirectionResult {
  Vector t;
};

/// d = -Ru - (Z - Xi) t with t = argmin ||Xi t - Ru||.
inline AaResult aa_direction(AaState& st, const SecantPair* pair,
                             const Eigen::Ref<const Vector>& Ru) {
  AaResult res;
  if (pair != nullptr) {
    if (st.stored() >= st.mem) {
      st.Z.pop_front();
      st.Xi.pop_front();
    }
    st.Z.push_back(pair->z);
    st.Xi.push_back(pair->xi);
    res.event = DirectionEvent::Updated;
  }
  res.d = -Ru;
  const Index k = st.stored();
  if (k == 0) return res;
  Eigen::MatrixXd Xi(Ru.size(), k);
  for (Index j = 0; j < k; ++j) Xi.col(j) = st.Xi[std::size_t(j)];
  res.t = aa_coefficients(Xi, Ru);
  for (Index j = 0; j < k; ++j) {
    res.d -= res.t[j] * (st.Z[std::size_t(j)] - st.Xi[std::size_t(j)]);
  }
  if (!res.d.allFinite()) res.d = -Ru;
  return res;
}

}  // namespace smcone
