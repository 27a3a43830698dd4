#pragma once

#include <string>
#include <vector>

#include "oracles.hpp"
#include "smcone/cones.hpp"

namespace testing_support {

/// Worst observed deviation from each projection law over a random sample.
struct LawReport {
  double idempotence = 0.0;     // ||P(P v) - P v|| / (1 + ||v||)
  double nonexpansive = 0.0;    // max(0, ||P v - P w|| - ||v - w||)
  double moreau = 0.0;          // ||v - (P_K v + P_polar v)|| / (1 + ||v||)
  double orthogonality = 0.0;   // |<P_K v, P_polar v>| / (1 + ||v||^2)
  int membership_failures = 0;  // P_K v outside K, or P_K v - v outside K*
};

inline std::string cone_name(const smcone::ConeKind& k) {
  using smcone::ConeTag;
  switch (k.tag) {
    case ConeTag::Zero: return "zero";
    case ConeTag::Nonneg: return "nonneg";
    case ConeTag::SecondOrder: return "soc";
    case ConeTag::Psd: return "psd";
    case ConeTag::ExpPrimal: return "exp";
    case ConeTag::ExpDual: return "exp_dual";
  }
  return "?";
}

// Near the ends of the exponential boundary the closed-form test amplifies
// rounding by exp(|x3 / x2|), so membership there is judged by distance.
inline bool near_exp(const oracle::Vec& x, double tol) {
  return oracle::in_exp(x, tol) || (oracle::nearest_exp(x) - x).norm() <= tol;
}

// dist(y, K*) = ||P_K(-y)||.
inline bool near_exp_dual(const oracle::Vec& y, double tol) {
  return oracle::in_exp_dual(y, tol) || oracle::nearest_exp(-y).norm() <= tol;
}

/// Membership by the oracle's independent cone definitions.
inline bool oracle_in_cone(const smcone::ConeKind& k, const oracle::Vec& x, double tol) {
  using smcone::ConeTag;
  switch (k.tag) {
    case ConeTag::Zero: return x.cwiseAbs().maxCoeff() <= tol;
    case ConeTag::Nonneg: return x.minCoeff() >= -tol;
    case ConeTag::SecondOrder: return oracle::in_soc(x, tol);
    case ConeTag::Psd: return oracle::in_psd(x, tol);
    case ConeTag::ExpPrimal: return near_exp(x, tol);
    case ConeTag::ExpDual: return near_exp_dual(x, tol);
  }
  return false;
}

inline bool oracle_in_dual(const smcone::ConeKind& k, const oracle::Vec& x, double tol) {
  using smcone::ConeTag;
  switch (k.tag) {
    case ConeTag::Zero: return true;
    case ConeTag::ExpPrimal: return near_exp_dual(x, tol);
    case ConeTag::ExpDual: return near_exp(x, tol);
    default: return oracle_in_cone(k, x, tol);
  }
}

/// Random point whose scale varies over two orders of magnitude.
inline oracle::Vec random_point(oracle::Gen& g, smcone::Index rows) {
  return g.normal_vec(rows, std::pow(10.0, g.uniform(-1.0, 1.0)));
}

inline LawReport check_cone_laws(const smcone::ConeKind& kind, int samples, unsigned long long seed,
                                 double tol) {
  oracle::Gen g(seed);
  LawReport rep;
  const smcone::Index rows = kind.rows();
  for (int i = 0; i < samples; ++i) {
    const oracle::Vec v = random_point(g, rows);
    const oracle::Vec w = random_point(g, rows);
    const double scale = 1.0 + v.norm();
    const oracle::Vec pv = smcone::project_cone(v, kind);
    const oracle::Vec pw = smcone::project_cone(w, kind);
    const oracle::Vec ppv = smcone::project_cone(pv, kind);
    // Polar cone -K*, projected through the dual: P_{-K*}(v) = -P_{K*}(-v).
    const oracle::Vec polar = -smcone::project_dual_cone(-v, kind);
    rep.idempotence = std::max(rep.idempotence, (ppv - pv).norm() / scale);
    rep.nonexpansive = std::max(rep.nonexpansive, (pv - pw).norm() - (v - w).norm());
    rep.moreau = std::max(rep.moreau, (v - pv - polar).norm() / scale);
    rep.orthogonality = std::max(rep.orthogonality, std::abs(pv.dot(polar)) / (scale * scale));
    if (!oracle_in_cone(kind, pv, tol * scale) || !oracle_in_dual(kind, pv - v, tol * scale)) {
      ++rep.membership_failures;
    }
  }
  return rep;
}

inline std::vector<smcone::ConeKind> law_cones() {
  using smcone::ConeKind;
  return {ConeKind::zero(4),          ConeKind::nonneg(5),     ConeKind::second_order(1),
          ConeKind::second_order(5),  ConeKind::psd(1),        ConeKind::psd(4),
          ConeKind::exp_primal(),     ConeKind::exp_dual()};
}

}  // namespace testing_support
