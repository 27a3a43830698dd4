#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "smcone/drs_operator.hpp"

namespace smcone {

inline constexpr double kTauFloor = 1e-12;

/// Relative residuals and certificate ratios. ic and uc are +inf when the
/// corresponding inner product is nonnegative; pr, dr, gap are +inf when no
/// normalised candidate exists.
struct Metrics {
  double pr = std::numeric_limits<double>::infinity();
  double dr = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  double ic = std::numeric_limits<double>::infinity();
  double uc = std::numeric_limits<double>::infinity();
};

enum class Status { Continue, Solved, Infeasible, Unbounded, TimedOut };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Continue: return "Continue";
    case Status::Solved: return "Solved";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::TimedOut: return "TimedOut";
  }
  return "Unknown";
}

/// (chi_bar, psi_bar, sigma_bar) with sigma_bar = psi_bar - 2 psi~ + psi,
/// before division by tau_bar.
inline PrimalDualTriple raw_candidate(const IterateBundle& b) {
  PrimalDualTriple t;
  t.x = b.u_bar.chi();
  t.y = b.u_bar.psi();
  t.s = b.u_bar.psi() - 2.0 * b.u_tilde.psi() + b.u.psi();
  return t;
}

/// Candidate primal-dual solution, or nullopt when tau_bar <= tau_floor.
inline std::optional<PrimalDualTriple> candidate_triple(const IterateBundle& b,
                                                        double tau_floor = kTauFloor) {
  const double tau = b.u_bar.tau();
  if (!(tau > tau_floor)) return std::nullopt;
  PrimalDualTriple t = raw_candidate(b);
  t.x /= tau;
  t.y /= tau;
  t.s /= tau;
  return t;
}

struct Optimality {
  double pr, dr, gap;
};

inline Optimality optimality_metrics(const PrimalDualTriple& t, const ConicProblem& p) {
  const double cx = p.c.dot(t.x);
  const double by = p.b.dot(t.y);
  Optimality o;
  o.pr = (p.A * t.x + t.s - p.b).norm() / (1.0 + p.b.norm());
  o.dr = (p.A.transpose() * t.y + p.c).norm() / (1.0 + p.c.norm());
  o.gap = std::abs(cx + by) / (1.0 + std::abs(cx) + std::abs(by));
  return o;
}

struct Certificates {
  double ic, uc;
};

/// Certificate ratios. Both are read with |<b, y>| and |<c, x>| in the
/// denominator so that a valid certificate gives a small positive number.
/// Homogeneous of degree zero, so the scaling of the triple does not matter.
inline Certificates certificate_metrics(const PrimalDualTriple& t, const ConicProblem& p) {
  const double inf = std::numeric_limits<double>::infinity();
  Certificates c{inf, inf};
  const double by = p.b.dot(t.y);
  if (by < 0.0) c.ic = p.b.norm() * (p.A.transpose() * t.y).norm() / -by;
  const double cx = p.c.dot(t.x);
  if (cx < 0.0) c.uc = p.c.norm() * (p.A * t.x + t.s).norm() / -cx;
  return c;
}

inline Metrics compute_metrics(const IterateBundle& b, const ConicProblem& p,
                               double tau_floor = kTauFloor) {
  Metrics mt;
  const PrimalDualTriple raw = raw_candidate(b);
  const Certificates cert = certificate_metrics(raw, p);
  mt.ic = cert.ic;
  mt.uc = cert.uc;
  if (auto t = candidate_triple(b, tau_floor)) {
    const Optimality o = optimality_metrics(*t, p);
    mt.pr = o.pr;
    mt.dr = o.dr;
    mt.gap = o.gap;
  }
  return mt;
}

/// Solved has priority, then Unbounded, then Infeasible.
inline Status classify(const Metrics& mt, double eps) {
  if (std::max({mt.pr, mt.dr, mt.gap}) < eps) return Status::Solved;
  if (mt.uc < eps) return Status::Unbounded;
  if (mt.ic < eps) return Status::Infeasible;
  return Status::Continue;
}

}  // namespace smcone
