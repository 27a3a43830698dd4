#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smcone/directions.hpp"
#include "smcone/drs_operator.hpp"
#include "smcone/termination.hpp"

namespace smcone {

enum class DirectionKind { None, RestartedBroyden, Anderson };

inline const char* to_string(DirectionKind k) {
  switch (k) {
    case DirectionKind::None: return "none";
    case DirectionKind::RestartedBroyden: return "rb";
    case DirectionKind::Anderson: return "aa";
  }
  return "unknown";
}

enum class StepKind { K0, K1, K2, KM };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::K0: return "K0";
    case StepKind::K1: return "K1";
    case StepKind::K2: return "K2";
    case StepKind::KM: return "KM";
  }
  return "?";
}

/// One row of the progress log.
struct IterationRecord {
  long long iter = 0;
  double norm_Ru = 0.0;
  double pr = 0.0, dr = 0.0, gap = 0.0;
  StepKind step = StepKind::KM;
  double alpha = 0.0;
  int backtracks = 0;  // l_nu
  double elapsed_sec = 0.0;
};

inline std::string log_header() { return "iter,norm_Ru,pr,dr,gap,step_kind,alpha,backtracks,elapsed_sec"; }

inline std::string format_log_line(const IterationRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%lld,%.6e,%.6e,%.6e,%.6e,%s,%.6g,%d,%.6f", r.iter, r.norm_Ru,
                r.pr, r.dr, r.gap, to_string(r.step), r.alpha, r.backtracks, r.elapsed_sec);
  return buf;
}

struct SolverParams {
  double c0 = 0.1;
  double c1 = 0.99;
  double q = 0.99;
  double sigma = 0.1;
  double lambda = 1.5;
  double eps = 1e-4;
  double max_time = std::numeric_limits<double>::infinity();  // seconds
  long long max_iterations = 0;  // 0: no cap
  int max_backtracks = 10;
  DirectionKind direction = DirectionKind::Anderson;
  Index memory = 5;
  double theta_bar = 0.5;
  bool k0_enabled = true;
  LinSysMode linsys = LinSysMode::Direct;
  CgSchedule cg;
  /// Called once per iteration with the record and the iterate u^nu it describes.
  std::function<void(const IterationRecord&, const EmbeddedPoint&)> on_iteration;

  static SolverParams anderson(Index mem = 5) {
    SolverParams p;
    p.direction = DirectionKind::Anderson;
    p.memory = mem;
    p.k0_enabled = true;
    return p;
  }
  static SolverParams broyden(Index mem = 50) {
    SolverParams p;
    p.direction = DirectionKind::RestartedBroyden;
    p.memory = mem;
    p.k0_enabled = false;
    return p;
  }
  static SolverParams km(double lambda = 1.5) {
    SolverParams p;
    p.direction = DirectionKind::None;
    p.lambda = lambda;
    p.k0_enabled = false;
    return p;
  }
};

inline void validate(const SolverParams& p) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); };
  auto in_01 = [](double v) { return v >= 0.0 && v < 1.0; };
  if (!in_01(p.c0)) fail("c0 must lie in [0, 1)");
  if (!in_01(p.c1)) fail("c1 must lie in [0, 1)");
  if (!in_01(p.q)) fail("q must lie in [0, 1)");
  if (!(p.sigma > 0.0 && p.sigma < 1.0)) fail("sigma must lie in (0, 1)");
  if (!(p.lambda > 0.0 && p.lambda < 2.0)) fail("lambda must lie in (0, 2)");
  if (!(p.eps > 0.0)) fail("eps must be positive");
  if (!(p.max_time >= 0.0)) fail("max_time must be nonnegative");
  if (p.max_iterations < 0) fail("max_iterations must be nonnegative");
  if (p.max_backtracks < 0) fail("max_backtracks must be nonnegative");
  if (p.direction != DirectionKind::None && p.memory < 1) fail("memory must be >= 1");
  if (!(p.theta_bar > 0.0 && p.theta_bar < 1.0)) fail("theta_bar must lie in (0, 1)");
}

/// Oracle accounting. Every iteration starts by evaluating the residual of
/// the current iterate (one linear solve, one projection), which is also the
/// evaluation the termination test runs on. A line-search step then costs one
/// more linear solve (for d~) and 1 + l_nu projections; a K0 step costs
/// nothing further. Hence
///   linear_solves     = residual_evaluations + (k1 + k2 + km_fallbacks)
///   projections       = residual_evaluations + linesearch_projections
///   linesearch_projections = sum over line-search iterations of (1 + l_nu)
/// and residual_evaluations = iterations + 1 (the final evaluation is the one
/// that terminates). For the KM baseline, linesearch_projections = 0.
struct SolverStats {
  long long iterations = 0;
  long long k0_steps = 0;
  long long k1_steps = 0;
  long long k2_steps = 0;
  long long km_steps = 0;  // plain KM steps (baseline, or exhausted line search)
  long long backtracks = 0;
  long long residual_evaluations = 0;
  long long linesearch_projections = 0;
  long long projections = 0;
  long long linear_solves = 0;
  long long rb_breakdowns = 0;
  long long rb_restarts = 0;
  double wall_time = 0.0;
  std::vector<IterationRecord> history;
};

struct SolveOutcome {
  Status status = Status::Continue;
  /// Solved: (x, y, s). Infeasible: y scaled so <b, y> = -1. Unbounded: x, s
  /// scaled so <c, x> = -1. Unused parts are empty.
  PrimalDualTriple triple;
  Metrics metrics;
  double objective = std::numeric_limits<double>::quiet_NaN();
  EmbeddedPoint u;  // last iterate
  SolverStats stats;
};

namespace detail {

class Clock {
 public:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline SolveOutcome finish_outcome(Status status, const IterateBundle& b, const Metrics& mt,
                                   const ConicProblem& p, SolverStats stats, double tau_floor) {
  SolveOutcome out;
  out.status = status;
  out.metrics = mt;
  out.u = b.u;
  out.stats = std::move(stats);
  if (status == Status::Solved) {
    out.triple = *candidate_triple(b, tau_floor);
    out.objective = p.c.dot(out.triple.x);
  } else if (status == Status::Infeasible) {
    PrimalDualTriple raw = raw_candidate(b);
    out.triple.y = raw.y / -p.b.dot(raw.y);
  } else if (status == Status::Unbounded) {
    PrimalDualTriple raw = raw_candidate(b);
    const double cx = -p.c.dot(raw.x);
    out.triple.x = raw.x / cx;
    out.triple.s = raw.s / cx;
  } else if (auto t = candidate_triple(b, tau_floor)) {
    out.triple = *t;
    out.objective = p.c.dot(out.triple.x);
  }
  return out;
}

struct DirectionEngine {
  std::variant<std::monostate, RbState, AaState> state;

  explicit DirectionEngine(const SolverParams& prm) {
    if (prm.direction == DirectionKind::RestartedBroyden) {
      state = RbState{prm.memory, prm.theta_bar, {}, {}};
    } else if (prm.direction == DirectionKind::Anderson) {
      state = AaState{prm.memory, {}, {}};
    }
  }

  DirectionResult next(const SecantPair* pair, const Vector& Ru) {
    if (auto* rb = std::get_if<RbState>(&state)) return rb_direction(*rb, pair, Ru);
    if (auto* aa = std::get_if<AaState>(&state)) return aa_direction(*aa, pair, Ru);
    return DirectionResult{-Ru, DirectionEvent::NoPair, 0.0};
  }
};

}  // namespace detail

/// Fixed-step Krasnosel'skii-Mann iteration u <- u - lambda * Ru.
inline SolveOutcome km_solve(const ConicProblem& problem, const SolverParams& params,
                             const LinearSolver& linsys,
                             std::optional<EmbeddedPoint> u0 = std::nullopt) {
  validate(params);
  detail::Clock clock;
  DrsOperator op(linsys, problem.cones);
  EmbeddedPoint u = u0 ? *u0 : EmbeddedPoint::initial(problem.n(), problem.m());
  SolverStats stats;
  Vector warm;
  for (long long nu = 0;; ++nu) {
    SolveControl ctl;
    ctl.cg_tol = params.cg.at(nu);
    ctl.warm = &warm;
    IterateBundle b = op.evaluate(u, ctl);
    ++stats.residual_evaluations;
    const Metrics mt = compute_metrics(b, problem);
    Status status = classify(mt, params.eps);
    const double elapsed = clock.elapsed();
    if (status == Status::Continue &&
        (elapsed > params.max_time ||
         (params.max_iterations > 0 && nu >= params.max_iterations) || !b.Ru.allFinite())) {
      status = Status::TimedOut;
    }
    if (status != Status::Continue) {
      stats.iterations = nu;
      stats.linear_solves = op.counters().linear_solves;
      stats.projections = op.counters().projections;
      stats.wall_time = elapsed;
      return detail::finish_outcome(status, b, mt, problem, std::move(stats), kTauFloor);
    }
    IterationRecord rec{nu, b.norm_Ru, mt.pr, mt.dr, mt.gap, StepKind::KM, params.lambda, 0, elapsed};
    if (params.on_iteration) params.on_iteration(rec, u);
    stats.history.push_back(rec);
    ++stats.km_steps;
    u.vec() -= params.lambda * b.Ru;
  }
}

inline SolveOutcome km_solve(const ConicProblem& problem, const SolverParams& params,
                             std::optional<EmbeddedPoint> u0 = std::nullopt) {
  validate(problem);
  LinearSolver linsys(problem, params.linsys);
  return km_solve(problem, params, linsys, std::move(u0));
}

/// SuperMann iteration on the DRS residual with K0 (blind), K1 (fast) and
/// K2 (hyperplane projection) steps. With direction None this is km_solve.
inline SolveOutcome solve(const ConicProblem& problem, const SolverParams& params,
                          const LinearSolver& linsys,
                          std::optional<EmbeddedPoint> u0 = std::nullopt) {
  validate(params);
  if (params.direction == DirectionKind::None) return km_solve(problem, params, linsys, u0);

  detail::Clock clock;
  DrsOperator op(linsys, problem.cones);
  detail::DirectionEngine engine(params);
  EmbeddedPoint u = u0 ? *u0 : EmbeddedPoint::initial(problem.n(), problem.m());
  SolverStats stats;
  Vector warm_u, warm_d;

  double eta0 = 0.0, eta = 0.0, r_safe = 0.0;
  std::optional<SecantPair> pending;
  bool pending_needs_xi = false;  // after K0, xi = Ru_new - Ru_old
  Vector prev_Ru;

  for (long long nu = 0;; ++nu) {
    SolveControl ctl;
    ctl.cg_tol = params.cg.at(nu);
    ctl.warm = &warm_u;
    IterateBundle b = op.evaluate(u, ctl);
    ++stats.residual_evaluations;
    if (nu == 0) {
      eta0 = eta = r_safe = b.norm_Ru;
    }

    const Metrics mt = compute_metrics(b, problem);
    Status status = classify(mt, params.eps);
    const double elapsed = clock.elapsed();
    if (status == Status::Continue &&
        (elapsed > params.max_time ||
         (params.max_iterations > 0 && nu >= params.max_iterations) || !b.Ru.allFinite())) {
      status = Status::TimedOut;
    }
    if (status != Status::Continue) {
      stats.iterations = nu;
      stats.linear_solves = op.counters().linear_solves;
      stats.projections = op.counters().projections;
      stats.wall_time = elapsed;
      return detail::finish_outcome(status, b, mt, problem, std::move(stats), kTauFloor);
    }

    if (pending && pending_needs_xi) {
      pending->xi = b.Ru - prev_Ru;
      pending_needs_xi = false;
    }
    DirectionResult dir = engine.next(pending ? &*pending : nullptr, b.Ru);
    if (dir.event == DirectionEvent::Breakdown) ++stats.rb_breakdowns;
    if (dir.event == DirectionEvent::Restarted) ++stats.rb_restarts;
    pending.reset();
    EmbeddedPoint d(problem.n(), problem.m(), std::move(dir.d));

    IterationRecord rec{nu, b.norm_Ru, mt.pr, mt.dr, mt.gap, StepKind::K0, 1.0, 0, elapsed};

    if (params.k0_enabled && b.norm_Ru <= params.c0 * eta) {
      if (params.on_iteration) params.on_iteration(rec, u);
      stats.history.push_back(rec);
      ++stats.k0_steps;
      eta = b.norm_Ru;
      pending = SecantPair{d.vec(), Vector()};
      pending_needs_xi = true;
      prev_Ru = b.Ru;
      u.vec() += d.vec();
      continue;
    }

    SolveControl dctl;
    dctl.cg_tol = params.cg.at(nu);
    dctl.warm = &warm_d;
    const EmbeddedPoint d_tilde = op.solve(d, dctl);

    double alpha = 1.0;
    bool accepted = false;
    IterateBundle w;
    int l = 0;
    for (;; ++l) {
      w = op.candidate_residual(b, d_tilde, d, alpha);
      ++stats.linesearch_projections;
      if (w.norm_Ru == 0.0 ||
          (b.norm_Ru <= r_safe && w.norm_Ru <= params.c1 * b.norm_Ru)) {
        rec.step = StepKind::K1;
        r_safe = w.norm_Ru + std::pow(params.q, double(nu)) * eta0;
        u = w.u;
        accepted = true;
        break;
      }
      // rho = <Rw, u - Tw> with Tw = w - Rw.
      const double rho = w.Ru.dot(w.Ru - alpha * d.vec());
      if (rho >= params.sigma * b.norm_Ru * w.norm_Ru) {
        rec.step = StepKind::K2;
        u.vec() -= params.lambda * (rho / (w.norm_Ru * w.norm_Ru)) * w.Ru;
        accepted = true;
        break;
      }
      if (l == params.max_backtracks) break;
      alpha *= 0.5;
    }
    if (!accepted) {
      rec.step = StepKind::KM;
      u.vec() -= params.lambda * b.Ru;
    }
    rec.alpha = alpha;
    rec.backtracks = l;
    stats.backtracks += l;
    switch (rec.step) {
      case StepKind::K1: ++stats.k1_steps; break;
      case StepKind::K2: ++stats.k2_steps; break;
      default: ++stats.km_steps; break;
    }
    if (params.on_iteration) params.on_iteration(rec, b.u);
    stats.history.push_back(rec);
    pending = SecantPair{w.u.vec() - b.u.vec(), w.Ru - b.Ru};
  }
}

inline SolveOutcome solve(const ConicProblem& problem, const SolverParams& params,
                          std::optional<EmbeddedPoint> u0 = std::nullopt) {
  validate(problem);
  validate(params);
  LinearSolver linsys(problem, params.linsys);
  return solve(problem, params, linsys, std::move(u0));
}

}  // namespace smcone
