#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "smcone/bench/generators.hpp"
#include "smcone/bench/profile.hpp"
#include "smcone/problem_io.hpp"
#include "smcone/solver.hpp"

namespace smcone::bench {

struct SolverConfig {
  std::string label;
  SolverParams params;
};

struct ProblemInstance {
  std::string id;
  ConicProblem problem;
};

struct BenchCell {
  std::string problem_id;
  std::string solver;
  std::string status;
  double seconds = kInf;  // +inf unless the solver gave a definitive answer
  long long iterations = 0;
  long long projections = 0;
  long long linear_solves = 0;
};

struct BenchResult {
  std::vector<BenchCell> cells;  // problem-major order
  TimingTable table;
};

inline bool is_success(Status s) {
  return s == Status::Solved || s == Status::Infeasible || s == Status::Unbounded;
}

/// Runs every (problem, solver) cell; at most `jobs` solves run at once.
/// A cell that throws is recorded with status "Error" and never aborts the run.
inline BenchResult run_bench(const std::vector<ProblemInstance>& problems,
                             const std::vector<SolverConfig>& solvers, unsigned jobs = 1) {
  const std::size_t ns = solvers.size();
  const std::size_t total = problems.size() * ns;
  std::vector<BenchCell> cells(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const ProblemInstance& inst = problems[idx / ns];
      const SolverConfig& cfg = solvers[idx % ns];
      BenchCell cell;
      cell.problem_id = inst.id;
      cell.solver = cfg.label;
      const auto start = std::chrono::steady_clock::now();
      try {
        SolveOutcome out = solve(inst.problem, cfg.params);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        cell.status = to_string(out.status);
        if (is_success(out.status)) cell.seconds = secs;
        cell.iterations = out.stats.iterations;
        cell.projections = out.stats.projections;
        cell.linear_solves = out.stats.linear_solves;
      } catch (const std::exception&) {
        cell.status = "Error";
      }
      cells[idx] = std::move(cell);
    }
  };

  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BenchResult res;
  for (const auto& cfg : solvers) res.table.solvers.push_back(cfg.label);
  for (std::size_t p = 0; p < problems.size(); ++p) {
    res.table.problems.push_back(problems[p].id);
    std::vector<double> row;
    for (std::size_t s = 0; s < ns; ++s) row.push_back(cells[p * ns + s].seconds);
    res.table.t.push_back(std::move(row));
  }
  res.cells = std::move(cells);
  return res;
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace detail

inline void write_timing_csv(std::ostream& os, const std::vector<BenchCell>& cells) {
  os << "problem_id,solver,status,seconds,iters,projections,linsolves\n";
  for (const auto& c : cells) {
    os << detail::csv_field(c.problem_id) << ',' << detail::csv_field(c.solver) << ',' << c.status
       << ',' << detail::num(c.seconds) << ',' << c.iterations << ',' << c.projections << ','
       << c.linear_solves << '\n';
  }
}

inline void write_profile_csv(std::ostream& os, const std::vector<std::string>& solvers,
                              const std::vector<double>& taus,
                              const std::vector<std::vector<double>>& rho) {
  os << "solver,tau,rho\n";
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    for (std::size_t k = 0; k < taus.size(); ++k) {
      os << detail::csv_field(solvers[s]) << ',' << detail::num(taus[k]) << ','
         << detail::num(rho[s][k]) << '\n';
    }
  }
}

struct SgmRow {
  std::string solver;
  double sgm = kInf;  // +inf when every run failed
  double success_rate = 0.0;
};

inline std::vector<SgmRow> sgm_summary(const TimingTable& table, double sigma) {
  std::vector<SgmRow> rows;
  for (std::size_t s = 0; s < table.solvers.size(); ++s) {
    std::vector<double> times;
    std::size_t ok = 0;
    for (const auto& row : table.t) {
      times.push_back(row[s]);
      ok += std::isfinite(row[s]) ? 1 : 0;
    }
    SgmRow r;
    r.solver = table.solvers[s];
    r.success_rate = times.empty() ? 0.0 : double(ok) / double(times.size());
    if (ok > 0) r.sgm = sgm(times, sigma);
    rows.push_back(r);
  }
  return rows;
}

inline void write_sgm_csv(std::ostream& os, const std::vector<SgmRow>& rows) {
  os << "solver,sgm10,success_rate\n";
  for (const auto& r : rows) {
    os << detail::csv_field(r.solver) << ',' << detail::num(r.sgm) << ','
       << detail::num(r.success_rate) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Suite documents
// ---------------------------------------------------------------------------

// {"eps": 1e-4, "max_time": 60, "sigma": 10, "tau_max": 100, "tau_points": 60,
//  "problems": [{"family": "lasso", "n": 200, "m": 40, "cond": 1e4, "mu": 0.1,
//                "seeds": [1, 2]},
//               {"family": "pca", "d": 10, "lambda": 0.5, "seeds": [1]},
//               {"family": "logreg", "p": 5, "q": 10, "lambda": 1, "seeds": [1]},
//               {"file": "problem.json", "id": "mine"}],
//  "solvers": [{"label": "KM", "direction": "none", "lambda": 1.5},
//              {"label": "AA5", "direction": "aa", "memory": 5}]}
struct Suite {
  double eps = 1e-4;
  double max_time = 60.0;
  double sigma = 10.0;
  double tau_max = 100.0;
  std::size_t tau_points = 60;
  std::vector<ProblemInstance> problems;
  std::vector<SolverConfig> solvers;
};

inline DirectionKind parse_direction(const std::string& name) {
  if (name == "none" || name == "km") return DirectionKind::None;
  if (name == "rb" || name == "broyden") return DirectionKind::RestartedBroyden;
  if (name == "aa" || name == "anderson") return DirectionKind::Anderson;
  throw Error(ErrorCode::InvalidParameter, "unknown direction \"" + name + "\"");
}

inline std::string format_id(const char* fmt, double a, double b, double c, double d,
                             std::uint64_t seed) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return std::string(buf) + "_s" + std::to_string(seed);
}

inline std::string problem_id(const GeneratorSpec& g) {
  if (auto* s = std::get_if<LassoSpec>(&g.family)) {
    return format_id("lasso_n%.0f_m%.0f_k%g_mu%g", double(s->n), double(s->m), s->cond, s->mu,
                     g.seed);
  }
  if (auto* s = std::get_if<L1PcaSpec>(&g.family)) {
    return format_id("pca_d%.0f_l%g%.0s%.0s", double(s->d), s->lambda, 0.0, 0.0, g.seed);
  }
  const auto& s = std::get<LogRegSpec>(g.family);
  return format_id("logreg_p%.0f_q%.0f_l%g%.0s", double(s.p), double(s.q), s.lambda, 0.0, g.seed);
}

/// Reads a generator family description ("family" plus its parameters).
inline GeneratorSpec parse_generator(const nlohmann::json& j, std::uint64_t seed) {
  const std::string family = j.at("family").get<std::string>();
  GeneratorSpec g;
  g.seed = seed;
  if (family == "lasso") {
    LassoSpec s;
    s.n = j.value("n", s.n);
    s.m = j.value("m", (s.n + 4) / 5);
    s.cond = j.value("cond", s.cond);
    s.mu = j.value("mu", s.mu);
    g.family = s;
  } else if (family == "pca" || family == "l1pca") {
    L1PcaSpec s;
    s.d = j.value("d", s.d);
    s.lambda = j.value("lambda", s.lambda);
    g.family = s;
  } else if (family == "logreg") {
    LogRegSpec s;
    s.p = j.value("p", s.p);
    s.q = j.value("q", s.q);
    s.lambda = j.value("lambda", s.lambda);
    s.offset = j.value("offset", s.offset);
    g.family = s;
  } else {
    throw Error(ErrorCode::InvalidParameter, "unknown family \"" + family + "\"");
  }
  validate(g);
  return g;
}

inline SolverConfig parse_solver_config(const nlohmann::json& j, double eps, double max_time) {
  SolverConfig cfg;
  const DirectionKind dir = parse_direction(j.value("direction", std::string("aa")));
  switch (dir) {
    case DirectionKind::None: cfg.params = SolverParams::km(); break;
    case DirectionKind::RestartedBroyden: cfg.params = SolverParams::broyden(); break;
    case DirectionKind::Anderson: cfg.params = SolverParams::anderson(); break;
  }
  SolverParams& p = cfg.params;
  p.eps = eps;
  p.max_time = max_time;
  p.memory = j.value("memory", p.memory);
  p.lambda = j.value("lambda", p.lambda);
  p.c0 = j.value("c0", p.c0);
  p.c1 = j.value("c1", p.c1);
  p.q = j.value("q", p.q);
  p.sigma = j.value("sigma", p.sigma);
  p.theta_bar = j.value("theta_bar", p.theta_bar);
  p.k0_enabled = j.value("k0", p.k0_enabled);
  p.max_backtracks = j.value("max_backtracks", p.max_backtracks);
  if (j.value("linsys", std::string("direct")) == "indirect") p.linsys = LinSysMode::Indirect;
  validate(p);
  cfg.label = j.value("label", std::string(to_string(dir)) +
                                   (dir == DirectionKind::None ? "" : std::to_string(p.memory)));
  return cfg;
}

/// Parses a suite; relative problem file paths resolve against base_dir.
inline Suite parse_suite(std::string_view text, const std::string& base_dir = ".") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("suite: ") + e.what());
  }
  Suite suite;
  try {
    suite.eps = doc.value("eps", suite.eps);
    suite.max_time = doc.value("max_time", suite.max_time);
    suite.sigma = doc.value("sigma", suite.sigma);
    suite.tau_max = doc.value("tau_max", suite.tau_max);
    suite.tau_points = doc.value("tau_points", suite.tau_points);
    for (const auto& pj : doc.at("problems")) {
      if (pj.contains("file")) {
        std::string path = pj.at("file").get<std::string>();
        if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
        suite.problems.push_back({pj.value("id", path), read_problem_file(path)});
        continue;
      }
      std::vector<std::uint64_t> seeds = pj.value("seeds", std::vector<std::uint64_t>{0});
      for (std::uint64_t seed : seeds) {
        const GeneratorSpec g = parse_generator(pj, seed);
        suite.problems.push_back({problem_id(g), generate(g)});
      }
    }
    for (const auto& sj : doc.at("solvers")) {
      suite.solvers.push_back(parse_solver_config(sj, suite.eps, suite.max_time));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("suite: ") + e.what());
  }
  if (suite.problems.empty() || suite.solvers.empty()) {
    throw Error(ErrorCode::ParseError, "suite needs at least one problem and one solver");
  }
  return suite;
}

}  // namespace smcone::bench
