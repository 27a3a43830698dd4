// smcone: solve a conic problem file, generate benchmark problems, or run a
// benchmark suite.
//
//   smcone solve problem.json [--direction aa --memory 5 --eps 1e-4 ...]
//   smcone gen lasso --n 200 --m 40 --cond 1e4 --mu 0.1 --seed 1 -o p.json
//   smcone bench suite.json -o outdir [--jobs 4]
//
// Exit codes: 0 definitive answer (or success), 2 time limit hit, 1 input error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "smcone/smcone.hpp"

namespace {

constexpr int kReportSchemaVersion = 1;

struct SolveOptions {
  std::string input;
  std::string direction = "aa";
  std::optional<long long> memory;  // default depends on direction
  double eps = 1e-4;
  double max_time = 0.0;  // 0: unlimited
  long long max_iters = 0;
  double c0 = 0.1;
  double c1 = 0.99;
  double q = 0.99;
  double sigma = 0.1;
  double lambda = 1.5;
  double theta_bar = 0.5;
  int max_backtracks = 10;
  std::optional<bool> k0;  // default depends on direction
  std::string linsys = "direct";
  std::string format = "json";
  long long log_every = 0;
};

struct GenOptions {
  std::string family;
  std::string output;
  std::uint64_t seed = 0;
  long long n = 20, m = 4, d = 5, p = 5, q = 10;
  double cond = 10.0, mu = 0.1, lambda = 0.1, offset = 0.0;
};

struct BenchOptions {
  std::string suite;
  std::string outdir = ".";
  unsigned jobs = 1;
  bool svg = true;
};

smcone::SolverParams to_params(const SolveOptions& o) {
  using namespace smcone;
  SolverParams p;
  switch (bench::parse_direction(o.direction)) {
    case DirectionKind::None: p = SolverParams::km(); break;
    case DirectionKind::RestartedBroyden: p = SolverParams::broyden(); break;
    case DirectionKind::Anderson: p = SolverParams::anderson(); break;
  }
  if (o.memory) p.memory = *o.memory;
  if (o.k0) p.k0_enabled = *o.k0;
  p.eps = o.eps;
  p.max_time = o.max_time > 0.0 ? o.max_time : std::numeric_limits<double>::infinity();
  p.max_iterations = o.max_iters;
  p.c0 = o.c0;
  p.c1 = o.c1;
  p.q = o.q;
  p.sigma = o.sigma;
  p.lambda = o.lambda;
  p.theta_bar = o.theta_bar;
  p.max_backtracks = o.max_backtracks;
  if (o.linsys == "indirect") {
    p.linsys = LinSysMode::Indirect;
  } else if (o.linsys != "direct") {
    throw Error(ErrorCode::InvalidParameter, "linsys must be direct or indirect");
  }
  validate(p);
  return p;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;  // JSON has no inf or nan
}

int run_solve(const SolveOptions& o) {
  using namespace smcone;
  SolverParams params = to_params(o);
  const ConicProblem problem = read_problem_file(o.input);
  if (o.log_every > 0) {
    std::cerr << log_header() << '\n';
    params.on_iteration = [every = o.log_every](const IterationRecord& r, const EmbeddedPoint&) {
      if (r.iter % every == 0) std::cerr << format_log_line(r) << '\n';
    };
  }
  const SolveOutcome out = solve(problem, params);
  const auto& s = out.stats;
  if (o.format == "csv") {
    std::cout << "status,objective,pr,dr,gap,ic,uc,iterations,projections,linsolves,seconds\n"
              << to_string(out.status) << ',' << num(out.objective) << ',' << num(out.metrics.pr)
              << ',' << num(out.metrics.dr) << ',' << num(out.metrics.gap) << ','
              << num(out.metrics.ic) << ',' << num(out.metrics.uc) << ',' << s.iterations << ','
              << s.projections << ',' << s.linear_solves << ',' << num(s.wall_time) << '\n';
  } else {
    nlohmann::json rep;
    rep["schema_version"] = kReportSchemaVersion;
    rep["status"] = to_string(out.status);
    rep["objective"] = json_number(out.objective);
    rep["pr"] = json_number(out.metrics.pr);
    rep["dr"] = json_number(out.metrics.dr);
    rep["gap"] = json_number(out.metrics.gap);
    rep["ic"] = json_number(out.metrics.ic);
    rep["uc"] = json_number(out.metrics.uc);
    rep["iterations"] = s.iterations;
    rep["projections"] = s.projections;
    rep["linsolves"] = s.linear_solves;
    rep["seconds"] = s.wall_time;
    std::cout << rep.dump(2) << '\n';
  }
  return out.status == Status::TimedOut ? 2 : 0;
}

int run_gen(const GenOptions& o) {
  using namespace smcone::bench;
  nlohmann::json j;
  j["family"] = o.family;
  j["n"] = o.n;
  j["m"] = o.m;
  j["cond"] = o.cond;
  j["mu"] = o.mu;
  j["d"] = o.d;
  j["lambda"] = o.lambda;
  j["p"] = o.p;
  j["q"] = o.q;
  j["offset"] = o.offset;
  const GeneratorSpec g = parse_generator(j, o.seed);
  const std::string text = smcone::save_problem(generate(g));
  if (o.output.empty() || o.output == "-") {
    std::cout << text << '\n';
  } else {
    std::ofstream f(o.output);
    if (!f || !(f << text << '\n')) {
      throw smcone::Error(smcone::ErrorCode::ParseError, "cannot write " + o.output);
    }
  }
  return 0;
}

int run_bench_cmd(const BenchOptions& o) {
  using namespace smcone::bench;
  namespace fs = std::filesystem;
  std::ifstream in(o.suite);
  if (!in) throw smcone::Error(smcone::ErrorCode::ParseError, "cannot read " + o.suite);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string base = fs::path(o.suite).parent_path().string();
  const Suite suite = parse_suite(text, base.empty() ? "." : base);
  fs::create_directories(o.outdir);

  std::cerr << "bench: " << suite.problems.size() << " problems x " << suite.solvers.size()
            << " solvers, jobs=" << o.jobs << '\n';
  const BenchResult res = run_bench(suite.problems, suite.solvers, o.jobs);

  const auto taus = tau_grid(suite.tau_max, suite.tau_points);
  const RatioTable ratios = performance_ratios(res.table);
  const auto rho = dm_profile(ratios.r, taus);
  const fs::path dir(o.outdir);
  {
    std::ofstream f(dir / "timing.csv");
    write_timing_csv(f, res.cells);
  }
  {
    std::ofstream f(dir / "profile.csv");
    write_profile_csv(f, res.table.solvers, taus, rho);
  }
  {
    std::ofstream f(dir / "sgm.csv");
    write_sgm_csv(f, sgm_summary(res.table, suite.sigma));
  }
  if (o.svg) {
    std::ofstream f(dir / "profile.svg");
    write_profile_svg(f, res.table.solvers, taus, rho);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order conic solver with SuperMann acceleration"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all subcommand help");

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Solve a problem file and print a report");
  solve->add_option("file", so.input, "Problem file (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--direction", so.direction, "Direction: aa | rb | none (plain KM)")
      ->envname("SOLVER_DIRECTION")
      ->check(CLI::IsMember({"aa", "anderson", "rb", "broyden", "none", "km"}))
      ->capture_default_str();
  solve->add_option("--memory", so.memory, "Direction memory [aa: 5, rb: 50]")
      ->envname("SOLVER_MEMORY");
  solve->add_option("--eps", so.eps, "Termination tolerance")
      ->envname("SOLVER_EPS")
      ->capture_default_str();
  solve->add_option("--max-time", so.max_time, "Time limit in seconds, 0 = none")
      ->envname("SOLVER_MAX_TIME")
      ->capture_default_str();
  solve->add_option("--max-iters", so.max_iters, "Iteration cap, 0 = none")
      ->envname("SOLVER_MAX_ITERS")
      ->capture_default_str();
  solve->add_option("--c0", so.c0, "Blind-step decrease factor")
      ->envname("SOLVER_C0")
      ->capture_default_str();
  solve->add_option("--c1", so.c1, "Educated-step decrease factor")
      ->envname("SOLVER_C1")
      ->capture_default_str();
  solve->add_option("--q", so.q, "Safeguard decay factor")
      ->envname("SOLVER_Q")
      ->capture_default_str();
  solve->add_option("--sigma", so.sigma, "Line-search sufficient decrease")
      ->envname("SOLVER_SIGMA")
      ->capture_default_str();
  solve->add_option("--lambda", so.lambda, "Relaxation parameter in (0, 2)")
      ->envname("SOLVER_LAMBDA")
      ->capture_default_str();
  solve->add_option("--theta-bar", so.theta_bar, "Broyden Powell threshold")
      ->envname("SOLVER_THETA_BAR")
      ->capture_default_str();
  solve->add_option("--max-backtracks", so.max_backtracks, "Line-search halvings per iteration")
      ->envname("SOLVER_MAX_BACKTRACKS")
      ->capture_default_str();
  solve->add_option("--k0", so.k0, "Enable blind steps (true/false) [aa: true, rb: false]")
      ->envname("SOLVER_K0");
  solve->add_option("--linsys", so.linsys, "Linear system mode: direct | indirect")
      ->envname("SOLVER_LINSYS")
      ->check(CLI::IsMember({"direct", "indirect"}))
      ->capture_default_str();
  solve->add_option("--format", so.format, "Report format: json | csv")
      ->envname("SOLVER_FORMAT")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  solve->add_option("--log-every", so.log_every,
                    "Print a CSV progress line to stderr every N iterations, 0 = off")
      ->envname("SOLVER_LOG_EVERY")
      ->capture_default_str();

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "Generate a benchmark problem file");
  gen->add_option("family", go.family, "lasso | pca | logreg")
      ->required()
      ->check(CLI::IsMember({"lasso", "pca", "l1pca", "logreg"}));
  gen->add_option("-o,--output", go.output, "Output file, '-' for stdout")->capture_default_str();
  gen->add_option("--seed", go.seed, "Generator seed")->capture_default_str();
  gen->add_option("--n", go.n, "lasso: variables")->capture_default_str();
  gen->add_option("--m", go.m, "lasso: observations")->capture_default_str();
  gen->add_option("--cond", go.cond, "lasso: condition number of A")->capture_default_str();
  gen->add_option("--mu", go.mu, "lasso: l1 weight")->capture_default_str();
  gen->add_option("--d", go.d, "pca: matrix order")->capture_default_str();
  gen->add_option("--lambda", go.lambda, "pca, logreg: l1 weight")->capture_default_str();
  gen->add_option("--p", go.p, "logreg: features")->capture_default_str();
  gen->add_option("--q", go.q, "logreg: data points")->capture_default_str();
  gen->add_option("--offset", go.offset, "logreg: intercept")->capture_default_str();

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite and write CSV artifacts");
  bench->add_option("suite", bo.suite, "Suite file (JSON)")->required()->check(CLI::ExistingFile);
  bench->add_option("-o,--output", bo.outdir, "Output directory")->capture_default_str();
  bench->add_option("--jobs", bo.jobs, "Concurrent solves")
      ->envname("SOLVER_JOBS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_flag("!--no-svg", bo.svg, "Skip the SVG profile plot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) return run_solve(so);
    if (*gen) return run_gen(go);
    if (*bench) return run_bench_cmd(bo);
  } catch (const smcone::Error& e) {
    std::cerr << "error: " << smcone::to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
