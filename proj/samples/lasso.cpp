// Solve one random LASSO instance with plain KM and with Anderson directions
// and compare oracle counts.
//
//   sample_lasso [n] [m] [cond] [seed]

#include <cstdio>
#include <cstdlib>

#include "smcone/smcone.hpp"

int main(int argc, char** argv) {
  using namespace smcone;
  bench::LassoSpec spec;
  spec.n = argc > 1 ? std::atol(argv[1]) : 100;
  spec.m = argc > 2 ? std::atol(argv[2]) : 20;
  spec.cond = argc > 3 ? std::atof(argv[3]) : 1e3;
  spec.mu = 0.1;
  const std::uint64_t seed = argc > 4 ? std::strtoull(argv[4], nullptr, 10) : 1;

  const bench::LassoData data = bench::make_lasso_data(spec, seed);
  const ConicProblem problem = bench::lasso_problem(data);

  std::printf("%-8s %-8s %12s %8s %12s %10s\n", "solver", "status", "objective", "iters",
              "projections", "seconds");
  const SolverParams configs[] = {SolverParams::km(1.5), SolverParams::anderson(5),
                                  SolverParams::broyden(50)};
  const char* names[] = {"KM", "AA(5)", "RB(50)"};
  for (int i = 0; i < 3; ++i) {
    const SolveOutcome out = solve(problem, configs[i]);
    const Vector x = out.triple.x.head(spec.n);
    std::printf("%-8s %-8s %12.6f %8lld %12lld %10.3f\n", names[i], to_string(out.status),
                bench::lasso_objective(data, x), out.stats.iterations, out.stats.projections,
                out.stats.wall_time);
  }
  return 0;
}
