#pragma once

#include "smcone/error.hpp"
#include "smcone/problem.hpp"
#include "smcone/problem_io.hpp"
#include "smcone/cones.hpp"
#include "smcone/linsys.hpp"
#include "smcone/drs_operator.hpp"
#include "smcone/directions.hpp"
#include "smcone/termination.hpp"
#include "smcone/solver.hpp"
#include "smcone/bench/rng.hpp"
#include "smcone/bench/generators.hpp"
#include "smcone/bench/profile.hpp"
#include "smcone/bench/runner.hpp"
