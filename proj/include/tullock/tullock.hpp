#pragma once

// Umbrella header for the Tullock contest equilibrium toolkit.

#include "tullock/approx_solver.hpp"
#include "tullock/best_response.hpp"
#include "tullock/contest.hpp"
#include "tullock/errors.hpp"
#include "tullock/exact_solvers.hpp"
#include "tullock/hardness.hpp"
#include "tullock/io.hpp"
#include "tullock/solutions.hpp"
#include "tullock/verify.hpp"
