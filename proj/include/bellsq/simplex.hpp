#pragma once

#include <cstddef>
#include <vector>

namespace bellsq::lp {

// Outcome of the phase-1 solve for the system {A x = b, x >= 0}.
struct Phase1Result {
  // Optimal total artificial mass; the system is feasible iff this is ~0.
  double infeasibility = 0.0;
  // Structural solution (basic feasible point of the relaxed system).
  std::vector<double> x;
  // Row multipliers at termination. When the system is infeasible these
  // form a Farkas direction: y.A <= 0 componentwise and y.b > 0.
  std::vector<double> y;
  std::size_t iterations = 0;
};

// Dense phase-1 simplex with Bland's rule and an artificial variable on
// every row. Redundant rows are tolerated (their artificials simply stay
// basic at zero). `a` is row-major rows x cols; every entry of `b` must be
// nonnegative. A nonpositive iteration cap selects the default
// 10 * (total variables + rows). Throws NumericalFailure if the cap is hit.
Phase1Result phase1_feasibility(const std::vector<double>& a, std::size_t rows,
                                std::size_t cols, const std::vector<double>& b,
                                long max_iterations = 0);

}  // namespace bellsq::lp
