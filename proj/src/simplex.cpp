#include "bellsq/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bellsq/finprob.hpp"

namespace bellsq::lp {

namespace {
// Entries smaller than this are treated as zero during pivot selection.
constexpr double kPivotTol = 1e-11;
}

Phase1Result phase1_feasibility(const std::vector<double>& a, std::size_t rows,
                                std::size_t cols, const std::vector<double>& b,
                                long max_iterations) {
  if (a.size() != rows * cols || b.size() != rows)
    throw std::invalid_argument("phase1_feasibility: shape mismatch");
  for (double v : b)
    if (v < 0.0) throw std::invalid_argument("phase1_feasibility: negative right-hand side");

  const std::size_t total = cols + rows;  // structural then artificial columns
  if (max_iterations <= 0) max_iterations = 10 * static_cast<long>(total + rows);

  // Tableau rows hold B^-1 [A | I], rhs holds B^-1 b.
  std::vector<double> t(rows * total, 0.0);
  std::vector<double> rhs(b);
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[i * total + j] = a[i * cols + j];
    t[i * total + cols + i] = 1.0;
    basis[i] = cols + i;
  }

  // Reduced costs r_j = c_j - y.A_j for the objective min sum(artificials).
  // With the all-artificial start basis, y = 1 on every row.
  std::vector<double> red(total, 0.0);
  double objective = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    double colsum = 0.0;
    for (std::size_t i = 0; i < rows; ++i) colsum += a[i * cols + j];
    red[j] = -colsum;
  }
  for (double v : b) objective += v;

  Phase1Result result;
  for (;;) {
    // Bland: entering column is the lowest index with a negative reduced cost.
    std::size_t enter = total;
    for (std::size_t j = 0; j < total; ++j)
      if (red[j] < -kPivotTol) {
        enter = j;
        break;
      }
    if (enter == total) break;  // optimal

    // Ratio test; ties resolved toward the smallest basic variable index.
    std::size_t leave = rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      double aij = t[i * total + enter];
      if (aij <= kPivotTol) continue;
      double ratio = rhs[i] / aij;
      if (ratio < best_ratio - kPivotTol ||
          (std::abs(ratio - best_ratio) <= kPivotTol &&
           (leave == rows || basis[i] < basis[leave]))) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave == rows)
      throw NumericalFailure("phase-1 column unbounded; inconsistent tableau");

    if (++result.iterations > static_cast<std::size_t>(max_iterations))
      throw NumericalFailure("numerical failure: simplex iteration cap exceeded");

    // Pivot on (leave, enter).
    const double piv = t[leave * total + enter];
    for (std::size_t j = 0; j < total; ++j) t[leave * total + j] /= piv;
    rhs[leave] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave) continue;
      double f = t[i * total + enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < total; ++j) t[i * total + j] -= f * t[leave * total + j];
      rhs[i] -= f * rhs[leave];
      if (rhs[i] < 0.0 && rhs[i] > -kPivotTol) rhs[i] = 0.0;
    }
    double f = red[enter];
    for (std::size_t j = 0; j < total; ++j) red[j] -= f * t[leave * total + j];
    basis[leave] = enter;
    // The objective is the artificial mass still in the basis; recomputing it
    // directly avoids drift in an incremental update.
    objective = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
      if (basis[i] >= cols) objective += rhs[i];
  }

  result.infeasibility = objective;
  result.x.assign(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    if (basis[i] < cols) result.x[basis[i]] = rhs[i];
  // Artificial column j has c_j = 1 and A_j = e_j, so y_j = 1 - r_{cols+j}.
  result.y.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) result.y[i] = 1.0 - red[cols + i];
  return result;
}

}  // namespace bellsq::lp
