#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bellsq/finprob.hpp"
#include "bellsq/simplex.hpp"

using bellsq::lp::Phase1Result;
using bellsq::lp::phase1_feasibility;

namespace {

// max |Ax - b| for the returned point.
double residual(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                const std::vector<double>& b, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < cols; ++j) dot += a[i * cols + j] * x[j];
    worst = std::max(worst, std::abs(dot - b[i]));
  }
  return worst;
}

// Farkas conditions: y^T A <= 0 columnwise, y^T b > 0.
void check_farkas(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                  const std::vector<double>& b, const std::vector<double>& y) {
  for (std::size_t j = 0; j < cols; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < rows; ++i) col += y[i] * a[i * cols + j];
    CHECK(col <= 1e-9);
  }
  double rhs = 0.0;
  for (std::size_t i = 0; i < rows; ++i) rhs += y[i] * b[i];
  CHECK(rhs > 1e-9);
}

}  // namespace

TEST_CASE("feasible one-row system") {
  // x1 + x2 = 1
  std::vector<double> a{1.0, 1.0};
  std::vector<double> b{1.0};
  Phase1Result r = phase1_feasibility(a, 1, 2, b);
  CHECK(r.infeasibility <= 1e-12);
  CHECK(residual(a, 1, 2, b, r.x) <= 1e-12);
  for (double v : r.x) CHECK(v >= -1e-12);
}

TEST_CASE("contradictory rows are infeasible with a Farkas direction") {
  // x1 + x2 = 1 and x1 + x2 = 2 cannot both hold.
  std::vector<double> a{1.0, 1.0, 1.0, 1.0};
  std::vector<double> b{1.0, 2.0};
  Phase1Result r = phase1_feasibility(a, 2, 2, b);
  CHECK(r.infeasibility == doctest::Approx(1.0).epsilon(1e-9));
  check_farkas(a, 2, 2, b, r.y);
}

TEST_CASE("nonnegativity makes a signed system infeasible") {
  // x1 - x2 = 0, x1 + x2 = 1, x1 = 0.8, x2 = 0.8: mass forces x1 = x2 = 0.5.
  std::vector<double> a{1.0, -1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0};
  std::vector<double> b{0.0, 1.0, 0.8, 0.8};
  Phase1Result r = phase1_feasibility(a, 4, 2, b);
  CHECK(r.infeasibility > 0.1);
  check_farkas(a, 4, 2, b, r.y);
}

TEST_CASE("redundant rows stay feasible") {
  std::vector<double> a{1.0, 1.0, 1.0, 1.0, 1.0, 0.0};
  std::vector<double> b{1.0, 1.0, 0.25};
  Phase1Result r = phase1_feasibility(a, 3, 2, b);
  CHECK(r.infeasibility <= 1e-12);
  CHECK(residual(a, 3, 2, b, r.x) <= 1e-12);
}

TEST_CASE("input validation") {
  std::vector<double> a{1.0, 1.0};
  CHECK_THROWS_AS(phase1_feasibility(a, 1, 3, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(phase1_feasibility(a, 2, 2, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(phase1_feasibility(a, 1, 2, {-0.5}), std::invalid_argument);
}

TEST_CASE("random consistent systems solve to rounding error") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coeff(0.0, 1.0);
  std::uniform_int_distribution<int> dims(2, 8);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t rows = static_cast<std::size_t>(dims(rng));
    const std::size_t cols = static_cast<std::size_t>(dims(rng)) + rows;
    std::vector<double> a(rows * cols);
    for (double& v : a) v = coeff(rng);
    std::vector<double> xstar(cols);
    for (double& v : xstar) v = coeff(rng);
    std::vector<double> b(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) b[i] += a[i * cols + j] * xstar[j];

    Phase1Result r = phase1_feasibility(a, rows, cols, b);
    CHECK(r.infeasibility <= 1e-9);
    CHECK(residual(a, rows, cols, b, r.x) <= 1e-7);
    for (double v : r.x) CHECK(v >= -1e-9);
  }
}

TEST_CASE("iteration cap raises a numerical failure") {
  // Two pivots are required; a cap of one trips the guard.
  std::vector<double> a{1.0, 0.0, 0.0, 1.0};
  std::vector<double> b{0.5, 0.5};
  CHECK_THROWS_AS(phase1_feasibility(a, 2, 2, b, 1), bellsq::NumericalFailure);
}
