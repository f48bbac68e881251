#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bellsq/diagram.hpp"
#include "bellsq/finprob.hpp"

namespace bellsq {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Small and square in every use here
// (2x2 observables, 4x4 two-qubit states).
struct CMatrix {
  std::size_t n = 0;
  std::vector<Complex> a;

  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : n(dim), a(dim * dim) {}

  static CMatrix identity(std::size_t dim);

  Complex& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

CMatrix operator+(const CMatrix& x, const CMatrix& y);
CMatrix operator-(const CMatrix& x, const CMatrix& y);
CMatrix operator*(const CMatrix& x, const CMatrix& y);
CMatrix scale(Complex c, const CMatrix& x);
CMatrix dagger(const CMatrix& x);
Complex trace(const CMatrix& x);
CMatrix kron(const CMatrix& x, const CMatrix& y);
double max_abs_diff(const CMatrix& x, const CMatrix& y);

// (M + M^dagger)/2, provided M is already Hermitian within tol; throws
// otherwise. Used to strip rounding-level asymmetry before eigensolves.
CMatrix hermitize(const CMatrix& m, double tol = kDefaultTol);

// Eigenvalues of a Hermitian matrix, descending. Cyclic Jacobi with complex
// rotations; intended for the tiny dimensions used here.
std::vector<double> hermitian_eigenvalues(const CMatrix& h);

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

struct UnitVector3 {
  double x = 0.0, y = 0.0, z = 1.0;
};

double dot(const UnitVector3& u, const UnitVector3& v);

// u.x*sigma_x + u.y*sigma_y + u.z*sigma_z; throws when u is not unit length
// within tol. Hermitian with eigenvalues exactly +-1 up to rounding.
CMatrix spin_observable(const UnitVector3& u, double tol = kDefaultTol);

// A validated quantum state: Hermitian, unit trace, positive semidefinite
// within tolerance.
struct DensityMatrix {
  CMatrix rho;
};

Report validate_density(const CMatrix& m, double tol = kDefaultTol);
DensityMatrix make_density(const CMatrix& m, double tol = kDefaultTol);

// Eigenprojectors ((1 + M)/2, (1 - M)/2) of a +-1-valued observable. M must
// square to the identity within tol and must not be +-identity (which would
// make one projector zero).
std::pair<CMatrix, CMatrix> pm_projectors(const CMatrix& m, double tol = kDefaultTol);

enum class TraceSide { First, Second };

// Reduced state of one qubit of a two-qubit state (4x4 only).
DensityMatrix partial_trace(const DensityMatrix& rho, TraceSide keep);

// The singlet state of two qubits.
DensityMatrix epr_state();
// The maximally mixed two-qubit state.
DensityMatrix max_mixed_state();

// Outcome distribution of a single +-1 measurement on a one-qubit state.
// Index 0 is the +1 outcome.
FinSpace born_marginal(const DensityMatrix& rho, const std::pair<CMatrix, CMatrix>& proj,
                       std::vector<std::string> labels, double tol = kDefaultTol);

// Outcome distribution of a pair of +-1 measurements on the two halves of a
// two-qubit state: cell (i,j) carries trace(rho (P_i tensor P_j)). Row/column
// index 0 is the +1 outcome on that side. The stored side distributions are
// the row and column sums.
JointSpace born_joint(const DensityMatrix& rho, const std::pair<CMatrix, CMatrix>& proj_left,
                      const std::pair<CMatrix, CMatrix>& proj_right,
                      std::vector<std::string> left_labels,
                      std::vector<std::string> right_labels, double tol = kDefaultTol);

// The full square of statistics of a two-qubit state under spin measurements
// along uq/ur on the first qubit and us/ut on the second. Corner outcome
// labels are q1,q2 / r1,r2 / s1,s2 / t1,t2 with index 0 (first label) the +1
// outcome; corner distributions come from the reduced states, which the
// joints' marginals reproduce.
BellSquare build_quantum_bell_square(const DensityMatrix& rho, const UnitVector3& uq,
                                     const UnitVector3& ur, const UnitVector3& us,
                                     const UnitVector3& ut);

}  // namespace bellsq
