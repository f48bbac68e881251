#include "bellsq/quantum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bellsq {

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

namespace {

void require_same_dim(const CMatrix& x, const CMatrix& y) {
  if (x.n != y.n) throw std::invalid_argument("matrix dimensions do not match");
}

}  // namespace

CMatrix operator+(const CMatrix& x, const CMatrix& y) {
  require_same_dim(x, y);
  CMatrix out(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] + y.a[i];
  return out;
}

CMatrix operator-(const CMatrix& x, const CMatrix& y) {
  require_same_dim(x, y);
  CMatrix out(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] - y.a[i];
  return out;
}

CMatrix operator*(const CMatrix& x, const CMatrix& y) {
  require_same_dim(x, y);
  CMatrix out(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k) {
      const Complex xik = x.at(i, k);
      if (xik == Complex{}) continue;
      for (std::size_t j = 0; j < x.n; ++j) out.at(i, j) += xik * y.at(k, j);
    }
  return out;
}

CMatrix scale(Complex c, const CMatrix& x) {
  CMatrix out(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = c * x.a[i];
  return out;
}

CMatrix dagger(const CMatrix& x) {
  CMatrix out(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j) out.at(j, i) = std::conj(x.at(i, j));
  return out;
}

Complex trace(const CMatrix& x) {
  Complex t{};
  for (std::size_t i = 0; i < x.n; ++i) t += x.at(i, i);
  return t;
}

CMatrix kron(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.n * y.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j)
      for (std::size_t k = 0; k < y.n; ++k)
        for (std::size_t l = 0; l < y.n; ++l)
          out.at(i * y.n + k, j * y.n + l) = x.at(i, j) * y.at(k, l);
  return out;
}

double max_abs_diff(const CMatrix& x, const CMatrix& y) {
  require_same_dim(x, y);
  double m = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
  return m;
}

CMatrix hermitize(const CMatrix& m, double tol) {
  const CMatrix adj = dagger(m);
  if (max_abs_diff(m, adj) > tol) throw std::invalid_argument("matrix is not Hermitian");
  return scale(0.5, m + adj);
}

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
  CMatrix a = h;
  const std::size_t n = a.n;
  double scale_norm = 0.0;
  for (const Complex& v : a.a) scale_norm += std::norm(v);
  scale_norm = std::max(1.0, std::sqrt(scale_norm));

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * std::norm(a.at(p, q));
    if (std::sqrt(off) <= 1e-14 * scale_norm) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a.at(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-18 * scale_norm) continue;
        const double app = a.at(p, p).real();
        const double aqq = a.at(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex phase = apq / mag;

        CMatrix rot = CMatrix::identity(n);
        rot.at(p, p) = c;
        rot.at(p, q) = s * phase;
        rot.at(q, p) = -s * std::conj(phase);
        rot.at(q, q) = c;
        a = dagger(rot) * a * rot;
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a.at(i, i).real();
  std::sort(eig.rbegin(), eig.rend());
  return eig;
}

CMatrix pauli_x() {
  CMatrix m(2);
  m.at(0, 1) = 1.0;
  m.at(1, 0) = 1.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2);
  m.at(0, 1) = Complex{0.0, -1.0};
  m.at(1, 0) = Complex{0.0, 1.0};
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = -1.0;
  return m;
}

double dot(const UnitVector3& u, const UnitVector3& v) {
  return u.x * v.x + u.y * v.y + u.z * v.z;
}

CMatrix spin_observable(const UnitVector3& u, double tol) {
  const double norm = std::sqrt(dot(u, u));
  if (std::abs(norm - 1.0) > tol) {
    std::ostringstream os;
    os << "direction has length " << norm << ", expected a unit vector";
    throw std::invalid_argument(os.str());
  }
  return scale(u.x, pauli_x()) + scale(u.y, pauli_y()) + scale(u.z, pauli_z());
}

Report validate_density(const CMatrix& m, double tol) {
  Report r;
  if (m.n == 0) {
    r.error("matrix is empty");
    return r;
  }
  if (max_abs_diff(m, dagger(m)) > tol) {
    r.error("matrix is not Hermitian");
    return r;
  }
  const Complex tr = trace(m);
  if (std::abs(tr - Complex{1.0, 0.0}) > tol) {
    std::ostringstream os;
    os << "trace is " << tr.real() << (tr.imag() < 0 ? "" : "+") << tr.imag() << "i, expected 1";
    r.error(os.str());
  }
  const std::vector<double> eig = hermitian_eigenvalues(scale(0.5, m + dagger(m)));
  for (double e : eig) {
    if (e < -tol) {
      std::ostringstream os;
      os << "eigenvalue " << e << " is negative";
      r.error(os.str());
    }
  }
  return r;
}

DensityMatrix make_density(const CMatrix& m, double tol) {
  Report r = validate_density(m, tol);
  if (!r.ok()) throw std::invalid_argument("not a density matrix:\n" + r.summary());
  return DensityMatrix{hermitize(m, tol)};
}

std::pair<CMatrix, CMatrix> pm_projectors(const CMatrix& m, double tol) {
  const CMatrix h = hermitize(m, tol);
  const CMatrix id = CMatrix::identity(h.n);
  if (max_abs_diff(h * h, id) > tol)
    throw std::invalid_argument("observable does not square to the identity");
  if (max_abs_diff(h, id) <= tol || max_abs_diff(h, scale(-1.0, id)) <= tol)
    throw std::invalid_argument("degenerate observable: one eigenprojector would vanish");
  return {scale(0.5, id + h), scale(0.5, id - h)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, TraceSide keep) {
  if (rho.rho.n != 4) throw std::invalid_argument("partial trace expects a two-qubit state");
  CMatrix out(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        if (keep == TraceSide::First) {
          out.at(i, j) += rho.rho.at(i * 2 + k, j * 2 + k);
        } else {
          out.at(i, j) += rho.rho.at(k * 2 + i, k * 2 + j);
        }
      }
  return make_density(out);
}

DensityMatrix epr_state() {
  CMatrix m(4);
  m.at(1, 1) = 0.5;
  m.at(1, 2) = -0.5;
  m.at(2, 1) = -0.5;
  m.at(2, 2) = 0.5;
  return make_density(m);
}

DensityMatrix max_mixed_state() {
  return make_density(scale(0.25, CMatrix::identity(4)));
}

namespace {

double real_weight(const Complex& w, const char* what, double tol) {
  if (std::abs(w.imag()) > tol) {
    std::ostringstream os;
    os << what << " has imaginary part " << w.imag();
    throw std::invalid_argument(os.str());
  }
  if (w.real() < -tol) {
    std::ostringstream os;
    os << what << " is " << w.real() << ", negative beyond tolerance";
    throw std::invalid_argument(os.str());
  }
  return std::max(0.0, w.real());
}

}  // namespace

FinSpace born_marginal(const DensityMatrix& rho, const std::pair<CMatrix, CMatrix>& proj,
                       std::vector<std::string> labels, double tol) {
  if (labels.size() != 2) throw std::invalid_argument("expected two outcome labels");
  FinSpace out;
  out.labels = std::move(labels);
  out.probs = {real_weight(trace(rho.rho * proj.first), "outcome weight", tol),
               real_weight(trace(rho.rho * proj.second), "outcome weight", tol)};
  return out;
}

JointSpace born_joint(const DensityMatrix& rho, const std::pair<CMatrix, CMatrix>& proj_left,
                      const std::pair<CMatrix, CMatrix>& proj_right,
                      std::vector<std::string> left_labels,
                      std::vector<std::string> right_labels, double tol) {
  if (left_labels.size() != 2 || right_labels.size() != 2)
    throw std::invalid_argument("expected two outcome labels per side");
  if (rho.rho.n != proj_left.first.n * proj_right.first.n)
    throw std::invalid_argument("state dimension does not match the measurement pair");
  const std::array<const CMatrix*, 2> pl{&proj_left.first, &proj_left.second};
  const std::array<const CMatrix*, 2> pr{&proj_right.first, &proj_right.second};
  JointSpace j;
  j.left.labels = std::move(left_labels);
  j.right.labels = std::move(right_labels);
  j.table.resize(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      j.table[i * 2 + k] =
          real_weight(trace(rho.rho * kron(*pl[i], *pr[k])), "joint outcome weight", tol);
  auto [left, right] = marginals(j);
  j.left.probs = left.probs;
  j.right.probs = right.probs;
  return j;
}

BellSquare build_quantum_bell_square(const DensityMatrix& rho, const UnitVector3& uq,
                                     const UnitVector3& ur, const UnitVector3& us,
                                     const UnitVector3& ut) {
  if (rho.rho.n != 4) throw std::invalid_argument("expected a two-qubit state");
  const auto prq = pm_projectors(spin_observable(uq));
  const auto prr = pm_projectors(spin_observable(ur));
  const auto prs = pm_projectors(spin_observable(us));
  const auto prt = pm_projectors(spin_observable(ut));
  const DensityMatrix first = partial_trace(rho, TraceSide::First);
  const DensityMatrix second = partial_trace(rho, TraceSide::Second);

  BellSquare bs;
  bs.q = born_marginal(first, prq, {"q1", "q2"});
  bs.r = born_marginal(first, prr, {"r1", "r2"});
  bs.s = born_marginal(second, prs, {"s1", "s2"});
  bs.t = born_marginal(second, prt, {"t1", "t2"});
  bs.qs = born_joint(rho, prq, prs, bs.q.labels, bs.s.labels);
  bs.rs = born_joint(rho, prr, prs, bs.r.labels, bs.s.labels);
  bs.rt = born_joint(rho, prr, prt, bs.r.labels, bs.t.labels);
  bs.qt = born_joint(rho, prq, prt, bs.q.labels, bs.t.labels);
  return bs;
}

}  // namespace bellsq
