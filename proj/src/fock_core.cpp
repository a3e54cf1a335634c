#include "fockpulse/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "fockpulse/errors.hpp"

namespace fockpulse {

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) {
    throw InvalidDimension("state vector needs dim >= 1");
  }
}

StateVector StateVector::fock(Index dim, Index n) {
  if (dim < 1 || n < 0 || n >= dim) {
    throw InvalidDimension("Fock level " + std::to_string(n) +
                           " outside basis of dim " + std::to_string(dim));
  }
  CVector v = CVector::Zero(dim);
  v[n] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::padded(Index dim) const {
  if (dim <= this->dim()) return *this;
  CVector v = CVector::Zero(dim);
  v.head(this->dim()) = amplitudes_;
  return StateVector(std::move(v));
}

double StateVector::population_above(Index level) const {
  double sum = 0.0;
  for (Index n = level + 1; n < dim(); ++n) sum += std::norm(amplitudes_[n]);
  return sum;
}

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw InvalidDimension("density matrix must be square with dim >= 1");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_jk|^2 for Hermitian rho
  return entries_.squaredNorm();
}

double DensityMatrix::hermiticity_error() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  CMatrix sym = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::population_above(Index level) const {
  double sum = 0.0;
  for (Index n = level + 1; n < dim(); ++n) sum += entries_(n, n).real();
  return sum;
}

double DensityMatrix::mean_photon_number() const {
  double sum = 0.0;
  for (Index n = 0; n < dim(); ++n) sum += static_cast<double>(n) * entries_(n, n).real();
  return sum;
}

double DensityMatrix::overlap(const StateVector& psi) const {
  if (psi.dim() > dim()) {
    throw InvalidDimension("state larger than density matrix basis");
  }
  const CVector v = psi.padded(dim()).amplitudes();
  return (v.adjoint() * entries_ * v)(0, 0).real();
}

CMatrix build_hamiltonian(const HamiltonianParams& p) {
  if (p.dim < 1) throw InvalidDimension("Hamiltonian needs dim >= 1");
  if (!(p.kerr > 0.0)) throw ContractViolation("Kerr strength must be positive");
  if (p.amplitude < 0.0) throw ContractViolation("drive amplitude must be >= 0");
  if (p.amplitude > 0.0 && p.dim < 2) {
    throw InvalidDimension("a driven Hamiltonian needs dim >= 2");
  }

  CMatrix h = CMatrix::Zero(p.dim, p.dim);
  for (Index n = 0; n < p.dim; ++n) {
    const double nd = static_cast<double>(n);
    h(n, n) = p.kerr * nd * (nd - 1.0) - p.detuning * nd;
  }
  const Complex drive = p.amplitude * std::polar(1.0, p.phase);
  for (Index n = 0; n + 1 < p.dim; ++n) {
    const double root = std::sqrt(static_cast<double>(n + 1));
    h(n + 1, n) = drive * root;
    h(n, n + 1) = std::conj(drive) * root;
  }
  return h;
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Index j = 0; j < m.rows(); ++j) {
    for (Index k = j; k < m.cols(); ++k) {
      if (std::abs(m(j, k) - std::conj(m(k, j))) > tol) return false;
    }
  }
  return true;
}

CMatrix propagator(const CMatrix& hamiltonian, double duration) {
  if (!is_hermitian(hamiltonian)) {
    throw ContractViolation("propagator requires a Hermitian Hamiltonian");
  }
  if (!(duration >= 0.0)) throw ContractViolation("duration must be >= 0");
  const Index dim = hamiltonian.rows();
  if (duration == 0.0) return CMatrix::Identity(dim, dim);
  const CMatrix generator = (-kI * duration) * hamiltonian;
  return generator.exp();
}

StateVector propagate_const(const StateVector& state, const CMatrix& hamiltonian,
                            double duration) {
  if (hamiltonian.rows() != state.dim()) {
    throw InvalidDimension("Hamiltonian and state dimensions differ");
  }
  return StateVector(propagator(hamiltonian, duration) * state.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.norm() == 0.0 || b.norm() == 0.0) {
    throw InvalidState("fidelity of a zero-norm state");
  }
  const Index dim = std::max(a.dim(), b.dim());
  const Complex inner =
      a.padded(dim).amplitudes().dot(b.padded(dim).amplitudes());
  return std::clamp(std::norm(inner), 0.0, 1.0);
}

CVector kerr_phase_compensation(int pulse_index, double kerr, double duration,
                                Index dim) {
  if (pulse_index < 0) throw ContractViolation("pulse index must be >= 0");
  if (!(duration >= 0.0)) throw ContractViolation("duration must be >= 0");
  if (dim < 1) throw InvalidDimension("compensation needs dim >= 1");
  CVector phases(dim);
  for (Index n = 0; n < dim; ++n) {
    const double shift = static_cast<double>(n - pulse_index);
    phases[n] = std::polar(1.0, kerr * shift * (shift - 1.0) * duration);
  }
  return phases;
}

}  // namespace fockpulse
