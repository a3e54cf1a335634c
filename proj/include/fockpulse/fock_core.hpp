#pragma once

// Truncated Fock-space numerics: states, density matrices, the driven Kerr
// Hamiltonian and its piecewise-constant propagator.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace fockpulse {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Pure state over |0>..|dim-1>.
class StateVector {
 public:
  explicit StateVector(CVector amplitudes);

  static StateVector fock(Index dim, Index n);
  static StateVector vacuum(Index dim) { return fock(dim, 0); }

  Index dim() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Index n) const { return amplitudes_[n]; }

  double norm() const { return amplitudes_.norm(); }

  // Zero-extends to a larger basis; never truncates.
  StateVector padded(Index dim) const;

  // Total population in levels strictly above `level`.
  double population_above(Index level) const;

 private:
  CVector amplitudes_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries);

  static DensityMatrix pure(const StateVector& psi);

  Index dim() const { return entries_.rows(); }
  const CMatrix& entries() const { return entries_; }

  Complex trace() const { return entries_.trace(); }
  double purity() const;
  // max |rho - rho^dagger| over entries
  double hermiticity_error() const;
  double min_eigenvalue() const;
  double population_above(Index level) const;
  // Photon-number expectation tr(n rho).
  double mean_photon_number() const;
  // <psi|rho|psi>, with psi zero-padded to dim() if shorter.
  double overlap(const StateVector& psi) const;

 private:
  CMatrix entries_;
};

// Drive and cavity parameters of one rectangular pulse, in units where the
// Kerr strength is the natural rate. `detuning` is the laser-minus-cavity
// detuning, so the value 2*m*kerr brings |m> and |m+1> into resonance.
struct HamiltonianParams {
  double detuning = 0.0;
  double kerr = 1.0;
  double amplitude = 0.0;
  double phase = 0.0;
  Index dim = 1;
};

// H = kerr*n(n-1) - detuning*n + amplitude*(e^{i phase} a^dagger + h.c.)
// in the rotating frame of the drive. Conjugate-symmetric by construction.
CMatrix build_hamiltonian(const HamiltonianParams& params);

bool is_hermitian(const CMatrix& m, double tol = 1e-12);

// exp(-i H t) by scaling and squaring. Requires Hermitian H and t >= 0.
CMatrix propagator(const CMatrix& hamiltonian, double duration);

StateVector propagate_const(const StateVector& state, const CMatrix& hamiltonian,
                            double duration);

// |<a|b>|^2, zero-padding the shorter state. Throws InvalidState on a zero
// vector. Clamped to [0, 1].
double fidelity(const StateVector& a, const StateVector& b);

// Diagonal phases exp(+i kerr (n-i)(n-i-1) t) that undo the Kerr evolution
// accumulated by the spectator levels while pulse `pulse_index` is on.
CVector kerr_phase_compensation(int pulse_index, double kerr, double duration,
                                Index dim);

}  // namespace fockpulse
