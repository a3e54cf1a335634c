#include "fockpulse/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fockpulse/errors.hpp"

namespace fockpulse {

void LossConfig::validate() const {
  if (!(kappa >= 0.0)) throw ContractViolation("kappa must be >= 0");
  if (steps_per_pulse < 10) throw ContractViolation("steps_per_pulse must be >= 10");
}

CMatrix photon_loss(const CMatrix& rho, double kappa) {
  const Index dim = rho.rows();
  CMatrix out(dim, dim);
  // (a rho a^dagger)_{jk} = sqrt((j+1)(k+1)) rho_{j+1,k+1}
  for (Index k = 0; k < dim; ++k) {
    for (Index j = 0; j < dim; ++j) {
      Complex jump{};
      if (j + 1 < dim && k + 1 < dim) {
        jump = std::sqrt(static_cast<double>((j + 1) * (k + 1))) * rho(j + 1, k + 1);
      }
      out(j, k) = kappa * (jump - 0.5 * static_cast<double>(j + k) * rho(j, k));
    }
  }
  return out;
}

DensityMatrix evolve_lindblad_const(const DensityMatrix& rho, const CMatrix& hamiltonian,
                                    double kappa, double duration, int steps,
                                    double* max_trace_drift) {
  if (hamiltonian.rows() != rho.dim()) {
    throw InvalidDimension("Hamiltonian and density matrix dimensions differ");
  }
  if (steps < 1) throw ContractViolation("steps must be >= 1");
  if (!(duration >= 0.0)) throw ContractViolation("duration must be >= 0");

  const double h = duration / steps;
  const CMatrix u_half = propagator(hamiltonian, 0.5 * h);
  const CMatrix u_full = u_half * u_half;

  // Loss term seen from the frame co-moving with U(s).
  const auto rate = [kappa](const CMatrix& u, const CMatrix& sigma) -> CMatrix {
    return u.adjoint() * photon_loss(u * sigma * u.adjoint(), kappa) * u;
  };

  CMatrix current = rho.entries();
  for (int n = 0; n < steps; ++n) {
    if (kappa > 0.0) {
      const CMatrix k1 = photon_loss(current, kappa);
      const CMatrix k2 = rate(u_half, current + (0.5 * h) * k1);
      const CMatrix k3 = rate(u_half, current + (0.5 * h) * k2);
      const CMatrix k4 = rate(u_full, current + h * k3);
      current += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    current = u_full * current * u_full.adjoint();
    if (max_trace_drift) {
      const double drift = std::abs(current.trace() - 1.0);
      *max_trace_drift = std::isfinite(drift) ? std::max(*max_trace_drift, drift) : INFINITY;
    }
  }
  return DensityMatrix(std::move(current));
}

OpenSystemReport evolve_lindblad_sequence(const PulseSequence& seq, const SimConfig& config,
                                          const LossConfig& loss, const TargetState& target) {
  config.validate();
  loss.validate();
  const int top = target.max_level();
  if (static_cast<int>(seq.pulses.size()) > top) {
    throw ContractViolation("sequence climbs above the target's highest level");
  }
  const Index dim = top + 1 + config.guard;
  const std::vector<StateVector> expected = predicted_states(seq, dim);

  DensityMatrix rho = DensityMatrix::pure(StateVector::vacuum(dim));
  OpenSystemReport report{.final_state = rho};

  for (const Pulse& p : seq.pulses) {
    const CMatrix h = build_hamiltonian({.detuning = p.detuning,
                                         .kerr = config.kerr,
                                         .amplitude = p.amplitude,
                                         .phase = drive_phase(p.phase, seq.convention),
                                         .dim = dim});
    rho = evolve_lindblad_const(rho, h, loss.kappa, p.duration, loss.steps_per_pulse,
                                &report.trace_drift);
    const CVector undo = kerr_phase_compensation(p.index, config.kerr, p.duration, dim);
    rho = DensityMatrix(undo.asDiagonal() * rho.entries() * undo.conjugate().asDiagonal());
    report.per_pulse_fidelity.push_back(
        rho.overlap(expected[static_cast<std::size_t>(p.index) + 1]));
  }

  if (!(report.trace_drift <= kMaxTraceDrift)) {
    throw IntegrationResolution("trace drifted by " + std::to_string(report.trace_drift) +
                                "; increase steps_per_pulse");
  }

  report.fidelity_vs_target = std::clamp(rho.overlap(target.as_state(dim)), 0.0, 1.0);
  report.leakage = rho.population_above(top);
  report.truncation_warning = report.leakage > kLeakageWarning;
  report.min_eigenvalue = rho.min_eigenvalue();
  report.hermiticity_error = rho.hermiticity_error();
  report.purity = rho.purity();
  report.final_state = std::move(rho);
  return report;
}

}  // namespace fockpulse
