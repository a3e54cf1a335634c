#pragma once

// Photon loss during the pulse sequence: the master equation
//   d rho/dt = -i[H, rho] + kappa (a rho a^dagger - {a^dagger a, rho}/2)
// at zero temperature, with H constant over each pulse.

#include <vector>

#include "fockpulse/compiler.hpp"
#include "fockpulse/fock_core.hpp"
#include "fockpulse/simulator.hpp"

namespace fockpulse {

struct LossConfig {
  double kappa = 0.0;  // energy decay rate, units of kerr
  int steps_per_pulse = 100;

  void validate() const;
};

// Trace drift beyond this raises IntegrationResolution.
inline constexpr double kMaxTraceDrift = 1e-6;

struct OpenSystemReport {
  DensityMatrix final_state;
  double fidelity_vs_target = 0.0;  // <target|rho|target>
  double leakage = 0.0;
  std::vector<double> per_pulse_fidelity{};
  double trace_drift = 0.0;  // max |tr rho - 1| seen at any step
  double min_eigenvalue = 0.0;
  double hermiticity_error = 0.0;
  double purity = 0.0;
  bool truncation_warning = false;
};

// kappa (a rho a^dagger - (n rho + rho n)/2)
CMatrix photon_loss(const CMatrix& rho, double kappa);

// Fixed-step RK4 over `steps` steps. Each step is integrated in the
// interaction picture of the (constant) Hamiltonian, so only the loss term
// is discretised and kappa = 0 reduces to exact unitary evolution.
// `max_trace_drift`, when given, accumulates max |tr rho - 1|.
DensityMatrix evolve_lindblad_const(const DensityMatrix& rho, const CMatrix& hamiltonian,
                                    double kappa, double duration, int steps,
                                    double* max_trace_drift = nullptr);

OpenSystemReport evolve_lindblad_sequence(const PulseSequence& seq, const SimConfig& config,
                                          const LossConfig& loss, const TargetState& target);

}  // namespace fockpulse
