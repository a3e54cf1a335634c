#pragma once

// Runs a compiled pulse sequence under the ideal two-level (rotating-wave)
// dynamics and under the full driven Kerr Hamiltonian.

#include <optional>
#include <span>
#include <vector>

#include "fockpulse/compiler.hpp"
#include "fockpulse/fock_core.hpp"

namespace fockpulse {

struct SimConfig {
  int guard = 10;  // Fock levels kept above the target's N
  double kerr = 1.0;
  bool record_trajectory = false;
  int trajectory_samples = 2;  // per pulse, both endpoints included

  void validate() const;
};

struct TrajectoryPoint {
  double time = 0.0;
  StateVector state;
};

// Leakage above this level sets `truncation_warning`.
inline constexpr double kLeakageWarning = 0.01;

struct SimReport {
  StateVector final_state;
  double fidelity_vs_target = 0.0;
  double leakage = 0.0;  // population above the target's N
  std::vector<double> per_pulse_fidelity{};
  std::optional<std::vector<TrajectoryPoint>> trajectory{};
  bool truncation_warning = false;
};

// Exact rotation on span{|i>, |i+1>} generated by the resonant two-level
// coupling of the pulse; other levels are untouched.
StateVector evolve_rwa_pulse(const StateVector& state, const Pulse& pulse,
                             RabiConvention convention = kDefaultConvention);

StateVector evolve_rwa_sequence(const PulseSequence& seq, Index dim);

// Frame-joined propagation with the full Hamiltonian in dim N+1+guard: for
// each pulse, exp(-iH t) followed by the Kerr phase compensation.
SimReport evolve_full_sequence(const PulseSequence& seq, const SimConfig& config,
                               const TargetState& target);

struct SweepRow {
  double ratio = 0.0;  // g / kerr
  double infidelity = 0.0;
  double leakage = 0.0;
};

// Recompiles and simulates the target once per drive ratio. Rows run
// concurrently and come back in input order. Ratios must be positive and
// ascending.
std::vector<SweepRow> rwa_error_sweep(const TargetState& target,
                                      std::span<const double> ratios,
                                      const SimConfig& config);

}  // namespace fockpulse
