#include "fockpulse/simulator.hpp"

#include <cmath>
#include <future>
#include <string>

#include "fockpulse/errors.hpp"

namespace fockpulse {

void SimConfig::validate() const {
  if (guard < 0) throw ContractViolation("guard must be >= 0");
  if (!(kerr > 0.0)) throw ContractViolation("Kerr strength must be > 0");
  if (record_trajectory && trajectory_samples < 2) {
    throw ContractViolation("trajectory_samples must be >= 2 when recording");
  }
}

StateVector evolve_rwa_pulse(const StateVector& state, const Pulse& pulse,
                             RabiConvention convention) {
  const Index lo = pulse.index;
  if (lo < 0 || state.dim() <= lo + 1) {
    throw InvalidDimension("state of dim " + std::to_string(state.dim()) +
                           " cannot host transition " + std::to_string(lo) + "->" +
                           std::to_string(lo + 1));
  }
  if (!(pulse.duration >= 0.0)) throw ContractViolation("duration must be >= 0");

  const double angle = pulse.rotation_angle();
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  // exp(-iHt) for H = Omega (f |i+1><i| + f* |i><i+1|)
  const Complex f = std::polar(1.0, drive_phase(pulse.phase, convention));

  CVector v = state.amplitudes();
  const Complex a = v[lo];
  const Complex b = v[lo + 1];
  v[lo] = c * a - kI * std::conj(f) * s * b;
  v[lo + 1] = -kI * f * s * a + c * b;
  return StateVector(std::move(v));
}

StateVector evolve_rwa_sequence(const PulseSequence& seq, Index dim) {
  if (dim < static_cast<Index>(seq.pulses.size()) + 1) {
    throw InvalidDimension("basis too small for the sequence");
  }
  StateVector psi = StateVector::vacuum(dim);
  for (const Pulse& p : seq.pulses) psi = evolve_rwa_pulse(psi, p, seq.convention);
  return psi;
}

SimReport evolve_full_sequence(const PulseSequence& seq, const SimConfig& config,
                               const TargetState& target) {
  config.validate();
  const int top = target.max_level();
  if (static_cast<int>(seq.pulses.size()) > top) {
    throw ContractViolation("sequence climbs above the target's highest level");
  }
  const Index dim = top + 1 + config.guard;

  const std::vector<StateVector> expected = predicted_states(seq, dim);
  StateVector psi = StateVector::vacuum(dim);

  SimReport report{.final_state = psi};
  if (config.record_trajectory) {
    report.trajectory.emplace();
    report.trajectory->push_back({0.0, psi});
  }

  double clock = 0.0;
  for (const Pulse& p : seq.pulses) {
    const CMatrix h = build_hamiltonian({.detuning = p.detuning,
                                         .kerr = config.kerr,
                                         .amplitude = p.amplitude,
                                         .phase = drive_phase(p.phase, seq.convention),
                                         .dim = dim});
    const auto step = [&](double t) {
      const CVector undo = kerr_phase_compensation(p.index, config.kerr, t, dim);
      return StateVector(undo.cwiseProduct(propagator(h, t) * psi.amplitudes()));
    };

    if (report.trajectory) {
      const int samples = config.trajectory_samples;
      for (int j = 1; j < samples - 1; ++j) {
        const double t = p.duration * j / (samples - 1);
        report.trajectory->push_back({clock + t, step(t)});
      }
    }
    psi = step(p.duration);
    clock += p.duration;
    if (report.trajectory) report.trajectory->push_back({clock, psi});

    report.per_pulse_fidelity.push_back(
        fidelity(psi, expected[static_cast<std::size_t>(p.index) + 1]));
  }

  report.fidelity_vs_target = fidelity(psi, target.as_state(dim));
  report.leakage = psi.population_above(top);
  report.truncation_warning = report.leakage > kLeakageWarning;
  report.final_state = std::move(psi);
  return report;
}

std::vector<SweepRow> rwa_error_sweep(const TargetState& target,
                                      std::span<const double> ratios,
                                      const SimConfig& config) {
  config.validate();
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (!(ratios[k] > 0.0)) throw ContractViolation("sweep ratios must be positive");
    if (k > 0 && !(ratios[k] > ratios[k - 1])) {
      throw ContractViolation("sweep ratios must be strictly ascending");
    }
  }

  std::vector<std::future<SweepRow>> pending;
  pending.reserve(ratios.size());
  for (const double ratio : ratios) {
    pending.push_back(std::async(std::launch::async, [&target, &config, ratio] {
      const PulseSequence seq = compile(target, ratio * config.kerr, config.kerr);
      const SimReport r = evolve_full_sequence(seq, config, target);
      return SweepRow{ratio, 1.0 - r.fidelity_vs_target, r.leakage};
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(pending.size());
  for (auto& f : pending) rows.push_back(f.get());
  return rows;
}

}  // namespace fockpulse
