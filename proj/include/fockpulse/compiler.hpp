#pragma once

// Compiles a target Fock superposition into the ladder of resonant pulses
// |0>->|1>, |1>->|2>, ... that prepares it from vacuum, one pulse per
// coefficient after the first.

#include <vector>

#include "fockpulse/fock_core.hpp"

namespace fockpulse {

// Sign of the amplitude handed up the ladder by a resonant pulse.
//
// kPaper: a pulse with phase phi maps |m> to cos|m> + i e^{i phi} sin|m+1>.
// kSchrodinger: the same pulse yields -i e^{i phi} sin instead.
//
// Both are realised by literal exp(-iHt) evolution; they differ only in the
// physical drive phase used for a given pulse phase (see drive_phase). The
// compiler and the simulators read the convention from the PulseSequence,
// so final states do not depend on the choice.
enum class RabiConvention { kPaper, kSchrodinger };

inline constexpr RabiConvention kDefaultConvention = RabiConvention::kPaper;

// +1 for kPaper, -1 for kSchrodinger.
double ladder_sign(RabiConvention convention);

// Phase of the e^{i phase} a^dagger drive term that realises `pulse_phase`.
double drive_phase(double pulse_phase, RabiConvention convention);

class TargetState {
 public:
  // Validates sum |c|^2 = 1 within `tolerance` (or rescales when
  // `renormalize`), strips trailing exact zeros, and stores the exactly
  // normalised list. Throws NormalizationError / InvalidState.
  explicit TargetState(std::vector<Complex> coefficients, bool renormalize = false,
                       double tolerance = 1e-9);

  static TargetState fock(int n);

  const std::vector<Complex>& coefficients() const { return coefficients_; }
  // Highest occupied Fock level N.
  int max_level() const { return static_cast<int>(coefficients_.size()) - 1; }
  Complex operator[](int n) const { return coefficients_[n]; }

  StateVector as_state(Index dim) const;

 private:
  std::vector<Complex> coefficients_;
};

struct Pulse {
  int index = 0;           // addresses |index> <-> |index+1>
  double detuning = 0.0;   // 2 * index * kerr
  double amplitude = 0.0;  // g
  double phase = 0.0;      // rad, in the sequence's RabiConvention
  double duration = 0.0;

  double rabi_frequency() const;  // g sqrt(index+1)
  double rotation_angle() const { return rabi_frequency() * duration; }
};

struct CompileStep {
  int index = 0;
  double residual = 0.0;           // sqrt(1 - sum_{l<m} |C_l|^2)
  double accumulated_phase = 0.0;  // phase carried by |m> before pulse m, wrapped to [-pi, pi)
};

struct PulseSequence {
  std::vector<Pulse> pulses;
  double kerr = 1.0;
  // Phase removed from the target so its first nonzero coefficient is real
  // and positive.
  double global_phase = 0.0;
  RabiConvention convention = kDefaultConvention;
  std::vector<CompileStep> compile_log;
};

// One pulse per transition, all with amplitude g. Durations take the
// principal arccos branch, so every rotation angle lies in [0, pi/2].
PulseSequence compile(const TargetState& target, double amplitude, double kerr,
                      RabiConvention convention = kDefaultConvention);

// States the ideal ladder produces from vacuum at each pulse boundary:
// element m is the state after m pulses, in a basis of dim `dim` (at least
// pulses+1). The logged global phase is not applied.
std::vector<StateVector> predicted_states(const PulseSequence& seq, Index dim);

// Closed-form forward evaluation of the sequence with the logged global
// phase restored; inverts compile().
TargetState decompile_check(const PulseSequence& seq);

}  // namespace fockpulse
