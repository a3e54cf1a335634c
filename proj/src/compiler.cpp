#include "fockpulse/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "fockpulse/errors.hpp"

namespace fockpulse {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double x) {
  return x - 2.0 * kPi * std::floor((x + kPi) / (2.0 * kPi));
}

}  // namespace

double ladder_sign(RabiConvention convention) {
  return convention == RabiConvention::kPaper ? 1.0 : -1.0;
}

double drive_phase(double pulse_phase, RabiConvention convention) {
  // exp(-iHt) hands -i e^{i drive} up the ladder; a half-turn of the drive
  // turns that into +i e^{i phase}.
  return convention == RabiConvention::kPaper ? pulse_phase + kPi : pulse_phase;
}

TargetState::TargetState(std::vector<Complex> coefficients, bool renormalize,
                         double tolerance)
    : coefficients_(std::move(coefficients)) {
  while (!coefficients_.empty() && coefficients_.back() == Complex{}) {
    coefficients_.pop_back();
  }
  if (coefficients_.empty()) {
    throw InvalidState("target has no nonzero coefficient");
  }
  double total = 0.0;
  for (const Complex& c : coefficients_) total += std::norm(c);
  if (!std::isfinite(total)) throw InvalidState("target has non-finite coefficients");
  const double deviation = 1.0 - total;
  if (!renormalize && std::abs(deviation) > tolerance) {
    throw NormalizationError("target norm^2 is " + std::to_string(total) +
                                 " (deviation " + std::to_string(deviation) + ")",
                             deviation);
  }
  const double scale = 1.0 / std::sqrt(total);
  for (Complex& c : coefficients_) c *= scale;
}

TargetState TargetState::fock(int n) {
  if (n < 0) throw InvalidDimension("Fock level must be >= 0");
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1, Complex{});
  c.back() = 1.0;
  return TargetState(std::move(c));
}

StateVector TargetState::as_state(Index dim) const {
  if (dim <= max_level()) {
    throw InvalidDimension("basis of dim " + std::to_string(dim) +
                           " cannot hold level " + std::to_string(max_level()));
  }
  CVector v = CVector::Zero(dim);
  for (std::size_t n = 0; n < coefficients_.size(); ++n) v[static_cast<Index>(n)] = coefficients_[n];
  return StateVector(std::move(v));
}

double Pulse::rabi_frequency() const {
  return amplitude * std::sqrt(static_cast<double>(index) + 1.0);
}

PulseSequence compile(const TargetState& target, double amplitude, double kerr,
                      RabiConvention convention) {
  if (!(amplitude > 0.0)) throw ContractViolation("drive amplitude must be > 0");
  if (!(kerr > 0.0)) throw ContractViolation("Kerr strength must be > 0");

  const auto& raw = target.coefficients();
  const int top = target.max_level();

  PulseSequence seq;
  seq.kerr = kerr;
  seq.convention = convention;

  const auto first = std::find_if(raw.begin(), raw.end(),
                                  [](const Complex& c) { return c != Complex{}; });
  seq.global_phase = std::arg(*first);
  const Complex unwind = std::polar(1.0, -seq.global_phase);
  std::vector<Complex> c(raw.size());
  std::transform(raw.begin(), raw.end(), c.begin(),
                 [&](const Complex& x) { return x * unwind; });

  // Residuals from tail sums; 1 - sum_{l<m} cancels badly once most of the
  // weight has been placed.
  std::vector<double> residual(c.size());
  double tail = 0.0;
  for (int m = top; m >= 0; --m) {
    tail += std::norm(c[m]);
    residual[m] = std::sqrt(tail);
  }

  const double sign = ladder_sign(convention);
  double theta = 0.0;
  seq.pulses.reserve(static_cast<std::size_t>(top));
  seq.compile_log.reserve(static_cast<std::size_t>(top));
  for (int m = 0; m < top; ++m) {
    const double r = residual[m];
    if (!(r > 0.0)) {
      throw InternalConsistency("residual exhausted before level " + std::to_string(m));
    }
    double ratio = std::abs(c[m]) / r;
    if (ratio > 1.0 + 1e-12) {
      throw InternalConsistency("|C_m|/r_m = " + std::to_string(ratio) + " at level " +
                                std::to_string(m));
    }
    ratio = std::min(ratio, 1.0);

    Pulse p;
    p.index = m;
    p.detuning = 2.0 * m * kerr;
    p.amplitude = amplitude;
    p.duration = std::acos(ratio) / p.rabi_frequency();
    const Complex next = c[m + 1];
    p.phase = next == Complex{} ? 0.0 : wrap_phase(std::arg(next) - theta - sign * kPi / 2.0);

    seq.compile_log.push_back({m, r, theta});
    seq.pulses.push_back(p);
    theta = wrap_phase(theta + sign * kPi / 2.0 + p.phase);
  }
  return seq;
}

std::vector<StateVector> predicted_states(const PulseSequence& seq, Index dim) {
  const auto count = static_cast<Index>(seq.pulses.size());
  if (dim < count + 1) {
    throw InvalidDimension("basis too small for " + std::to_string(count) + " pulses");
  }
  const double sign = ladder_sign(seq.convention);

  std::vector<StateVector> states;
  states.reserve(seq.pulses.size() + 1);
  CVector v = CVector::Zero(dim);
  v[0] = 1.0;
  states.emplace_back(v);
  // Amplitude parked on the top populated rung.
  Complex carried = 1.0;
  for (Index m = 0; m < count; ++m) {
    const Pulse& p = seq.pulses[static_cast<std::size_t>(m)];
    if (p.index != m) throw ContractViolation("pulses must address the ladder in order");
    const double angle = p.rotation_angle();
    v[m] = carried * std::cos(angle);
    carried *= sign * kI * std::polar(1.0, p.phase) * std::sin(angle);
    v[m + 1] = carried;
    states.emplace_back(v);
  }
  return states;
}

TargetState decompile_check(const PulseSequence& seq) {
  const Index dim = static_cast<Index>(seq.pulses.size()) + 1;
  const CVector final_amplitudes = predicted_states(seq, dim).back().amplitudes();
  const Complex restore = std::polar(1.0, seq.global_phase);
  std::vector<Complex> c(static_cast<std::size_t>(dim));
  for (Index n = 0; n < dim; ++n) c[static_cast<std::size_t>(n)] = final_amplitudes[n] * restore;
  return TargetState(std::move(c));
}

}  // namespace fockpulse
