#pragma once

// Job specifications in, deterministic reports out.
//
// A job is a JSON document:
//   {
//     "coefficients": [[re, im], ...],   // C_0 .. C_N
//     "mode": "compile" | "rwa" | "full" | "lindblad" | "sweep",
//     "g_over_chi": 0.01,                // all modes except sweep
//     "guard": 10,                       // optional
//     "sweep_ratios": [0.001, 0.01],     // sweep mode
//     "kappa_over_chi": 1e-4,            // lindblad mode
//     "steps_per_pulse": 100,            // optional, lindblad mode
//     "renormalize": false               // optional
//   }
// Reports are JSON with every real printed as %.17g; sweep rows are also
// emitted as CSV with header "ratio,infidelity,leakage".

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fockpulse/compiler.hpp"

namespace fockpulse {

enum class Mode { kCompile, kRwa, kFull, kLindblad, kSweep };

std::string_view mode_name(Mode mode);

struct JobSpec {
  std::vector<Complex> coefficients;
  Mode mode = Mode::kCompile;
  double g_over_chi = 0.0;
  int guard = 10;
  std::vector<double> sweep_ratios;
  std::optional<double> kappa_over_chi;
  int steps_per_pulse = 100;
  bool renormalize = false;

  // Normalised, zero-stripped target built from `coefficients`.
  TargetState target() const;
};

// Command-line values that take precedence over the document.
struct JobOverrides {
  std::optional<Mode> mode;
  std::optional<int> guard;
  std::optional<bool> renormalize;
  std::optional<std::vector<double>> sweep_ratios;
  std::optional<double> kappa_over_chi;
};

Mode parse_mode(std::string_view name);

// Throws ParseError (schema problems, naming the line or field) or
// NormalizationError (sum |c|^2 off by more than 1e-9 without renormalize).
JobSpec parse_jobspec(std::string_view text, const JobOverrides& overrides = {});

struct JobOutput {
  std::string report;
  std::optional<std::string> sweep_csv;
};

JobOutput run_job(const JobSpec& spec);

// Process exit status for an exception escaping parse_jobspec / run_job:
// 2 parse, 3 normalization, 4 numerical contract.
int exit_code_for(const std::exception& error);

std::string format_real(double value);

// Rebuilds the compiled sequence from the "compile" block of a report.
PulseSequence read_pulse_table(std::string_view report_text);

}  // namespace fockpulse
