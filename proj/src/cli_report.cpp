#include "fockpulse/cli_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "fockpulse/decoherence.hpp"
#include "fockpulse/errors.hpp"
#include "fockpulse/simulator.hpp"

namespace fockpulse {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kFormatTag = "fockpulse-report/1";

[[noreturn]] void field_error(std::string_view field, std::string_view problem) {
  throw ParseError("field '" + std::string(field) + "': " + std::string(problem));
}

double real_field(const Json& doc, std::string_view name) {
  const auto& v = doc.at(std::string(name));
  if (!v.is_number()) field_error(name, "expected a number");
  return v.get<double>();
}

int int_field(const Json& doc, std::string_view name) {
  const auto& v = doc.at(std::string(name));
  if (!v.is_number_integer()) field_error(name, "expected an integer");
  return v.get<int>();
}

std::vector<double> real_list(const Json& v, std::string_view name) {
  if (!v.is_array() || v.empty()) field_error(name, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) field_error(name, "expected a nonempty array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Complex complex_entry(const Json& v, std::string_view name) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    field_error(name, "each entry must be a [re, im] pair of numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

void check_ratios(const std::vector<double>& ratios) {
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (!(ratios[k] > 0.0)) field_error("sweep_ratios", "ratios must be positive");
    if (k > 0 && !(ratios[k] > ratios[k - 1])) {
      field_error("sweep_ratios", "ratios must be strictly ascending");
    }
  }
}

Json complex_pair(Complex c) { return Json::array({c.real(), c.imag()}); }

Json amplitude_list(const CVector& v) {
  Json out = Json::array();
  for (Index n = 0; n < v.size(); ++n) out.push_back(complex_pair(v[n]));
  return out;
}

Json real_array(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(x);
  return out;
}

// nlohmann prints the shortest round-trip form; reports pin %.17g instead.
void write_json(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        write_json(value, out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric rows stay on one line.
      const bool flat = j.size() <= 2 && std::all_of(j.begin(), j.end(),
                                                     [](const Json& x) { return x.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out += ", ";
          write_json(j[k], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        out += pad;
        write_json(j[k], out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

std::string render(const Json& doc) {
  std::string out;
  write_json(doc, out, 0);
  out += "\n";
  return out;
}

Json job_echo(const JobSpec& spec) {
  Json job;
  job["mode"] = std::string(mode_name(spec.mode));
  Json coeffs = Json::array();
  for (const Complex& c : spec.coefficients) coeffs.push_back(complex_pair(c));
  job["coefficients"] = std::move(coeffs);
  if (spec.mode != Mode::kSweep) job["g_over_chi"] = spec.g_over_chi;
  job["guard"] = spec.guard;
  job["renormalize"] = spec.renormalize;
  if (spec.mode == Mode::kSweep) job["sweep_ratios"] = real_array(spec.sweep_ratios);
  if (spec.mode == Mode::kLindblad) {
    job["kappa_over_chi"] = *spec.kappa_over_chi;
    job["steps_per_pulse"] = spec.steps_per_pulse;
  }
  return job;
}

Json compile_block(const PulseSequence& seq) {
  Json block;
  block["convention"] = seq.convention == RabiConvention::kPaper ? "paper" : "schrodinger";
  block["global_phase"] = seq.global_phase;
  Json pulses = Json::array();
  for (const Pulse& p : seq.pulses) {
    Json row;
    row["index"] = p.index;
    row["detuning_over_chi"] = p.detuning / seq.kerr;
    row["g_over_chi"] = p.amplitude / seq.kerr;
    row["phase"] = p.phase;
    row["duration_chi"] = p.duration * seq.kerr;
    pulses.push_back(std::move(row));
  }
  block["pulses"] = std::move(pulses);
  Json log = Json::array();
  for (const CompileStep& s : seq.compile_log) {
    Json row;
    row["index"] = s.index;
    row["residual"] = s.residual;
    row["accumulated_phase"] = s.accumulated_phase;
    log.push_back(std::move(row));
  }
  block["log"] = std::move(log);
  return block;
}

double max_coefficient_error(const TargetState& a, const TargetState& b) {
  const int top = std::max(a.max_level(), b.max_level());
  double worst = 0.0;
  for (int n = 0; n <= top; ++n) {
    const Complex x = n <= a.max_level() ? a[n] : Complex{};
    const Complex y = n <= b.max_level() ? b[n] : Complex{};
    worst = std::max(worst, std::abs(x - y));
  }
  return worst;
}

}  // namespace

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kCompile: return "compile";
    case Mode::kRwa: return "rwa";
    case Mode::kFull: return "full";
    case Mode::kLindblad: return "lindblad";
    case Mode::kSweep: return "sweep";
  }
  return "compile";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::kCompile, Mode::kRwa, Mode::kFull, Mode::kLindblad, Mode::kSweep}) {
    if (mode_name(m) == name) return m;
  }
  field_error("mode", "unknown mode '" + std::string(name) +
                          "' (expected compile, rwa, full, lindblad or sweep)");
}

TargetState JobSpec::target() const { return TargetState(coefficients, renormalize); }

JobSpec parse_jobspec(std::string_view text, const JobOverrides& overrides) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("line 1: job document must be a JSON object");

  static const std::set<std::string> known = {
      "coefficients", "mode",           "g_over_chi",      "guard",
      "sweep_ratios", "kappa_over_chi", "steps_per_pulse", "renormalize"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) field_error(key, "unknown field");
  }

  JobSpec spec;

  if (!doc.contains("coefficients")) field_error("coefficients", "missing");
  const Json& coeffs = doc["coefficients"];
  if (!coeffs.is_array() || coeffs.empty()) {
    field_error("coefficients", "expected a nonempty array of [re, im] pairs");
  }
  for (const auto& c : coeffs) spec.coefficients.push_back(complex_entry(c, "coefficients"));

  if (overrides.mode) {
    spec.mode = *overrides.mode;
  } else {
    if (!doc.contains("mode")) field_error("mode", "missing");
    if (!doc["mode"].is_string()) field_error("mode", "expected a string");
    spec.mode = parse_mode(doc["mode"].get<std::string>());
  }

  if (doc.contains("guard")) spec.guard = int_field(doc, "guard");
  if (overrides.guard) spec.guard = *overrides.guard;
  if (spec.guard < 0) field_error("guard", "must be >= 0");

  if (doc.contains("renormalize")) {
    if (!doc["renormalize"].is_boolean()) field_error("renormalize", "expected true or false");
    spec.renormalize = doc["renormalize"].get<bool>();
  }
  if (overrides.renormalize) spec.renormalize = *overrides.renormalize;

  if (spec.mode != Mode::kSweep) {
    if (!doc.contains("g_over_chi")) field_error("g_over_chi", "missing");
    spec.g_over_chi = real_field(doc, "g_over_chi");
    if (!(spec.g_over_chi > 0.0) || !std::isfinite(spec.g_over_chi)) {
      field_error("g_over_chi", "must be a positive finite number");
    }
  } else if (doc.contains("g_over_chi")) {
    spec.g_over_chi = real_field(doc, "g_over_chi");
  }

  if (doc.contains("sweep_ratios")) spec.sweep_ratios = real_list(doc["sweep_ratios"], "sweep_ratios");
  if (overrides.sweep_ratios) spec.sweep_ratios = *overrides.sweep_ratios;
  if (spec.mode == Mode::kSweep) {
    if (spec.sweep_ratios.empty()) field_error("sweep_ratios", "required in sweep mode");
    check_ratios(spec.sweep_ratios);
  }

  if (doc.contains("kappa_over_chi")) spec.kappa_over_chi = real_field(doc, "kappa_over_chi");
  if (overrides.kappa_over_chi) spec.kappa_over_chi = overrides.kappa_over_chi;
  if (spec.mode == Mode::kLindblad && !spec.kappa_over_chi) {
    field_error("kappa_over_chi", "required in lindblad mode");
  }
  if (spec.kappa_over_chi && !(*spec.kappa_over_chi >= 0.0)) {
    field_error("kappa_over_chi", "must be >= 0");
  }

  if (doc.contains("steps_per_pulse")) spec.steps_per_pulse = int_field(doc, "steps_per_pulse");
  if (spec.steps_per_pulse < 10) field_error("steps_per_pulse", "must be >= 10");

  try {
    (void)spec.target();
  } catch (const InvalidState& e) {
    throw NormalizationError(e.what(), 1.0);
  }
  return spec;
}

JobOutput run_job(const JobSpec& spec) {
  const TargetState target = spec.target();
  const int top = target.max_level();
  const SimConfig config{.guard = spec.guard, .kerr = 1.0};

  Json doc;
  doc["format"] = std::string(kFormatTag);
  doc["job"] = job_echo(spec);
  Json target_block;
  target_block["max_level"] = top;
  target_block["coefficients"] = amplitude_list(target.as_state(top + 1).amplitudes());
  doc["target"] = std::move(target_block);

  JobOutput output;

  if (spec.mode == Mode::kSweep) {
    const std::vector<SweepRow> rows = rwa_error_sweep(target, spec.sweep_ratios, config);
    Json table = Json::array();
    std::string csv = "ratio,infidelity,leakage\n";
    for (const SweepRow& r : rows) {
      Json row;
      row["ratio"] = r.ratio;
      row["infidelity"] = r.infidelity;
      row["leakage"] = r.leakage;
      table.push_back(std::move(row));
      csv += format_real(r.ratio) + "," + format_real(r.infidelity) + "," +
             format_real(r.leakage) + "\n";
    }
    doc["sweep"] = std::move(table);
    output.report = render(doc);
    output.sweep_csv = std::move(csv);
    return output;
  }

  const PulseSequence seq = compile(target, spec.g_over_chi, 1.0);
  doc["compile"] = compile_block(seq);

  Json metrics;
  switch (spec.mode) {
    case Mode::kCompile:
      metrics["pulse_count"] = static_cast<int>(seq.pulses.size());
      metrics["decompile_max_error"] = max_coefficient_error(decompile_check(seq), target);
      break;
    case Mode::kRwa: {
      const StateVector psi = evolve_rwa_sequence(seq, top + 1 + spec.guard);
      const double f = fidelity(psi, target.as_state(psi.dim()));
      metrics["fidelity"] = f;
      metrics["infidelity"] = 1.0 - f;
      metrics["leakage"] = psi.population_above(top);
      metrics["final_state"] = amplitude_list(psi.amplitudes());
      break;
    }
    case Mode::kFull: {
      const SimReport r = evolve_full_sequence(seq, config, target);
      metrics["fidelity"] = r.fidelity_vs_target;
      metrics["infidelity"] = 1.0 - r.fidelity_vs_target;
      metrics["leakage"] = r.leakage;
      metrics["truncation_warning"] = r.truncation_warning;
      metrics["per_pulse_fidelity"] = real_array(r.per_pulse_fidelity);
      metrics["final_state"] = amplitude_list(r.final_state.amplitudes());
      break;
    }
    case Mode::kLindblad: {
      const LossConfig loss{.kappa = *spec.kappa_over_chi, .steps_per_pulse = spec.steps_per_pulse};
      const OpenSystemReport r = evolve_lindblad_sequence(seq, config, loss, target);
      metrics["fidelity"] = r.fidelity_vs_target;
      metrics["infidelity"] = 1.0 - r.fidelity_vs_target;
      metrics["leakage"] = r.leakage;
      metrics["truncation_warning"] = r.truncation_warning;
      metrics["per_pulse_fidelity"] = real_array(r.per_pulse_fidelity);
      metrics["trace_drift"] = r.trace_drift;
      metrics["purity"] = r.purity;
      metrics["min_eigenvalue"] = r.min_eigenvalue;
      std::vector<double> populations;
      for (Index n = 0; n < r.final_state.dim(); ++n) {
        populations.push_back(r.final_state.entries()(n, n).real());
      }
      metrics["populations"] = real_array(populations);
      break;
    }
    case Mode::kSweep:
      break;
  }
  doc["metrics"] = std::move(metrics);
  output.report = render(doc);
  return output;
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ParseError*>(&error)) return 2;
  if (dynamic_cast<const NormalizationError*>(&error)) return 3;
  return 4;
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

PulseSequence read_pulse_table(std::string_view report_text) {
  Json doc;
  try {
    doc = Json::parse(report_text.begin(), report_text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(report_text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("compile")) {
    throw ParseError("report has no compile block");
  }
  const Json& block = doc["compile"];
  try {
    PulseSequence seq;
    seq.kerr = 1.0;
    seq.global_phase = block.at("global_phase").get<double>();
    const std::string convention = block.at("convention").get<std::string>();
    if (convention == "paper") {
      seq.convention = RabiConvention::kPaper;
    } else if (convention == "schrodinger") {
      seq.convention = RabiConvention::kSchrodinger;
    } else {
      field_error("convention", "unknown convention '" + convention + "'");
    }
    for (const auto& row : block.at("pulses")) {
      Pulse p;
      p.index = row.at("index").get<int>();
      p.detuning = row.at("detuning_over_chi").get<double>();
      p.amplitude = row.at("g_over_chi").get<double>();
      p.phase = row.at("phase").get<double>();
      p.duration = row.at("duration_chi").get<double>();
      seq.pulses.push_back(p);
    }
    for (const auto& row : block.at("log")) {
      seq.compile_log.push_back({row.at("index").get<int>(), row.at("residual").get<double>(),
                                 row.at("accumulated_phase").get<double>()});
    }
    return seq;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed compile block: ") + e.what());
  }
}

}  // namespace fockpulse
