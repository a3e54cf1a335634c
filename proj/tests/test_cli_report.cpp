#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "catch_amalgamated.hpp"
#include "json.hpp"

#include "fockpulse/cli_report.hpp"
#include "fockpulse/errors.hpp"
#include "oracles.hpp"

using namespace fockpulse;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("fockpulse_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FOCKPULSE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("parse_jobspec accepts documented jobs", "[cli]") {
  SECTION("vacuum compile job") {
    const JobSpec spec =
        parse_jobspec(R"({"coefficients": [[1,0]], "mode": "compile", "g_over_chi": 0.01})");
    CHECK(spec.mode == Mode::kCompile);
    CHECK(spec.guard == 10);
    CHECK(spec.target().max_level() == 0);
  }

  SECTION("eight-digit amplitudes with renormalize") {
    const JobSpec spec = parse_jobspec(
        R"({"coefficients": [[0.70710678,0],[0,0.70710678]], "mode": "rwa",
            "g_over_chi": 0.01, "renormalize": true})");
    const TargetState t = spec.target();
    CHECK_THAT(t[0].real(), WithinAbs(1 / std::sqrt(2.0), 1e-15));
    CHECK_THAT(t[1].imag(), WithinAbs(1 / std::sqrt(2.0), 1e-15));
  }

  SECTION("overrides take precedence") {
    JobOverrides o;
    o.mode = Mode::kSweep;
    o.sweep_ratios = std::vector<double>{1e-3, 1e-2};
    o.guard = 4;
    const JobSpec spec = parse_jobspec(R"({"coefficients": [[1,0]], "mode": "full", "g_over_chi": 0.1})", o);
    CHECK(spec.mode == Mode::kSweep);
    CHECK(spec.guard == 4);
    CHECK(spec.sweep_ratios.size() == 2);
  }
}

TEST_CASE("parse_jobspec rejects bad documents", "[cli]") {
  SECTION("normalization deficit is reported") {
    // |c|^2 = 0.49 + 0.49
    try {
      parse_jobspec(R"({"coefficients": [[0.7,0],[0.7,0]], "mode": "compile", "g_over_chi": 0.01})");
      FAIL("expected NormalizationError");
    } catch (const NormalizationError& e) {
      CHECK_THAT(e.deviation(), WithinAbs(0.02, 1e-12));
      CHECK_THAT(std::string(e.what()), ContainsSubstring("0.02"));
    }
  }

  SECTION("syntax errors name the line") {
    try {
      parse_jobspec("{\n  \"coefficients\": [[1,0]],\n  \"mode\": compile\n}");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK_THAT(std::string(e.what()), ContainsSubstring("line 3"));
    }
  }

  const auto rejects_field = [](const char* doc, const char* field) {
    try {
      parse_jobspec(doc);
      FAIL("expected ParseError for " << field);
    } catch (const ParseError& e) {
      CHECK_THAT(std::string(e.what()), ContainsSubstring(field));
    }
  };
  rejects_field(R"({"mode": "compile", "g_over_chi": 0.1})", "coefficients");
  rejects_field(R"({"coefficients": [], "mode": "compile", "g_over_chi": 0.1})", "coefficients");
  rejects_field(R"({"coefficients": [[1]], "mode": "compile", "g_over_chi": 0.1})", "coefficients");
  rejects_field(R"({"coefficients": [[1,0]], "mode": "teleport", "g_over_chi": 0.1})", "mode");
  rejects_field(R"({"coefficients": [[1,0]], "mode": "full"})", "g_over_chi");
  rejects_field(R"({"coefficients": [[1,0]], "mode": "full", "g_over_chi": -1})", "g_over_chi");
  rejects_field(R"({"coefficients": [[1,0]], "mode": "sweep"})", "sweep_ratios");
  rejects_field(R"({"coefficients": [[1,0]], "mode": "sweep", "sweep_ratios": [0.1, 0.01]})",
                "sweep_ratios");
  rejects_field(R"({"coefficients": [[1,0]], "mode": "lindblad", "g_over_chi": 0.1})",
                "kappa_over_chi");
  rejects_field(R"({"coefficients": [[1,0]], "mode": "full", "g_over_chi": 0.1, "guard": 1.5})",
                "guard");
  rejects_field(R"({"coefficients": [[1,0]], "mode": "full", "g_over_chi": 0.1, "gaurd": 3})",
                "gaurd");
}

TEST_CASE("run_job compile reports", "[cli]") {
  SECTION("vacuum has an empty pulse table") {
    const JobOutput out =
        run_job(parse_jobspec(R"({"coefficients": [[1,0]], "mode": "compile", "g_over_chi": 0.01})"));
    const auto doc = nlohmann::json::parse(out.report);
    CHECK(doc["compile"]["pulses"].empty());
    CHECK(doc["metrics"]["pulse_count"] == 0);
    CHECK_FALSE(out.sweep_csv);
  }

  SECTION("even pair at g/chi = 0.01") {
    const JobOutput out = run_job(parse_jobspec(
        R"({"coefficients": [[1,0],[1,0]], "mode": "compile", "g_over_chi": 0.01, "renormalize": true})"));
    const auto doc = nlohmann::json::parse(out.report);
    const auto& pulses = doc["compile"]["pulses"];
    REQUIRE(pulses.size() == 1);
    CHECK_THAT(pulses[0]["duration_chi"].get<double>(), WithinAbs(25 * kPi, 1e-11));
    CHECK_THAT(pulses[0]["phase"].get<double>(), WithinAbs(-kPi / 2, 1e-15));
    CHECK(pulses[0]["detuning_over_chi"].get<double>() == 0.0);
    CHECK(doc["metrics"]["decompile_max_error"].get<double>() < 1e-12);
  }
}

TEST_CASE("pulse tables round-trip through the report", "[cli][property]") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    JobSpec spec;
    spec.coefficients = oracle::random_coefficients(rng, trial % 9);
    spec.g_over_chi = 0.003 * (1 + trial);
    const JobOutput out = run_job(spec);
    const TargetState back = decompile_check(read_pulse_table(out.report));
    const TargetState target = spec.target();
    REQUIRE(back.max_level() == target.max_level());
    for (int n = 0; n <= target.max_level(); ++n) REQUIRE(std::abs(back[n] - target[n]) < 1e-12);
  }
}

TEST_CASE("simulation modes fill metrics", "[cli]") {
  const std::string coeffs = R"("coefficients": [[1,0],[1,0],[1,0]], "renormalize": true)";
  for (const char* mode : {"rwa", "full", "lindblad"}) {
    const std::string text = std::string("{") + coeffs + R"(, "mode": ")" + mode +
                             R"(", "g_over_chi": 0.05, "guard": 4, "kappa_over_chi": 0.001})";
    const auto doc = nlohmann::json::parse(run_job(parse_jobspec(text)).report);
    const double f = doc["metrics"]["fidelity"].get<double>();
    CHECK(f > 0.98);
    CHECK(f <= 1.0);
    CHECK(doc["metrics"].contains("leakage"));
  }

  const auto sweep = run_job(parse_jobspec(
      std::string("{") + coeffs + R"(, "mode": "sweep", "sweep_ratios": [0.001, 0.01, 0.1]})"));
  REQUIRE(sweep.sweep_csv);
  CHECK(sweep.sweep_csv->rfind("ratio,infidelity,leakage\n", 0) == 0);
  CHECK(std::count(sweep.sweep_csv->begin(), sweep.sweep_csv->end(), '\n') == 4);
}

TEST_CASE("reports are byte-deterministic", "[cli]") {
  const char* text = R"({"coefficients": [[0.6,0],[0,0.8]], "mode": "full", "g_over_chi": 0.02})";
  CHECK(run_job(parse_jobspec(text)).report == run_job(parse_jobspec(text)).report);
}

TEST_CASE("real formatting", "[cli]") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(25 * kPi) == "78.539816339744831");
  CHECK(format_real(0.0) == "0");
}

TEST_CASE("command-line exit codes", "[cli]") {
  Scratch tmp;
  const auto job = [&](const std::string& name, const std::string& text) {
    write_file(tmp.dir / name, text);
    return (tmp.dir / name).string();
  };

  const std::string good =
      job("good.json", R"({"coefficients": [[0.6,0],[0.8,0]], "mode": "compile", "g_over_chi": 0.01})");
  CHECK(run_cli(good + " --out " + (tmp.dir / "a").string()) == 0);
  CHECK(fs::exists(tmp.dir / "a" / "report.json"));

  CHECK(run_cli(job("syntax.json", "{\"coefficients\": ")) == 2);
  CHECK(run_cli((tmp.dir / "missing.json").string()) == 2);
  CHECK(run_cli(good + " --mode nonsense") == 2);
  CHECK(run_cli(good + " --bogus-flag") == 2);

  const std::string short_norm =
      job("norm.json", R"({"coefficients": [[0.7,0],[0.7,0]], "mode": "compile", "g_over_chi": 0.01})");
  CHECK(run_cli(short_norm) == 3);
  CHECK(run_cli(short_norm + " --renormalize") == 0);

  // RK4 at kappa*dt ~ 1e7 overflows; the trace check turns that into exit 4.
  const std::string blowup = job(
      "blowup.json",
      R"({"coefficients": [[0.6,0],[0.8,0]], "mode": "lindblad", "g_over_chi": 0.01,
          "kappa_over_chi": 1e6, "steps_per_pulse": 10, "guard": 2})");
  CHECK(run_cli(blowup) == 4);

  SECTION("flags and stdin") {
    const fs::path out = tmp.dir / "sweep";
    CHECK(run_cli("--mode sweep --sweep-ratios 0.001,0.01 --guard 3 --out " + out.string() + " < " +
                  good) == 0);
    const std::string csv = read_file(out / "sweep.csv");
    CHECK(csv.rfind("ratio,infidelity,leakage\n0.001,", 0) == 0);
    const auto doc = nlohmann::json::parse(read_file(out / "report.json"));
    CHECK(doc["job"]["guard"] == 3);
  }
}
