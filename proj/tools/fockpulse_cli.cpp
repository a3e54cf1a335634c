// fockpulse: compile a Fock-state superposition into a Kerr-cavity pulse
// ladder and verify it by simulation.
//
//   fockpulse job.json --out results/
//   fockpulse --mode sweep --sweep-ratios 0.001,0.01,0.1 < job.json

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "fockpulse/cli_report.hpp"
#include "fockpulse/errors.hpp"

namespace {

std::string slurp(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fockpulse::Error("cannot write " + path.string());
  out << contents;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kerr-cavity Fock-state pulse compiler and simulator"};

  std::string input_path;
  std::string mode;
  int guard = -1;
  bool renormalize = false;
  std::string out_dir;
  std::vector<double> sweep_ratios;
  double kappa = -1.0;

  app.add_option("job", input_path, "Job document (JSON); reads stdin when omitted or '-'");
  app.add_option("--mode", mode, "compile | rwa | full | lindblad | sweep");
  app.add_option("--guard", guard, "Fock levels kept above the target's highest level")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--renormalize", renormalize, "Rescale coefficients to unit norm");
  app.add_option("--out", out_dir, "Directory for report.json (and sweep.csv)");
  app.add_option("--sweep-ratios", sweep_ratios, "Comma-separated g/chi values")->delimiter(',');
  app.add_option("--kappa", kappa, "Photon loss rate kappa/chi")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string text;
    if (input_path.empty() || input_path == "-") {
      text = slurp(std::cin);
    } else {
      std::ifstream in(input_path, std::ios::binary);
      if (!in) throw fockpulse::ParseError("cannot open " + input_path);
      text = slurp(in);
    }

    fockpulse::JobOverrides overrides;
    if (!mode.empty()) overrides.mode = fockpulse::parse_mode(mode);
    if (guard >= 0) overrides.guard = guard;
    if (renormalize) overrides.renormalize = true;
    if (!sweep_ratios.empty()) overrides.sweep_ratios = sweep_ratios;
    if (kappa >= 0.0) overrides.kappa_over_chi = kappa;

    const fockpulse::JobSpec spec = fockpulse::parse_jobspec(text, overrides);
    const fockpulse::JobOutput output = fockpulse::run_job(spec);

    if (out_dir.empty()) {
      std::cout << output.report;
      if (output.sweep_csv) std::cout << *output.sweep_csv;
    } else {
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      write_file(dir / "report.json", output.report);
      if (output.sweep_csv) write_file(dir / "sweep.csv", *output.sweep_csv);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "fockpulse: " << e.what() << "\n";
    return fockpulse::exit_code_for(e);
  }
}
