#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace chaos::cli {

enum class ExitCode : int { ok = 0, input_error = 1, precision_warning = 2 };

struct ExperimentConfig {
  std::string command;  // spectrum, cumulants, criterion, density, simulate, free-sim, fbm, transfer

  std::string kernel_path;
  std::string spectra_path;
  std::string target;
  std::string law;
  std::string grid;  // lo:hi:step
  std::vector<std::size_t> sizes;
  double hurst = 0.5;
  double lambda0 = 0.0;
  std::size_t samples = 100000;
  std::size_t dim = 500;
  int r_max = 6;
  std::string flavor;  // empty: classical, or the flavor of --law
  double sd = 0.0;
  std::optional<int> start_order;
  std::optional<double> zero_tol;
  std::optional<double> cluster_tol;

  std::optional<std::uint64_t> seed;
  double tol = 1e-2;
  std::string out;     // empty: standard output
  bool strict = false;
  std::string format;  // json | csv; empty picks the command's default
};

/// Overlays keys of a JSON config object onto `config`. Keys use the flag
/// names without dashes (e.g. "seed", "tol", "spectra", "rmax").
void apply_config(ExperimentConfig& config, const nlohmann::json& j);

/// Runs one experiment. Diagnostics go to `err` as a single line.
ExitCode run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point (flag parsing, --config overlay, run).
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace chaos::cli
