#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "scatter2d/cli.hpp"

namespace {

constexpr const char* kFooter = R"(Units: hbar^2/(2 mu) = 1, so the energy is E = k^2 and U(r) equals V(r).
Outputs: <stem>.csv (header row, comma separated, '.' decimal, 12 significant
digits, empty cell = gap) and <stem>.json (scalar summary, diagnostics).
Exit codes: 0 success, 2 config error, 3 numerical failure, 4 partial results.
SCATTER2D_THREADS caps the number of worker threads.)";

}  // namespace

int main(int argc, char** argv) {
  namespace cli = scatter2d::cli;
  CLI::App app{"2D quantum and semiclassical scattering workbench", "scatter2d"};
  app.footer(kFooter);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  for (const auto& [name, help] : {
           std::pair{"phase-shifts", "quantum, WKB and Eikonal phase shifts per partial wave"},
           std::pair{"cross-section", "quantum, classical, stationary-phase and Airy dsigma/dtheta"},
           std::pair{"deflection", "deflection function sweep with rainbow/orbiting summary"},
       }) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (default: current directory)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const auto config = cli::load_config(config_path);
    const auto output = cli::run_command(command, config);
    const int rc = cli::write_outputs(output, out_dir);
    if (rc != cli::kOk)
      std::fprintf(stderr, "scatter2d: %d of %d cells failed; see %s.json diagnostics\n", output.failures,
                   output.cells, output.stem.c_str());
    return rc;
  } catch (const cli::ConfigError& e) {
    std::fprintf(stderr, "scatter2d: config error: %s\n", e.what());
    return cli::kConfigError;
  } catch (const scatter2d::Error& e) {
    std::fprintf(stderr, "scatter2d: numerical failure: %s\n", e.what());
    return cli::kNumericalFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "scatter2d: %s\n", e.what());
    return cli::kNumericalFailure;
  }
}
