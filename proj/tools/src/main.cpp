#include "phonon_chill_cli/commands.hpp"
#include "phonon_chill_cli/config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

using namespace phonon_chill::cli;

int main(int argc, char** argv) {
  CLI::App app{"phonon-chill: steady-state phonon cooling by dissipative two-level ensembles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "default";
  std::optional<std::size_t> workers;
  std::optional<std::size_t> n_max;
  std::optional<double> tol;
  bool timing = false;
  std::string two_osc_rate = "full";

  const std::map<std::string, Format> formats{{"default", Format::Default}, {"csv", Format::Csv}, {"json", Format::Json}};
  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "INI configuration file");
    if (needs_config) opt->required();
    sub->add_option("--out", out_path, "write results here instead of stdout");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", workers, "worker threads (fallback: PHONON_CHILL_WORKERS)");
    sub->add_option("--nmax", n_max, "Fock cutoff; disables the automatic truncation check");
    sub->add_option("--tol", tol, "continued-fraction / truncation tolerance");
  };
  auto* solve = app.add_subcommand("solve", "single-point steady state");
  common(solve, true);
  auto* sweep = app.add_subcommand("sweep", "(kappa, gamma) grid of figures of merit");
  common(sweep, true);
  sweep->add_flag("--timing", timing, "append per-row wall time (output no longer byte-reproducible)");
  auto* spectrum = app.add_subcommand("spectrum", "eigenmodes, selective coupling and critical check");
  common(spectrum, true);
  auto* validate = app.add_subcommand("validate", "cross-method consistency checks");
  common(validate, false);
  validate->add_option("--two-osc-rate", two_osc_rate, "collective rate used by the closed form")
      ->check(CLI::IsMember({"full", "half_dephasing"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  RunOptions options;
  options.format = formats.at(format);
  options.workers = resolve_workers(workers);
  options.n_max = n_max;
  options.tol = tol;
  options.timing = timing;
  options.two_osc_rate = two_osc_rate == "half_dephasing" ? phonon_chill::TwoOscillatorRate::HalfDephasing
                                                     : phonon_chill::TwoOscillatorRate::Full;

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot open output file " << out_path << '\n';
      return kExitConfigError;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  if (*validate) return run_validate(options, out, std::cerr);

  AppConfig config;
  try {
    config = parse_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  if (*solve) return run_solve(config, options, out, std::cerr);
  if (*sweep) return run_sweep(config, options, out, std::cerr);
  return run_spectrum(config, options, out, std::cerr);
}
