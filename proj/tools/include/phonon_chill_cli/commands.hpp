// commands.hpp - the solve / sweep / spectrum / validate subcommands
#pragma once

#include "phonon_chill_cli/config.hpp"

#include <phonon_chill/closedform.hpp>

#include <cstddef>
#include <exception>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace phonon_chill::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitSolverError = 3,
  kExitMemoryCap = 4,
};

enum class Format { Default, Csv, Json };

struct RunOptions {
  Format format = Format::Default;
  std::size_t workers = 1;
  std::optional<std::size_t> n_max;
  std::optional<double> tol;
  bool timing = false;
  // Which collective-rate expression the two-oscillator closed form uses (validate only).
  TwoOscillatorRate two_osc_rate = TwoOscillatorRate::Full;
};

// Worker count from --workers, else PHONON_CHILL_WORKERS, else the hardware concurrency.
std::size_t resolve_workers(std::optional<std::size_t> flag);

int exit_code_for(const std::exception& e);

struct PointResult {
  double phonon_number = std::numeric_limits<double>::quiet_NaN();
  double fom = std::numeric_limits<double>::quiet_NaN();
  Method method = Method::Auto;
  std::string status = "ok";
  double aux = 0.0;  // CF depth or Liouvillian residual
  std::size_t n_max = 0;
  std::size_t unknowns = 0;
  bool degenerate = false;
  bool truncation_converged = true;
  double wall_time = 0.0;
  std::vector<std::string> warnings;

  bool ok() const { return status == "ok" || status == "degenerate"; }
};

// auto: continued fraction for one emitter, two-oscillator closed form for a homogeneous
// non-interacting ensemble with n_th <= N/10, the Liouvillian otherwise.
Method select_method(const AppConfig& config, const SystemParams& params);

// Throws on failure; sweeps turn exceptions into status rows.
PointResult evaluate_point(const AppConfig& config, std::optional<double> kappa, std::optional<double> gamma,
                           const RunOptions& options);

struct SweepRow {
  double kappa = 0.0;  // config units
  double gamma = 0.0;
  PointResult result;
  double gamma_crit = 0.0;
};

std::vector<SweepRow> sweep_rows(const AppConfig& config, const RunOptions& options);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool overlay, bool timing);
void write_sweep_json(std::ostream& out, const std::vector<SweepRow>& rows, bool overlay, bool timing);

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double delta = 0.0;
  double tol = 0.0;
  std::string detail;
};

std::vector<ValidationCheck> validation_suite(const RunOptions& options);

int run_solve(const AppConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err);
int run_sweep(const AppConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err);
int run_spectrum(const AppConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err);
int run_validate(const RunOptions& options, std::ostream& out, std::ostream& err);

// printf("%.17g")
std::string format_double(double value);

}  // namespace phonon_chill::cli
