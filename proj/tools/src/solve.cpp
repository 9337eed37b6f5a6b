#include "phonon_chill_cli/commands.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <ostream>

namespace phonon_chill::cli {

namespace {

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

}  // namespace

int run_solve(const AppConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err) {
  PointResult r;
  try {
    r = evaluate_point(config, std::nullopt, std::nullopt, options);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';
  const double n_th = config.model == ModelKind::ThreeLevel ? config.three_level.n_th : config.system.n_th;

  if (options.format == Format::Json) {
    nlohmann::json j;
    j["method"] = to_string(r.method);
    j["status"] = r.status;
    j["phonon_number"] = number_or_null(r.phonon_number);
    j["fom"] = number_or_null(r.fom);
    j["n_th"] = n_th;
    if (r.method == Method::Liouvillian) {
      j["residual"] = r.aux;
      j["n_max"] = r.n_max;
      j["unknowns"] = r.unknowns;
      j["degenerate"] = r.degenerate;
      j["truncation_converged"] = r.truncation_converged;
    } else if (r.method == Method::ContinuedFraction) {
      j["depth"] = static_cast<std::size_t>(r.aux);
    }
    j["warnings"] = r.warnings;
    if (options.timing) j["wall_time"] = r.wall_time;
    out << j.dump(2) << '\n';
  } else {
    out << "method,phonon_number,fom,n_th,status,aux,n_max";
    if (options.timing) out << ",wall_time";
    out << '\n';
    out << to_string(r.method) << ',' << csv_number(r.phonon_number) << ',' << csv_number(r.fom) << ','
        << format_double(n_th) << ',' << r.status << ',' << format_double(r.aux) << ',' << r.n_max;
    if (options.timing) out << ',' << format_double(r.wall_time);
    out << '\n';
  }
  return kExitOk;
}

}  // namespace phonon_chill::cli
