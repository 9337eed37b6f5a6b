#include "phonon_chill_cli/commands.hpp"

#include <phonon_chill/errors.hpp>
#include <phonon_chill/hilbert.hpp>

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

namespace phonon_chill::cli {

namespace {

std::string status_for(const std::exception& e) {
  if (dynamic_cast<const MemoryCapError*>(&e)) return "memory_cap";
  if (dynamic_cast<const CFConvergenceError*>(&e)) return "not_converged";
  if (dynamic_cast<const ValidationError*>(&e)) return "invalid_input";
  return "solver_error";
}

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

// Refuse a Liouvillian sweep whose smallest truncation already exceeds the memory cap.
void check_memory(const AppConfig& config, const RunOptions& options) {
  const SystemParams& p = config.system;
  if (select_method(config, p) != Method::Liouvillian) return;
  const double n_th = config.model == ModelKind::ThreeLevel ? config.three_level.n_th : p.n_th;
  const std::size_t n_max = options.n_max ? *options.n_max : config.n_max.value_or(default_fock_cutoff(n_th));
  const double atoms = config.model == ModelKind::ThreeLevel ? 3.0 : std::pow(2.0, static_cast<double>(p.size()));
  const double d = static_cast<double>(n_max + 1) * atoms;
  if (d * d > config.memory_cap) {
    throw MemoryCapError("sweep: Liouvillian with d^2 = " + format_double(d * d) + " exceeds the memory cap " +
                         format_double(config.memory_cap));
  }
}

}  // namespace

std::vector<SweepRow> sweep_rows(const AppConfig& config, const RunOptions& options) {
  const double n_th = config.model == ModelKind::ThreeLevel ? config.three_level.n_th : config.system.n_th;
  if (!(n_th > 0.0)) throw ValidationError("sweep: the figure of merit needs n_th > 0");
  if (config.axes.empty()) throw ValidationError("sweep: no [sweep] axis given");
  check_memory(config, options);

  std::vector<double> kappas{config.system.kappa / config.reference_g};
  std::vector<double> gammas{config.system.gamma.front() / config.reference_g};
  bool sweep_kappa = false;
  bool sweep_gamma = false;
  for (const auto& axis : config.axes) {
    if (axis.name == "kappa") {
      kappas = axis.values();
      sweep_kappa = true;
    } else {
      gammas = axis.values();
      sweep_gamma = true;
    }
  }

  std::vector<SweepRow> rows(kappas.size() * gammas.size());
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      SweepRow& row = rows[i * gammas.size() + j];
      row.kappa = kappas[i];
      row.gamma = gammas[j];
      const double g0 = config.model == ModelKind::ThreeLevel ? config.three_level.g : config.system.g.front();
      row.gamma_crit = critical_gamma(n_th, row.kappa, std::abs(g0) / config.reference_g);
    }
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next.fetch_add(1); k < rows.size(); k = next.fetch_add(1)) {
      SweepRow& row = rows[k];
      try {
        row.result = evaluate_point(config, sweep_kappa ? std::optional<double>(row.kappa) : std::nullopt,
                                    sweep_gamma ? std::optional<double>(row.gamma) : std::nullopt, options);
      } catch (const std::exception& e) {
        row.result = PointResult{};
        row.result.method = select_method(config, config.system);
        row.result.status = status_for(e);
        row.result.warnings.push_back(e.what());
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, rows.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool overlay, bool timing) {
  out << "kappa,gamma,phonon_number,fom,method,status,aux";
  if (overlay) out << ",gamma_crit";
  if (timing) out << ",wall_time";
  out << '\n';
  for (const auto& row : rows) {
    const PointResult& r = row.result;
    out << format_double(row.kappa) << ',' << format_double(row.gamma) << ',' << csv_number(r.phonon_number) << ','
        << csv_number(r.fom) << ',' << to_string(r.method) << ',' << r.status << ',' << format_double(r.aux);
    if (overlay) out << ',' << format_double(row.gamma_crit);
    if (timing) out << ',' << format_double(r.wall_time);
    out << '\n';
  }
}

void write_sweep_json(std::ostream& out, const std::vector<SweepRow>& rows, bool overlay, bool timing) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows) {
    const PointResult& r = row.result;
    nlohmann::json j;
    j["kappa"] = row.kappa;
    j["gamma"] = row.gamma;
    j["phonon_number"] = std::isfinite(r.phonon_number) ? nlohmann::json(r.phonon_number) : nlohmann::json(nullptr);
    j["fom"] = std::isfinite(r.fom) ? nlohmann::json(r.fom) : nlohmann::json(nullptr);
    j["method"] = to_string(r.method);
    j["status"] = r.status;
    j["aux"] = r.aux;
    if (overlay) j["gamma_crit"] = row.gamma_crit;
    if (timing) j["wall_time"] = r.wall_time;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

int run_sweep(const AppConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<SweepRow> rows;
  try {
    rows = sweep_rows(config, options);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  if (options.format == Format::Json) {
    write_sweep_json(out, rows, config.overlay, options.timing);
  } else {
    write_sweep_csv(out, rows, config.overlay, options.timing);
  }
  std::size_t ok = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].result.ok()) {
      ++ok;
    } else {
      err << "row " << k << " (kappa " << format_double(rows[k].kappa) << ", gamma " << format_double(rows[k].gamma)
          << "): " << rows[k].result.status;
      if (!rows[k].result.warnings.empty()) err << ": " << rows[k].result.warnings.back();
      err << '\n';
    }
  }
  if (static_cast<double>(ok) < 0.99 * static_cast<double>(rows.size())) {
    err << "error: only " << ok << " of " << rows.size() << " rows succeeded\n";
    return kExitSolverError;
  }
  return kExitOk;
}

}  // namespace phonon_chill::cli
