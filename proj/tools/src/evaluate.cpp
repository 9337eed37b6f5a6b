#include "phonon_chill_cli/commands.hpp"

#include <phonon_chill/errors.hpp>
#include <phonon_chill/steadystate.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

namespace phonon_chill::cli {

namespace {

constexpr double kTruncationTol = 1e-6;

PointResult solve_liouvillian(const AppConfig& config, const SystemParams& params, const ThreeLevelParams& three,
                              const RunOptions& options) {
  PointResult r;
  r.method = Method::Liouvillian;
  AssembleOptions aopts;
  aopts.max_unknowns = config.memory_cap;
  auto build = [&](std::size_t n) {
    return config.model == ModelKind::ThreeLevel ? build_three_level(three, n) : build_ensemble(params, n);
  };
  const double n_th = config.model == ModelKind::ThreeLevel ? three.n_th : params.n_th;
  const std::optional<std::size_t> fixed = options.n_max ? options.n_max : config.n_max;
  SteadyState state;
  if (fixed) {
    state = solve_model(build(*fixed), aopts);
    r.n_max = *fixed;
  } else {
    const auto checked = solve_with_truncation_check(build, default_fock_cutoff(n_th),
                                                     options.tol.value_or(config.tol.value_or(kTruncationTol)), aopts);
    state = checked.state;
    r.n_max = checked.n_max;
    r.truncation_converged = checked.converged;
    if (!checked.converged) {
      r.warnings.push_back("Fock truncation not converged (relative change " + format_double(checked.relative_change) +
                           " at n_max " + std::to_string(checked.n_max) + ")");
    }
  }
  r.phonon_number = state.phonon_number;
  r.aux = state.residual;
  r.unknowns = state.unknowns;
  r.degenerate = state.degenerate;
  if (state.degenerate) {
    r.status = "degenerate";
    r.warnings.push_back("degenerate steady state: returned the trace-normalized minimal-norm solution");
  }
  return r;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::size_t resolve_workers(std::optional<std::size_t> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("PHONON_CHILL_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const MemoryCapError*>(&e)) return kExitMemoryCap;
  if (dynamic_cast<const ValidationError*>(&e)) return kExitConfigError;
  return kExitSolverError;
}

Method select_method(const AppConfig& config, const SystemParams& params) {
  if (config.method != Method::Auto) return config.method;
  if (config.model == ModelKind::ThreeLevel) return Method::Liouvillian;
  const std::size_t n = params.size();
  if (n == 1) return Method::ContinuedFraction;
  if (params.homogeneous() && !params.interacting() && params.n_th <= static_cast<double>(n) / 10.0) {
    return Method::TwoOscillator;
  }
  return Method::Liouvillian;
}

PointResult evaluate_point(const AppConfig& config, std::optional<double> kappa, std::optional<double> gamma,
                           const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const SystemParams params = config.system_at(kappa, gamma);
  const ThreeLevelParams three = config.three_level_at(kappa);
  if (config.model == ModelKind::Ensemble) {
    params.validate();
  } else {
    three.validate();
  }
  const Method method = select_method(config, params);
  if (config.model == ModelKind::ThreeLevel && method != Method::Liouvillian) {
    throw ValidationError("the three_level model is only solved by the Liouvillian");
  }

  PointResult r;
  switch (method) {
    case Method::Liouvillian:
      r = solve_liouvillian(config, params, three, options);
      break;
    case Method::ContinuedFraction: {
      CFOptions cf;
      if (options.tol) cf.tol = *options.tol;
      else if (config.tol) cf.tol = *config.tol;
      const CFResult res = phonon_number_cf(params, cf);
      r.phonon_number = res.phonon_number;
      r.aux = static_cast<double>(res.depth_used);
      break;
    }
    case Method::TwoOscillator:
      r.phonon_number = phonon_number_two_osc(params, params.size(), options.two_osc_rate);
      break;
    case Method::MeanField:
      r.phonon_number = phonon_number_meanfield(params);
      break;
    case Method::Auto:
      break;
  }
  r.method = method;
  if (method == Method::TwoOscillator && params.n_th > static_cast<double>(params.size()) / 10.0) {
    r.warnings.push_back("two-oscillator closed form assumes n_th << N");
  }
  const double n_th = config.model == ModelKind::ThreeLevel ? three.n_th : params.n_th;
  if (n_th > 0.0) {
    r.fom = r.phonon_number / n_th;
  } else {
    r.warnings.push_back("n_th = 0: figure of merit is undefined");
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace phonon_chill::cli
