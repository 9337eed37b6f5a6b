#include "phonon_chill/closedform.hpp"

#include "phonon_chill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace phonon_chill {

namespace {

void require_single(const SystemParams& params, const char* who) {
  if (params.size() != 1) {
    throw ValidationError(std::string(who) + ": expects exactly one emitter");
  }
  if (!(params.kappa > 0.0)) {
    throw ValidationError(std::string(who) + ": kappa must be positive");
  }
}

}  // namespace

double cf_lorentzian(const SystemParams& params, std::size_t n) {
  const double delta = params.omega.front() - params.omega_m;
  const double h = 0.5 * (params.gamma.front() + params.kappa * (2.0 * static_cast<double>(n) + 1.0) +
                          4.0 * params.gamma_phi);
  return h / (delta * delta + h * h);
}

CFCoefficients cf_coefficients(const SystemParams& params, std::size_t depth) {
  require_single(params, "cf_coefficients");
  const double g = std::abs(params.g.front());
  const double gamma = params.gamma.front();
  const double kappa = params.kappa;
  const double n_th = params.n_th;
  if (!(g > 0.0)) {
    throw ValidationError("cf_coefficients: recursion requires g != 0");
  }

  CFCoefficients c;
  c.a.assign(depth + 1, 0.0);
  c.b.assign(depth + 2, 0.0);
  c.f = 2.0 * g * g * cf_lorentzian(params, 0);
  const double f = c.f;
  const double level0 = gamma + f * (2.0 * n_th + 1.0);
  c.a[0] = -(f + gamma) / level0;
  c.b[1] = 2.0 * f / level0;

  // x_0, y_0 close the level-0 equations into the same linear form used for n >= 1.
  double y_prev = gamma * f / (g * (f + gamma));
  double x_prev = n_th * y_prev;
  for (std::size_t n = 1; n <= depth; ++n) {
    const double nd = static_cast<double>(n);
    const double u = 2.0 * g * (nd + 1.0);
    const double l = g * g / (nd * kappa);
    const double t = g * (2.0 * n_th + 1.0 + gamma / (nd * kappa));
    const double r = u * l + t / cf_lorentzian(params, n);
    const double y = t * u / r;
    const double x = (g * (2.0 * n_th + 1.0) * t - l * (gamma + nd * kappa)) / r;
    const double denom = t * y_prev + u * x + gamma + nd * kappa;
    c.a[n] = t * x_prev / denom;
    c.b[n + 1] = u * y / denom;
    x_prev = x;
    y_prev = y;
  }
  c.b.resize(depth + 1);
  return c;
}

double cf_evaluate(const SystemParams& params, const CFCoefficients& c) {
  double tail = 1.0;
  for (std::size_t n = c.a.size() - 1; n >= 1; --n) {
    tail = 1.0 - c.a[n] * c.b[n] / tail;
  }
  const double sigma_z = c.a[0] / tail;
  return params.n_th - params.gamma.front() / (2.0 * params.kappa) * (1.0 + sigma_z);
}

CFResult phonon_number_cf(const SystemParams& params, const CFOptions& options) {
  require_single(params, "phonon_number_cf");
  params.validate();
  CFResult out;
  // Decoupled, zero-temperature and lossless-emitter limits are exact.
  if (params.g.front() == 0.0 || params.n_th == 0.0 || params.gamma.front() == 0.0) {
    out.phonon_number = params.n_th;
    out.converged = true;
    return out;
  }
  std::size_t depth = options.initial_depth != 0
                          ? options.initial_depth
                          : std::max<std::size_t>(32, static_cast<std::size_t>(std::ceil(4.0 * params.n_th)));
  double previous = cf_evaluate(params, cf_coefficients(params, depth));
  while (true) {
    const std::size_t next = 2 * depth;
    if (next > options.max_depth) {
      throw CFConvergenceError("phonon_number_cf: no convergence by depth " + std::to_string(depth), previous,
                               previous);
    }
    const double value = cf_evaluate(params, cf_coefficients(params, next));
    if (!std::isfinite(value)) {
      throw CFConvergenceError("phonon_number_cf: non-finite value at depth " + std::to_string(next), previous,
                               value);
    }
    const double change = std::abs(value - previous);
    if (change <= options.tol * std::max(std::abs(value), 1e-300)) {
      out.phonon_number = value;
      out.depth_used = next;
      out.converged = true;
      out.tail_estimate = change;
      return out;
    }
    if (2 * next > options.max_depth) {
      throw CFConvergenceError("phonon_number_cf: no convergence by depth " + std::to_string(next), previous,
                               value);
    }
    previous = value;
    depth = next;
  }
}

double phonon_number_meanfield(const SystemParams& params, MeanFieldForm form) {
  require_single(params, "phonon_number_meanfield");
  const double n = params.n_th;
  const double gamma = params.gamma.front();
  const double kappa = params.kappa;
  const double g = params.g.front();
  const double f = 2.0 * g * g * cf_lorentzian(params, 0);

  if (form == MeanFieldForm::Truncated) {
    const double b = 2.0 * n - gamma / kappa - 1.0;
    if (f == 0.0) return std::numeric_limits<double>::infinity();
    return b / 4.0 + std::sqrt(b * b / 16.0 + n * (gamma + f) / (2.0 * f));
  }
  // 2 A^2 - B A - C = 0 with B = 2n - gamma/kappa - 1 - gamma/f, C = n (1 + gamma/f),
  // multiplied through by f so that f -> 0 stays finite.
  const double bf = (2.0 * n - gamma / kappa - 1.0) * f - gamma;
  const double cf = n * (f + gamma);
  const double sf = std::sqrt(bf * bf + 8.0 * cf * f);
  if (bf <= 0.0) {
    const double den = sf - bf;
    return den == 0.0 ? 0.0 : 2.0 * cf / den;
  }
  return (bf + sf) / (4.0 * f);
}

double critical_gamma(double n_th, double kappa, double g) {
  const double nk = n_th * kappa;
  return 2.0 * (nk + std::sqrt(nk * nk + g * g));
}

double critical_gamma(const SystemParams& params) {
  return critical_gamma(params.n_th, params.kappa, params.g.front());
}

double critical_phonon_number(double n_th, double kappa, double gamma) {
  const double nk = n_th * kappa;
  return 0.25 * nk / (nk + gamma / 4.0) * (kappa + 2.0 * gamma) / gamma;
}

double collective_rate(const SystemParams& params, std::size_t n_eff, TwoOscillatorRate form) {
  const double delta = params.omega.front() - params.omega_m;
  const double gamma = params.gamma.front();
  const double width = params.kappa + gamma + 4.0 * params.gamma_phi;
  const double numerator =
      form == TwoOscillatorRate::Full ? width : params.kappa + gamma + 2.0 * params.gamma_phi;
  const double g = params.g.front();
  return static_cast<double>(n_eff) * g * g * numerator / (delta * delta + width * width / 4.0);
}

double phonon_number_two_osc(const SystemParams& params, std::size_t n_eff, TwoOscillatorRate form) {
  params.validate();
  if (n_eff == 0) {
    throw ValidationError("phonon_number_two_osc: N_eff must be positive");
  }
  if (params.size() > 1 && !params.homogeneous()) {
    throw ValidationError("phonon_number_two_osc: requires a homogeneous ensemble");
  }
  const double f = collective_rate(params, n_eff, form);
  const double gamma = params.gamma.front();
  const double transfer = (f == 0.0 || gamma == 0.0) ? 0.0 : gamma * f / (gamma + f);
  return params.kappa / (params.kappa + transfer) * params.n_th;
}

double critical_gamma_ensemble(double g, std::size_t n) {
  return 2.0 * std::sqrt(static_cast<double>(n)) * g;
}

}  // namespace phonon_chill
