#include "phonon_chill_cli/commands.hpp"

#include <phonon_chill/closedform.hpp>
#include <phonon_chill/errors.hpp>
#include <phonon_chill/spectral.hpp>
#include <phonon_chill/steadystate.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace phonon_chill::cli {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ValidationCheck cf_vs_liouvillian() {
  ValidationCheck c{"cf_vs_liouvillian", false, 0.0, 1e-6, ""};
  const std::vector<SystemParams> cases = {
      SystemParams::single(1.0, 1.0, 1.0, 2.0, 0.01, 2.0),
      SystemParams::single(1.0, 1.7, 0.5, 1.0, 0.1, 1.0, 0.2),
      SystemParams::single(1.0, 0.4, 0.3, 5.0, 0.5, 0.5, 1.0),
  };
  for (const auto& p : cases) {
    const double cf = phonon_number_cf(p).phonon_number;
    const double lv = solve_model(build_single_tls(p, fock_cutoff_for_tail(p.n_th, 1e-10))).phonon_number;
    c.delta = std::max(c.delta, rel(cf, lv));
  }
  c.pass = c.delta <= c.tol;
  c.detail = std::to_string(cases.size()) + " parameter sets";
  return c;
}

ValidationCheck two_oscillator_vs_liouvillian(TwoOscillatorRate rate) {
  ValidationCheck c{"two_oscillator_vs_liouvillian", false, 0.0, 1e-10, ""};
  struct Case {
    std::size_t n;
    double delta, g, gamma, kappa, n_th, gamma_phi;
  };
  const std::vector<Case> cases = {{1, 0.0, 0.4, 1.0, 0.3, 0.2, 0.0},
                                   {3, 0.6, 0.3, 2.0, 0.5, 0.1, 0.25},
                                   {10, -0.3, 0.2, 0.7, 0.2, 0.15, 0.1}};
  for (const auto& k : cases) {
    SystemParams p = SystemParams::uniform(k.n, 1.0, 1.0 + k.delta, k.g, k.gamma, k.kappa, k.n_th, 0.0, 0.0, k.gamma_phi);
    const double closed = phonon_number_two_osc(p, k.n, rate);
    const std::size_t n_max = fock_cutoff_for_tail(k.n_th, 1e-12);
    const double lv = solve_model(build_two_oscillator(p, k.n, n_max, n_max)).phonon_number;
    c.delta = std::max(c.delta, rel(closed, lv));
  }
  c.pass = c.delta <= c.tol;
  c.detail = rate == TwoOscillatorRate::Full ? "collective rate with 4 gamma_phi"
                                                 : "collective rate with 2 gamma_phi";
  return c;
}

ValidationCheck dicke_vs_eigensolver() {
  ValidationCheck c{"dicke_vs_eigensolver", true, 0.0, 1e-10, ""};
  for (std::size_t n = 2; n <= 12; ++n) {
    const double omega_o = 1.0, J_n = 0.3, gamma = 1.0, gamma_n = 0.9;
    const SystemParams p = SystemParams::uniform(n, 1.0, omega_o, 1.0, gamma, 1.0, 0.0, J_n, gamma_n);
    const auto modes = eigenmodes(AtomicHamiltonian::from_params(p));
    const DickeSpectrum d = dicke_spectrum(n, omega_o, J_n, gamma, gamma_n);
    std::size_t dark = 0;
    for (const auto& m : modes) {
      const double to_dark = std::abs(m.freq - d.dark);
      const double to_bright = std::abs(m.freq - d.bright);
      if (to_dark < to_bright) ++dark;
      c.delta = std::max(c.delta, std::min(to_dark, to_bright));
    }
    if (dark != n - 1) {
      c.pass = false;
      c.detail = "wrong dark multiplicity at N = " + std::to_string(n);
    }
  }
  c.pass = c.pass && c.delta <= c.tol;
  if (c.detail.empty()) c.detail = "N = 2..12";
  return c;
}

ValidationCheck three_level_vs_two_level() {
  ValidationCheck c{"three_level_vs_two_level", false, 0.0, 0.05, ""};
  const double g = 0.5, kappa = 0.05, n_th = 1.0;
  auto three = [&](double gamma_g, double gamma_e, double pump) {
    ThreeLevelParams t;
    t.g = g;
    t.gamma_g = gamma_g;
    t.gamma_e = gamma_e;
    t.pump = pump;
    t.kappa = kappa;
    t.n_th = n_th;
    return solve_model(build_three_level(t, 40)).phonon_number;
  };
  const double gamma_e = 1.0;
  const double hierarchy = three(gamma_e / 100.0, gamma_e, 100.0 * gamma_e);
  const double two_level = phonon_number_cf(SystemParams::single(1.0, 1.0, g, gamma_e, kappa, n_th)).phonon_number;
  const double equal = three(gamma_e, gamma_e, 100.0 * gamma_e);
  const double dephased =
      phonon_number_cf(SystemParams::single(1.0, 1.0, g, gamma_e, kappa, n_th,
                                            dephasing_rate_from_excited_projector(gamma_e)))
          .phonon_number;
  c.delta = std::max(rel(hierarchy, two_level), rel(equal, dephased));
  c.pass = c.delta <= c.tol;
  c.detail = "P = 100 gamma_e; gamma_e = 100 gamma_g and gamma_e = gamma_g with gamma_phi = gamma";
  return c;
}

ValidationCheck cf_rejects_zero_kappa() {
  ValidationCheck c{"cf_rejects_zero_kappa", false, 0.0, 0.0, ""};
  try {
    (void)phonon_number_cf(SystemParams::single(1.0, 1.0, 1.0, 1.0, 0.0, 1.0));
    c.detail = "kappa = 0 was accepted";
  } catch (const ValidationError&) {
    c.pass = true;
    c.detail = "rejected-input (documented exclusion)";
  }
  return c;
}

}  // namespace

std::vector<ValidationCheck> validation_suite(const RunOptions& options) {
  std::vector<ValidationCheck> out;
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, 0.0, 0.0, std::string("exception: ") + e.what()});
    }
  };
  guarded("cf_vs_liouvillian", cf_vs_liouvillian);
  guarded("two_oscillator_vs_liouvillian", [&] { return two_oscillator_vs_liouvillian(options.two_osc_rate); });
  guarded("dicke_vs_eigensolver", dicke_vs_eigensolver);
  guarded("three_level_vs_two_level", three_level_vs_two_level);
  guarded("cf_rejects_zero_kappa", cf_rejects_zero_kappa);
  return out;
}

int run_validate(const RunOptions& options, std::ostream& out, std::ostream& err) {
  const auto checks = validation_suite(options);
  bool all = true;
  for (const auto& c : checks) all = all && c.pass;
  if (options.format == Format::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      arr.push_back({{"check", c.name}, {"pass", c.pass}, {"delta", c.delta}, {"tol", c.tol}, {"detail", c.detail}});
    }
    out << nlohmann::json{{"checks", arr}, {"pass", all}}.dump(2) << '\n';
  } else {
    out << "check,status,delta,tol,detail\n";
    for (const auto& c : checks) {
      out << c.name << ',' << (c.pass ? "PASS" : "FAIL") << ',' << format_double(c.delta) << ','
          << format_double(c.tol) << ',' << c.detail << '\n';
    }
  }
  if (!all) err << "validate: at least one check failed\n";
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace phonon_chill::cli
