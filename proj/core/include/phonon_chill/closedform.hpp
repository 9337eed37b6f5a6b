// closedform.hpp - analytic and semi-analytic phonon numbers
//
//   * continued-fraction exact steady state of the single dissipative emitter
//     (with detuning and pure dephasing),
//   * mean-field phonon number and the critical-coupling decay rate,
//   * two-oscillator (collective, low-excitation) steady state.
#pragma once

#include "phonon_chill/models.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace phonon_chill {

struct CFOptions {
  double tol = 1e-12;                 // relative change between successive depths
  std::size_t max_depth = 1u << 22;   // depth doubling stops here
  std::size_t initial_depth = 0;      // 0 selects max(32, 4 n_th)
};

struct CFResult {
  double phonon_number = 0.0;
  std::size_t depth_used = 0;
  bool converged = false;
  double tail_estimate = 0.0;  // |value(K) - value(K/2)|
};

// Recursion coefficients up to depth K: a[0..K], b[0..K] (b[0] unused).
struct CFCoefficients {
  std::vector<double> a;
  std::vector<double> b;
  double f = 0.0;  // 2 g^2 J_0
};

class CFConvergenceError : public std::runtime_error {
 public:
  CFConvergenceError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_(previous), last_(last) {}
  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

// Lorentzian factor of Fock level n: h_n / (Delta^2 + h_n^2), h_n = (gamma + kappa(2n+1) + 4 gamma_phi)/2.
double cf_lorentzian(const SystemParams& params, std::size_t n);

CFCoefficients cf_coefficients(const SystemParams& params, std::size_t depth);

// Evaluate the fraction at fixed depth by backward recurrence (innermost denominator 1).
double cf_evaluate(const SystemParams& params, const CFCoefficients& coefficients);

CFResult phonon_number_cf(const SystemParams& params, const CFOptions& options = {});

enum class MeanFieldForm {
  Derived,    // steady state of the factorized moment equations
  Truncated,  // closed form without the gamma/f term in the linear coefficient
};

double phonon_number_meanfield(const SystemParams& params, MeanFieldForm form = MeanFieldForm::Derived);

// gamma_crit = 2 (n_th kappa + sqrt(n_th^2 kappa^2 + g^2))
double critical_gamma(double n_th, double kappa, double g);
double critical_gamma(const SystemParams& params);

// Phonon number at critical coupling: (1/4) n_th kappa / (n_th kappa + gamma/4) (kappa + 2 gamma)/gamma
double critical_phonon_number(double n_th, double kappa, double gamma);

enum class TwoOscillatorRate {
  Full,           // f numerator kappa + gamma + 4 gamma_phi (consistent with the moment equations)
  HalfDephasing,  // numerator kappa + gamma + 2 gamma_phi; kept for regression checks only
};

double collective_rate(const SystemParams& params, std::size_t n_eff,
                       TwoOscillatorRate form = TwoOscillatorRate::Full);

double phonon_number_two_osc(const SystemParams& params, std::size_t n_eff,
                             TwoOscillatorRate form = TwoOscillatorRate::Full);

// 2 sqrt(N) g
double critical_gamma_ensemble(double g, std::size_t n);

}  // namespace phonon_chill
