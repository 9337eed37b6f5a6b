// config.hpp - INI-style run configuration for the phonon-chill tool
//
// Grammar: `[section]` headers, `key = value` lines, `;` or `#` comments. Lists are
// comma separated; N x N matrices are N*N row-major comma lists. Every rate and
// frequency is given in units of [system] reference_g (default 1), so the numbers
// read like the dimensionless axes kappa/g and gamma/g.
//
//   [system]       model (ensemble | three_level), reference_g, N, omega_m, omega, g,
//                  gamma, gamma_phi, kappa, n_th, J, J_offdiag, gamma_cross,
//                  gamma_offdiag, gamma_offdiag_ratio
//   [three_level]  omega_p, omega_o, g, gamma_g, gamma_e, pump
//   [solver]       method (auto | liouvillian | continued_fraction | two_oscillator |
//                  mean_field), n_max, tol, memory_cap
//   [sweep]        kappa = <log|linear>, min, max, points ; gamma = ... ; overlay = bool
//   [spectrum]     target (lowest | anti_w | w | bipartite | seed | index), seed, sites,
//                  index, g_magnitude, n_participants
#pragma once

#include <phonon_chill/models.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace phonon_chill::cli {

enum class ModelKind { Ensemble, ThreeLevel };

enum class Method { Auto, Liouvillian, ContinuedFraction, TwoOscillator, MeanField };

std::string to_string(Method method);
Method parse_method(const std::string& text);

struct Axis {
  std::string name;  // "kappa" or "gamma"
  bool log = true;
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 2;

  std::vector<double> values() const;
};

struct SpectrumConfig {
  std::string target = "lowest";
  std::vector<double> seed;
  std::size_t site_i = 0;
  std::size_t site_j = 1;
  std::size_t index = 0;
  std::optional<double> g_magnitude;  // defaults to |g_0|
  std::size_t n_participants = 0;
};

struct AppConfig {
  ModelKind model = ModelKind::Ensemble;
  double reference_g = 1.0;

  // Values already multiplied by reference_g.
  SystemParams system;
  ThreeLevelParams three_level;

  // Off-diagonal conveniences, kept so sweeps can rebuild gamma_cross for each gamma.
  std::optional<double> gamma_offdiag;
  std::optional<double> gamma_offdiag_ratio;
  bool explicit_gamma_cross = false;

  Method method = Method::Auto;
  std::optional<std::size_t> n_max;
  std::optional<double> tol;
  double memory_cap = 4e8;

  std::vector<Axis> axes;
  bool overlay = false;

  SpectrumConfig spectrum;

  // System parameters with kappa and every gamma_i replaced (both in config units).
  SystemParams system_at(std::optional<double> kappa, std::optional<double> gamma) const;
  ThreeLevelParams three_level_at(std::optional<double> kappa) const;
};

// Throws ValidationError with a message naming the offending key.
AppConfig parse_config_file(const std::string& path);
AppConfig parse_config_string(const std::string& text);

}  // namespace phonon_chill::cli
