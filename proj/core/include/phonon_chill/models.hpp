// models.hpp - Hamiltonians and jump-operator lists for the resonator/emitter models
//
// All frequencies are absolute (no rotating frame); resonance means omega_i == omega_m.
// Emitter energies use the number-operator form omega_i sigma_i^dagger sigma_i.
#pragma once

#include "phonon_chill/hilbert.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace phonon_chill {

struct SystemParams {
  double omega_m = 1.0;
  std::vector<double> omega;  // emitter frequencies omega_i
  std::vector<double> g;      // couplings g_i, sign carries the strain parity
  std::vector<double> gamma;  // decay rates gamma_i
  double gamma_phi = 0.0;     // rate of gamma_phi D[sigma_z] on every emitter
  double kappa = 1.0;
  double n_th = 0.0;
  Eigen::MatrixXd J;            // N x N coherent couplings; empty means none
  Eigen::MatrixXd gamma_cross;  // N x N cooperative rates; empty means diag(gamma)

  std::size_t size() const noexcept { return omega.size(); }

  // Full N x N matrices with the conventions above resolved.
  Eigen::MatrixXd coupling_matrix() const;
  Eigen::MatrixXd cooperative_matrix() const;

  bool homogeneous(double rel_tol = 1e-12) const;
  bool interacting() const;

  // Throws ValidationError on any violated invariant.
  void validate() const;

  static SystemParams single(double omega_m, double omega_o, double g, double gamma,
                             double kappa, double n_th, double gamma_phi = 0.0);

  // Homogeneous all-to-all ensemble: J_ij = J_n, gamma_ij = gamma_n for i != j.
  static SystemParams uniform(std::size_t n, double omega_m, double omega_o, double g,
                              double gamma, double kappa, double n_th, double J_n = 0.0,
                              double gamma_n = 0.0, double gamma_phi = 0.0);
};

struct ThreeLevelParams {
  double omega_p = 0.0;  // energy of |g> relative to |p>
  double omega_o = 1.0;  // |g> -> |e> splitting
  double omega_m = 1.0;
  double g = 1.0;
  double gamma_g = 0.0;  // |g> -> |p>
  double gamma_e = 1.0;  // |e> -> |p>
  double pump = 100.0;   // incoherent |p> -> |g>
  double kappa = 1.0;
  double n_th = 0.0;

  void validate() const;
};

// Level order of the three-level factor.
inline constexpr std::size_t kLevelE = 0;
inline constexpr std::size_t kLevelG = 1;
inline constexpr std::size_t kLevelP = 2;

// rate * ( R rho L^dagger - 1/2 {L^dagger R, rho} ); L == R gives rate * D[L].
struct Dissipator {
  double rate = 0.0;
  LabeledOperator left;
  LabeledOperator right;
  bool cooperative = false;
};

struct LindbladModel {
  LabeledOperator hamiltonian;
  std::vector<Dissipator> dissipators;
  // Excitation number of every basis state; empty when the model has no U(1) label.
  std::vector<int> charges;
  double n_th = 0.0;

  const SpaceLayout& layout() const noexcept { return hamiltonian.layout(); }
};

LindbladModel build_single_tls(const SystemParams& params, std::size_t n_max);
LindbladModel build_ensemble(const SystemParams& params, std::size_t n_max);
LindbladModel build_two_oscillator(const SystemParams& params, std::size_t n_eff,
                                   std::size_t n_max_a, std::size_t n_max_b);
LindbladModel build_three_level(const ThreeLevelParams& params, std::size_t n_max);

// gamma_ee * D[sigma_ee] == (gamma_ee / 4) * D[sigma_z].
constexpr double dephasing_rate_from_excited_projector(double gamma_ee) noexcept {
  return gamma_ee / 4.0;
}

}  // namespace phonon_chill
