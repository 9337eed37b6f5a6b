// spectral.hpp - single-excitation analysis of the non-Hermitian atomic Hamiltonian
//
// H_at = sum_ij (omega_ij - i gamma_ij / 2) sigma_i^dagger sigma_j in the basis
// {|e_1 g_2 ... g_N>, ..., |g_1 ... g_N-1 e_N>}, so a site vector a has a_i on |..e_i..>.
#pragma once

#include "phonon_chill/hilbert.hpp"
#include "phonon_chill/models.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace phonon_chill {

using CVector = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;
using RVector = Eigen::VectorXd;

struct AtomicHamiltonian {
  Matrix matrix;

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
  // Single-emitter decay rates gamma_i = -2 Im H_ii.
  RVector site_decay_rates() const;
  bool complex_symmetric(double rel_tol = 1e-12) const;

  static AtomicHamiltonian from_params(const SystemParams& params);
  // omega_ii = omega_i, omega_ij = J_ij, gamma_ij from the cooperative matrix.
  static AtomicHamiltonian from_parts(const RVector& omega, const Eigen::MatrixXd& J,
                                      const Eigen::MatrixXd& gamma_cross);
};

struct EigenMode {
  cplx freq;       // omega_k - i gamma_k / 2
  CVector right;   // unit 2-norm
  CRow left;       // left * right == 1
  bool subradiant = false;

  double omega() const noexcept { return freq.real(); }
  double gamma() const noexcept { return -2.0 * freq.imag(); }
};

struct SpectrumOptions {
  // Eigenvalues closer than this times the spectral radius form one degenerate cluster.
  double degeneracy_gap = 1e-9;
  // Subradiant when gamma_k < min_i gamma_i - subradiant_margin * mean_i gamma_i.
  double subradiant_margin = 1e-12;
};

// Full spectrum ordered by ascending decay rate, then ascending frequency.
std::vector<EigenMode> eigenmodes(const AtomicHamiltonian& h, const SpectrumOptions& options = {});

// Replace the degenerate cluster that contains `seed` as an eigenvector by a basis whose
// first vector is the seed. Throws ValidationError when seed is not an eigenvector.
std::vector<EigenMode> align_cluster_to_seed(const AtomicHamiltonian& h, std::vector<EigenMode> modes,
                                             const CVector& seed, const SpectrumOptions& options = {});

// Index of the mode whose right vector overlaps most with `v`.
std::size_t closest_mode(const std::vector<EigenMode>& modes, const CVector& v);

// max_kl |<left_k|right_l> - delta_kl|
double biorthogonality_error(const std::vector<EigenMode>& modes);

struct DickeSpectrum {
  cplx bright;  // omega_o + (N-1) J_n - i [gamma + (N-1) gamma_n] / 2
  cplx dark;    // omega_o - J_n - i (gamma - gamma_n) / 2
  std::size_t bright_multiplicity = 1;
  std::size_t dark_multiplicity = 0;
};

DickeSpectrum dicke_spectrum(std::size_t n, double omega_o, double J_n, double gamma, double gamma_n);

RVector w_state(std::size_t n);
// (+1, ..., +1, -1, ..., -1) / sqrt(N); N must be even.
RVector anti_w_state(std::size_t n);
// (e_i - e_j) / sqrt(2)
RVector bipartite_dark(std::size_t n, std::size_t i, std::size_t j);

// Orthonormal basis of the zero-sum subspace starting with `seed` (anti-W by default,
// the (0, 1) bipartite state for odd N).
std::vector<RVector> subradiant_basis(std::size_t n, const std::optional<RVector>& seed = std::nullopt);

// The anti-W state together with every state obtained from it by swapping one + entry
// with one - entry.
std::vector<RVector> anti_w_permutation_set(std::size_t n);

struct CouplingVector {
  CVector g;              // row entries of <g| = (g_1, ..., g_N)
  double magnitude = 1.0; // ||g||_2 after scaling
  bool warning = false;   // target mode was not subradiant
  std::string note;
};

// <g| proportional to the left eigenvector of `mode`, scaled to 2-norm `magnitude`.
CouplingVector selective_coupling(const EigenMode& mode, double magnitude = 1.0);

// Sum_i g_i phi_i (the bra entries are used as given).
cplx overlap(const CouplingVector& g, const CVector& right);

// 1 / sum |a_i|^4 of the normalized vector.
double inverse_participation_ratio(const CVector& v);

struct CriticalReport {
  double g_eff = 0.0;      // sqrt(n) g
  double gamma_sub = 0.0;  // 2 |Im omega_k|
  double ratio = 0.0;      // 2 sqrt(n) g / gamma_sub; 0 when not coolable
  std::size_t participants = 0;
  double participation_exact = 0.0;
  bool coolable = true;    // false for a lossless mode (gamma_sub == 0)
  bool subradiant = true;
  std::string note;
};

// n_participants == 0 selects the rounded inverse participation ratio of the mode.
// gamma_sub <= lossless_tol * max(1, |omega_k|) counts as lossless.
CriticalReport critical_check(const EigenMode& mode, double g_magnitude, std::size_t n_participants = 0,
                              double lossless_tol = 1e-12);

struct EvolveOptions {
  double omega_m = 0.0;  // energy of |1, g...g>; mode frequencies enter as omega_k - omega_m
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  double initial_step = 1e-3;
  std::size_t max_steps = 10'000'000;
};

struct AmplitudeTrajectory {
  std::vector<double> t;
  // Per time: (c_g, c_1, ..., c_N) with c_k the amplitude of |0> (x) |phi_k>.
  std::vector<CVector> amplitudes;
};

// c_g' = -i sum_k <g|phi_k> c_k,   c_k' = -i omega_k c_k - i <g|phi_k> c_g
AmplitudeTrajectory evolve_single_excitation(const AtomicHamiltonian& h, const CouplingVector& g,
                                             const CVector& c0, const std::vector<double>& t_grid,
                                             const EvolveOptions& options = {},
                                             const SpectrumOptions& spectrum_options = {});

// Same equations on a caller-provided mode list (for example after align_cluster_to_seed).
AmplitudeTrajectory evolve_single_excitation(const std::vector<EigenMode>& modes, const CouplingVector& g,
                                             const CVector& c0, const std::vector<double>& t_grid,
                                             const EvolveOptions& options = {});

struct TwoAtomSystem {
  double omega_o = 1.0;
  double J12 = 0.0;
  double gamma = 1.0;
  double gamma12 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
};

// Amplitudes (c_g, c_s, c_a) with g_{s/a} = (g_1 +- g_2)/sqrt(2), gamma_{s/a} = gamma +- gamma_12:
//   i c_g' = g_s c_s + g_a c_a
//   i c_s' = (omega_o + J12) c_s + g_s c_g - i gamma_s / 2 c_s
//   i c_a' = (omega_o - J12) c_a + g_a c_g - i gamma_a / 2 c_a
AmplitudeTrajectory evolve_two_atom(const TwoAtomSystem& system, const CVector& c0,
                                    const std::vector<double>& t_grid, const EvolveOptions& options = {});

}  // namespace phonon_chill
