// steadystate.hpp - Liouvillian assembly and steady-state solution
//
// Vectorization is column stacking, vec(rho)[i + j*d] = rho(i, j), so that
//   L = -i (I (x) H - H^T (x) I)
//     + sum_k rate_k [ conj(A_k) (x) B_k - 1/2 (I (x) A_k^dagger B_k + (A_k^dagger B_k)^T (x) I) ]
// for every jump pair (A_k, B_k) = (left, right).
#pragma once

#include "phonon_chill/hilbert.hpp"
#include "phonon_chill/models.hpp"

#include <Eigen/SparseCore>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace phonon_chill {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

inline constexpr double kDefaultMemoryCap = 4e8;

struct AssembleOptions {
  // Reject layouts whose vectorized dimension d^2 exceeds this many entries.
  double max_unknowns = kDefaultMemoryCap;
  // Keep only the rho(i, j) with charge(i) == charge(j). Requires model charges.
  bool zero_charge_sector = false;
};

struct Liouvillian {
  SpaceLayout layout;
  // Square sparse superoperator over the kept vectorized indices.
  SparseMatrix matrix;
  // Vectorized indices (i + j*d) represented by matrix rows/columns; empty means all d^2.
  std::vector<std::size_t> kept;
  std::vector<int> charges;
  double n_th = 0.0;

  std::size_t unknowns() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
  bool restricted() const noexcept { return !kept.empty(); }
};

Liouvillian assemble(const LindbladModel& model, const AssembleOptions& options = {});

struct SolveOptions {
  // Up to this many unknowns degeneracy is read off a dense SVD of L; above it an
  // inverse iteration on the bordered LU estimates the smallest eigenvalue instead.
  std::size_t dense_probe_limit = 256;
  // Largest system for which the dense minimal-norm fallback is attempted.
  std::size_t min_norm_limit = 2000;
  double degeneracy_threshold = 1e-10;
  // Restrict a full Liouvillian to the zero-charge block when its charges allow it.
  bool use_charge_sector = true;
};

struct SteadyState {
  LabeledOperator rho;
  double residual = 0.0;  // ||L vec(rho)|| / ||L||_F
  double phonon_number = 0.0;
  double n_th = 0.0;
  bool degenerate = false;
  std::size_t unknowns = 0;
  std::string method;
};

SteadyState solve_steady(const Liouvillian& liouvillian, const SolveOptions& options = {});

// assemble (zero-charge block when charges are present) followed by solve_steady.
SteadyState solve_model(const LindbladModel& model, const AssembleOptions& assemble_options = {},
                        const SolveOptions& solve_options = {});

// <a^dagger a> of subsystem 0; the imaginary part must vanish to 1e-8.
double phonon_number(const SteadyState& state);

// <a^dagger a> / n_th; throws ValidationError when n_th == 0.
double figure_of_merit(const SteadyState& state);

double min_eigenvalue(const LabeledOperator& rho);

struct TruncatedSolve {
  SteadyState state;
  std::size_t n_max = 0;
  bool converged = true;
  double relative_change = 0.0;
};

// Solve at n_max, re-solve at 2 n_max and require the relative change of <a^dagger a>
// to stay below rel_tol. The larger truncation is returned.
TruncatedSolve solve_with_truncation_check(const std::function<LindbladModel(std::size_t)>& build,
                                           std::size_t n_max, double rel_tol = 1e-6,
                                           const AssembleOptions& assemble_options = {},
                                           const SolveOptions& solve_options = {});

// Apply L to a density matrix (reshaped through the vectorization convention).
Matrix apply(const Liouvillian& liouvillian, const Matrix& rho);

}  // namespace phonon_chill
