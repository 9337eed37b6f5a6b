// hilbert.hpp - operators on truncated composite Hilbert spaces
//
// Basis conventions used throughout the library:
//   * subsystem 0 is the mechanical (Fock) mode,
//   * a two-level factor stores |e> at index 0 and |g> at index 1,
//   * composite indices follow the Kronecker order, subsystem 0 most significant.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace phonon_chill {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr std::size_t kExcited = 0;
inline constexpr std::size_t kGround = 1;

class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<std::size_t> subsystem_dims);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim(std::size_t which) const { return dims_.at(which); }
  std::size_t subsystem_count() const noexcept { return dims_.size(); }
  std::size_t total_dim() const noexcept { return total_; }

  // Local index of subsystem `which` inside composite basis index `state`.
  std::size_t local_index(std::size_t state, std::size_t which) const;

  bool operator==(const SpaceLayout&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 0;
};

// Dense complex matrix tagged with the layout it acts on. Immutable once built.
class LabeledOperator {
 public:
  LabeledOperator() = default;
  LabeledOperator(SpaceLayout layout, Matrix entries);

  static LabeledOperator identity(const SpaceLayout& layout);
  static LabeledOperator zero(const SpaceLayout& layout);

  const SpaceLayout& layout() const noexcept { return layout_; }
  const Matrix& matrix() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return layout_.total_dim(); }

  LabeledOperator adjoint() const;
  bool is_hermitian(double rel_tol = 1e-12) const;

  LabeledOperator& operator+=(const LabeledOperator& rhs);
  LabeledOperator& operator-=(const LabeledOperator& rhs);
  LabeledOperator& operator*=(cplx s);

  friend LabeledOperator operator+(LabeledOperator lhs, const LabeledOperator& rhs) { return lhs += rhs; }
  friend LabeledOperator operator-(LabeledOperator lhs, const LabeledOperator& rhs) { return lhs -= rhs; }
  friend LabeledOperator operator*(LabeledOperator op, cplx s) { return op *= s; }
  friend LabeledOperator operator*(cplx s, LabeledOperator op) { return op *= s; }
  friend LabeledOperator operator*(const LabeledOperator& lhs, const LabeledOperator& rhs);

 private:
  SpaceLayout layout_;
  Matrix entries_;
};

// Lift a local operator on subsystem `which` to the full space (identity elsewhere).
LabeledOperator embed(const SpaceLayout& layout, std::size_t which, const Matrix& local);

// Truncated annihilation operator a on the Fock factor `which`.
LabeledOperator fock_ladder(const SpaceLayout& layout, std::size_t which);

// sigma = |g><e| on the two-level factor `which`.
LabeledOperator spin_lowering(const SpaceLayout& layout, std::size_t which);

// sigma_z = |e><e| - |g><g| on the two-level factor `which`.
LabeledOperator spin_z(const SpaceLayout& layout, std::size_t which);

// Generalized transition |row><col| on factor `which` (any dimension).
LabeledOperator transition(const SpaceLayout& layout, std::size_t which, std::size_t row, std::size_t col);

// Tensor product; the result's layout concatenates both subsystem lists.
LabeledOperator kron(const LabeledOperator& lhs, const LabeledOperator& rhs);

LabeledOperator commutator(const LabeledOperator& lhs, const LabeledOperator& rhs);

// tr(op * rho).
cplx expectation(const LabeledOperator& op, const LabeledOperator& rho);

// Thermal (geometric) state of a lone truncated oscillator, renormalized on the ladder.
LabeledOperator thermal_state(const SpaceLayout& layout, double n_th);

// Smallest cutoff n_max for which the truncated thermal mean differs from n_th by
// less than rel_tol * n_th.
std::size_t fock_cutoff_for_tail(double n_th, double rel_tol);

// ceil(n_th + 10 sqrt(n_th + 1)) + 5
std::size_t default_fock_cutoff(double n_th);

}  // namespace phonon_chill
