#include "phonon_chill/hilbert.hpp"

#include "phonon_chill/errors.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <string>

namespace phonon_chill {

namespace {

Matrix kron_dense(const Matrix& lhs, const Matrix& rhs) {
  Matrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) = lhs(i, j) * rhs;
    }
  }
  return out;
}

void require_index(const SpaceLayout& layout, std::size_t which, const char* what) {
  if (which >= layout.subsystem_count()) {
    throw ValidationError(std::string(what) + ": subsystem index " + std::to_string(which) +
                          " out of range for layout with " +
                          std::to_string(layout.subsystem_count()) + " factors");
  }
}

void require_same_layout(const SpaceLayout& a, const SpaceLayout& b, const char* what) {
  if (!(a == b)) {
    throw ValidationError(std::string(what) + ": layout mismatch");
  }
}

}  // namespace

SpaceLayout::SpaceLayout(std::vector<std::size_t> subsystem_dims) : dims_(std::move(subsystem_dims)) {
  if (dims_.empty()) {
    throw ValidationError("SpaceLayout: at least one subsystem is required");
  }
  total_ = 1;
  for (std::size_t d : dims_) {
    if (d < 2) {
      throw ValidationError("SpaceLayout: every subsystem needs dimension >= 2");
    }
    total_ *= d;
  }
}

std::size_t SpaceLayout::local_index(std::size_t state, std::size_t which) const {
  std::size_t stride = 1;
  for (std::size_t k = dims_.size(); k-- > which + 1;) {
    stride *= dims_[k];
  }
  return (state / stride) % dims_.at(which);
}

LabeledOperator::LabeledOperator(SpaceLayout layout, Matrix entries)
    : layout_(std::move(layout)), entries_(std::move(entries)) {
  const auto d = static_cast<Eigen::Index>(layout_.total_dim());
  if (entries_.rows() != d || entries_.cols() != d) {
    throw ValidationError("LabeledOperator: matrix shape does not match layout dimension " +
                          std::to_string(d));
  }
}

LabeledOperator LabeledOperator::identity(const SpaceLayout& layout) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  return {layout, Matrix::Identity(d, d)};
}

LabeledOperator LabeledOperator::zero(const SpaceLayout& layout) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  return {layout, Matrix::Zero(d, d)};
}

LabeledOperator LabeledOperator::adjoint() const { return {layout_, entries_.adjoint()}; }

bool LabeledOperator::is_hermitian(double rel_tol) const {
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

LabeledOperator& LabeledOperator::operator+=(const LabeledOperator& rhs) {
  require_same_layout(layout_, rhs.layout_, "operator+");
  entries_ += rhs.entries_;
  return *this;
}

LabeledOperator& LabeledOperator::operator-=(const LabeledOperator& rhs) {
  require_same_layout(layout_, rhs.layout_, "operator-");
  entries_ -= rhs.entries_;
  return *this;
}

LabeledOperator& LabeledOperator::operator*=(cplx s) {
  entries_ *= s;
  return *this;
}

LabeledOperator operator*(const LabeledOperator& lhs, const LabeledOperator& rhs) {
  require_same_layout(lhs.layout_, rhs.layout_, "operator*");
  // Model operators are very sparse; skip the cubic dense product on large spaces.
  if (lhs.entries_.rows() >= 64) {
    const Eigen::SparseMatrix<cplx> a = lhs.entries_.sparseView(0.0, 0.0);
    const Eigen::SparseMatrix<cplx> b = rhs.entries_.sparseView(0.0, 0.0);
    return {lhs.layout_, Matrix(a * b)};
  }
  return {lhs.layout_, lhs.entries_ * rhs.entries_};
}

LabeledOperator embed(const SpaceLayout& layout, std::size_t which, const Matrix& local) {
  require_index(layout, which, "embed");
  const auto local_dim = static_cast<Eigen::Index>(layout.dim(which));
  if (local.rows() != local_dim || local.cols() != local_dim) {
    throw ValidationError("embed: local operator does not match subsystem dimension");
  }
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < layout.subsystem_count(); ++k) {
    const auto dk = static_cast<Eigen::Index>(layout.dim(k));
    out = kron_dense(out, k == which ? local : Matrix(Matrix::Identity(dk, dk)));
  }
  return {layout, std::move(out)};
}

LabeledOperator fock_ladder(const SpaceLayout& layout, std::size_t which) {
  require_index(layout, which, "fock_ladder");
  const auto d = static_cast<Eigen::Index>(layout.dim(which));
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return embed(layout, which, a);
}

LabeledOperator spin_lowering(const SpaceLayout& layout, std::size_t which) {
  require_index(layout, which, "spin_lowering");
  if (layout.dim(which) != 2) {
    throw ValidationError("spin_lowering: subsystem " + std::to_string(which) + " is not two-level");
  }
  Matrix s = Matrix::Zero(2, 2);
  s(kGround, kExcited) = 1.0;
  return embed(layout, which, s);
}

LabeledOperator spin_z(const SpaceLayout& layout, std::size_t which) {
  require_index(layout, which, "spin_z");
  if (layout.dim(which) != 2) {
    throw ValidationError("spin_z: subsystem " + std::to_string(which) + " is not two-level");
  }
  Matrix s = Matrix::Zero(2, 2);
  s(kExcited, kExcited) = 1.0;
  s(kGround, kGround) = -1.0;
  return embed(layout, which, s);
}

LabeledOperator transition(const SpaceLayout& layout, std::size_t which, std::size_t row, std::size_t col) {
  require_index(layout, which, "transition");
  const std::size_t d = layout.dim(which);
  if (row >= d || col >= d) {
    throw ValidationError("transition: level index out of range");
  }
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  s(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  return embed(layout, which, s);
}

LabeledOperator kron(const LabeledOperator& lhs, const LabeledOperator& rhs) {
  std::vector<std::size_t> dims = lhs.layout().dims();
  dims.insert(dims.end(), rhs.layout().dims().begin(), rhs.layout().dims().end());
  return {SpaceLayout(std::move(dims)), kron_dense(lhs.matrix(), rhs.matrix())};
}

LabeledOperator commutator(const LabeledOperator& lhs, const LabeledOperator& rhs) {
  return lhs * rhs - rhs * lhs;
}

cplx expectation(const LabeledOperator& op, const LabeledOperator& rho) {
  require_same_layout(op.layout(), rho.layout(), "expectation");
  // tr(A B) = sum_ij A_ij B_ji
  return op.matrix().cwiseProduct(rho.matrix().transpose()).sum();
}

LabeledOperator thermal_state(const SpaceLayout& layout, double n_th) {
  if (layout.subsystem_count() != 1) {
    throw ValidationError("thermal_state: expects a single Fock factor");
  }
  if (n_th < 0.0) {
    throw ValidationError("thermal_state: n_th must be non-negative");
  }
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  const double ratio = n_th / (n_th + 1.0);
  Matrix rho = Matrix::Zero(d, d);
  double weight = 1.0;
  double norm = 0.0;
  for (Eigen::Index n = 0; n < d; ++n) {
    rho(n, n) = weight;
    norm += weight;
    weight *= ratio;
  }
  rho /= norm;
  return {layout, std::move(rho)};
}

std::size_t fock_cutoff_for_tail(double n_th, double rel_tol) {
  if (n_th <= 0.0) {
    return 1;
  }
  const double q = n_th / (n_th + 1.0);
  // Truncated geometric mean: sum_{n<=N} n q^n / sum_{n<=N} q^n.
  double weight = 1.0, norm = 1.0, mean_num = 0.0;
  for (std::size_t n = 1; n < 1'000'000; ++n) {
    weight *= q;
    norm += weight;
    mean_num += static_cast<double>(n) * weight;
    if (std::abs(mean_num / norm - n_th) <= rel_tol * n_th) {
      return n;
    }
  }
  throw ValidationError("fock_cutoff_for_tail: no cutoff below 1e6 meets the tolerance");
}

std::size_t default_fock_cutoff(double n_th) {
  return static_cast<std::size_t>(std::ceil(n_th + 10.0 * std::sqrt(n_th + 1.0))) + 5;
}

}  // namespace phonon_chill
