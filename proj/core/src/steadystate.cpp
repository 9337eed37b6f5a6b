#include "phonon_chill/steadystate.hpp"

#include "phonon_chill/errors.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace phonon_chill {

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseMatrix to_sparse(const Matrix& m) { return m.sparseView(0.0, 0.0); }

// Bookkeeping for which vectorized indices survive and where they land.
struct IndexMap {
  std::size_t d = 0;
  bool full = true;
  std::vector<long> position;  // vec index -> row, -1 when dropped
  std::vector<std::size_t> kept;

  long at(std::size_t i, std::size_t j) const {
    const std::size_t v = i + j * d;
    return full ? static_cast<long>(v) : position[v];
  }
};

IndexMap make_index_map(std::size_t d, const std::vector<int>* charges) {
  IndexMap map;
  map.d = d;
  if (charges == nullptr) {
    return map;
  }
  map.full = false;
  map.position.assign(d * d, -1);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      if ((*charges)[i] == (*charges)[j]) {
        const std::size_t v = i + j * d;
        map.position[v] = static_cast<long>(map.kept.size());
        map.kept.push_back(v);
      }
    }
  }
  // kept is built column by column, i.e. already in ascending vec order
  return map;
}

void push(std::vector<Triplet>& out, const IndexMap& map, std::size_t ri, std::size_t rj,
          std::size_t ci, std::size_t cj, cplx value) {
  const long row = map.at(ri, rj);
  const long col = map.at(ci, cj);
  if (row < 0 && col < 0) return;
  if (row < 0 || col < 0) {
    throw ValidationError("assemble: model couples the zero-charge sector to other sectors");
  }
  out.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
}

// Basis states sharing a charge with k (everything when no charges are given).
class Partners {
 public:
  Partners(std::size_t d, const std::vector<int>* charges) : d_(d) {
    if (charges == nullptr) return;
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < d; ++k) groups[(*charges)[k]].push_back(k);
    group_of_.resize(d);
    for (auto& [q, members] : groups) {
      for (std::size_t k : members) group_of_[k] = groups_.size();
      groups_.push_back(std::move(members));
    }
  }

  template <typename Fn>
  void for_each(std::size_t k, Fn&& fn) const {
    if (groups_.empty()) {
      for (std::size_t j = 0; j < d_; ++j) fn(j);
    } else {
      for (std::size_t j : groups_[group_of_[k]]) fn(j);
    }
  }

 private:
  std::size_t d_;
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<std::size_t> group_of_;
};

}  // namespace

Liouvillian assemble(const LindbladModel& model, const AssembleOptions& options) {
  const SpaceLayout& layout = model.layout();
  const std::size_t d = layout.total_dim();
  const double d2 = static_cast<double>(d) * static_cast<double>(d);
  if (d2 > options.max_unknowns) {
    throw MemoryCapError("assemble: vectorized dimension " + std::to_string(d) + "^2 exceeds cap of " +
                         std::to_string(static_cast<long long>(options.max_unknowns)) + " entries");
  }
  const std::vector<int>* charges = nullptr;
  if (options.zero_charge_sector) {
    if (model.charges.size() != d) {
      throw ValidationError("assemble: zero-charge sector requested but the model carries no charges");
    }
    charges = &model.charges;
  }
  const IndexMap map = make_index_map(d, charges);
  const Partners partners(d, charges);

  // Left and right multiplication parts: L rho = K_l rho + rho K_r + sum r B rho A^dagger.
  const cplx I(0.0, 1.0);
  const SparseMatrix h = to_sparse(model.hamiltonian.matrix());
  SparseMatrix decay(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (const Dissipator& term : model.dissipators) {
    const SparseMatrix left = to_sparse(term.left.matrix());
    const SparseMatrix right = to_sparse(term.right.matrix());
    decay += (0.5 * term.rate) * SparseMatrix(left.adjoint() * right);
  }
  const SparseMatrix kl = SparseMatrix(-I * h - decay).pruned();
  const SparseMatrix kr = SparseMatrix(I * h - decay).pruned();

  std::vector<Triplet> triplets;
  // vec(K rho): row (i, j), col (k, j), value K(i, k)
  for (int col = 0; col < kl.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(kl, col); it; ++it) {
      const auto i = static_cast<std::size_t>(it.row());
      const auto k = static_cast<std::size_t>(it.col());
      partners.for_each(i, [&](std::size_t j) { push(triplets, map, i, j, k, j, it.value()); });
    }
  }
  // vec(rho K): row (i, j), col (i, l), value K(l, j)
  for (int col = 0; col < kr.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(kr, col); it; ++it) {
      const auto l = static_cast<std::size_t>(it.row());
      const auto j = static_cast<std::size_t>(it.col());
      partners.for_each(j, [&](std::size_t i) { push(triplets, map, i, j, i, l, it.value()); });
    }
  }
  // vec(B rho A^dagger): row (i, j), col (k, l), value B(i, k) conj(A(j, l))
  for (const Dissipator& term : model.dissipators) {
    const SparseMatrix b = to_sparse(term.right.matrix());
    const SparseMatrix a = to_sparse(term.left.matrix());
    std::vector<std::tuple<std::size_t, std::size_t, cplx>> a_entries;
    for (int col = 0; col < a.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
        a_entries.emplace_back(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()),
                               std::conj(it.value()));
      }
    }
    for (int col = 0; col < b.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(b, col); it; ++it) {
        const auto i = static_cast<std::size_t>(it.row());
        const auto k = static_cast<std::size_t>(it.col());
        for (const auto& [j, l, conj_a] : a_entries) {
          if (charges != nullptr && ((*charges)[i] != (*charges)[j])) continue;
          push(triplets, map, i, j, k, l, term.rate * it.value() * conj_a);
        }
      }
    }
  }

  Liouvillian out;
  out.layout = layout;
  out.charges = model.charges;
  out.n_th = model.n_th;
  out.kept = map.kept;
  const auto n = static_cast<Eigen::Index>(map.full ? d * d : map.kept.size());
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  return out;
}

namespace {

// Restrict a full Liouvillian to its zero-charge block, if the block structure holds.
std::optional<Liouvillian> restrict_to_sector(const Liouvillian& full) {
  const std::size_t d = full.layout.total_dim();
  if (full.restricted() || full.charges.size() != d) return std::nullopt;
  auto diff = [&](Eigen::Index v) {
    const auto u = static_cast<std::size_t>(v);
    return full.charges[u % d] - full.charges[u / d];
  };
  for (int col = 0; col < full.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(full.matrix, col); it; ++it) {
      if (diff(it.row()) != diff(it.col())) return std::nullopt;
    }
  }
  const IndexMap map = make_index_map(d, &full.charges);
  std::vector<Triplet> triplets;
  for (int col = 0; col < full.matrix.outerSize(); ++col) {
    const long c = map.position[static_cast<std::size_t>(col)];
    if (c < 0) continue;
    for (SparseMatrix::InnerIterator it(full.matrix, col); it; ++it) {
      const long r = map.position[static_cast<std::size_t>(it.row())];
      if (r >= 0) triplets.emplace_back(static_cast<int>(r), static_cast<int>(c), it.value());
    }
  }
  Liouvillian out;
  out.layout = full.layout;
  out.charges = full.charges;
  out.n_th = full.n_th;
  out.kept = map.kept;
  const auto n = static_cast<Eigen::Index>(map.kept.size());
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  return out;
}

Eigen::VectorXcd gather(const Liouvillian& l, const Matrix& rho) {
  const Eigen::Map<const Eigen::VectorXcd> flat(rho.data(), rho.size());
  if (!l.restricted()) return flat;
  Eigen::VectorXcd out(static_cast<Eigen::Index>(l.kept.size()));
  for (std::size_t p = 0; p < l.kept.size(); ++p) {
    out(static_cast<Eigen::Index>(p)) = flat(static_cast<Eigen::Index>(l.kept[p]));
  }
  return out;
}

Matrix scatter(const Liouvillian& l, const Eigen::VectorXcd& x) {
  const auto d = static_cast<Eigen::Index>(l.layout.total_dim());
  Matrix rho = Matrix::Zero(d, d);
  Eigen::Map<Eigen::VectorXcd> flat(rho.data(), rho.size());
  if (!l.restricted()) {
    flat = x;
  } else {
    for (std::size_t p = 0; p < l.kept.size(); ++p) {
      flat(static_cast<Eigen::Index>(l.kept[p])) = x(static_cast<Eigen::Index>(p));
    }
  }
  return rho;
}

SteadyState solve_block(const Liouvillian& l, const SolveOptions& options) {
  const std::size_t d = l.layout.total_dim();
  const auto m = static_cast<Eigen::Index>(l.unknowns());
  // Row of rho(0,0) is replaced by the trace functional.
  const Eigen::Index trace_row = 0;

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(l.matrix.nonZeros()) + d);
  for (int col = 0; col < l.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(l.matrix, col); it; ++it) {
      if (it.row() != trace_row) triplets.emplace_back(static_cast<int>(it.row()), col, it.value());
    }
  }
  std::vector<Eigen::Index> diagonal_positions;
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t v = i + i * d;
    if (!l.restricted()) {
      diagonal_positions.push_back(static_cast<Eigen::Index>(v));
    } else {
      const auto it = std::lower_bound(l.kept.begin(), l.kept.end(), v);
      diagonal_positions.push_back(static_cast<Eigen::Index>(it - l.kept.begin()));
    }
  }
  for (Eigen::Index p : diagonal_positions) {
    triplets.emplace_back(static_cast<int>(trace_row), static_cast<int>(p), cplx(1.0, 0.0));
  }
  SparseMatrix bordered(m, m);
  bordered.setFromTriplets(triplets.begin(), triplets.end());
  bordered.makeCompressed();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
  rhs(trace_row) = 1.0;

  const double l_norm = l.matrix.norm();
  bool degenerate = false;
  bool probed = false;
  if (static_cast<std::size_t>(m) <= options.dense_probe_limit && m >= 2) {
    const Matrix dense(l.matrix);
    Eigen::BDCSVD<Matrix> svd(dense);
    const auto& sv = svd.singularValues();
    degenerate = sv(m - 2) < options.degeneracy_threshold * sv(0);
    probed = true;
  }

  Eigen::VectorXcd x;
  std::string method = l.restricted() ? "sparse-lu/sector" : "sparse-lu/full";
  if (!degenerate) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(bordered);
    lu.factorize(bordered);
    bool ok = lu.info() == Eigen::Success;
    if (ok) {
      x = lu.solve(rhs);
      ok = lu.info() == Eigen::Success && x.allFinite();
    }
    if (ok && !probed) {
      // Inverse iteration on the bordered matrix: a second stationary state makes it singular.
      Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m) / std::sqrt(static_cast<double>(m));
      double growth = 0.0;
      for (int iter = 0; iter < 12 && ok; ++iter) {
        Eigen::VectorXcd w = lu.solve(v);
        growth = w.norm();
        ok = std::isfinite(growth) && growth > 0.0;
        if (ok) v = w / growth;
      }
      if (ok) degenerate = 1.0 / growth < options.degeneracy_threshold * l_norm;
    }
    if (!ok) degenerate = true;
  }
  if (degenerate) {
    if (static_cast<std::size_t>(m) > options.min_norm_limit) {
      throw SolverError("solve_steady: multiple steady states and the system is too large for the minimal-norm fallback");
    }
    const Matrix dense(bordered);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(dense);
    x = cod.solve(rhs);
    method = "min-norm/degenerate";
  }

  Matrix rho = scatter(l, x);
  const cplx trace = rho.trace();
  if (std::abs(trace) == 0.0 || !std::isfinite(std::abs(trace))) {
    throw SolverError("solve_steady: steady state has zero trace");
  }
  rho /= trace;

  SteadyState state;
  state.rho = LabeledOperator(l.layout, std::move(rho));
  state.residual = (l.matrix * gather(l, state.rho.matrix())).norm() / l_norm;
  state.n_th = l.n_th;
  state.degenerate = degenerate;
  state.unknowns = static_cast<std::size_t>(m);
  state.method = method;
  state.phonon_number = phonon_number(state);
  return state;
}

}  // namespace

SteadyState solve_steady(const Liouvillian& liouvillian, const SolveOptions& options) {
  if (liouvillian.unknowns() == 0) {
    throw ValidationError("solve_steady: empty Liouvillian");
  }
  if (options.use_charge_sector) {
    if (auto block = restrict_to_sector(liouvillian)) {
      return solve_block(*block, options);
    }
  }
  return solve_block(liouvillian, options);
}

SteadyState solve_model(const LindbladModel& model, const AssembleOptions& assemble_options,
                        const SolveOptions& solve_options) {
  AssembleOptions opts = assemble_options;
  if (!model.charges.empty() && solve_options.use_charge_sector) {
    opts.zero_charge_sector = true;
  }
  return solve_steady(assemble(model, opts), solve_options);
}

double phonon_number(const SteadyState& state) {
  const SpaceLayout& layout = state.rho.layout();
  cplx total = 0.0;
  for (std::size_t s = 0; s < layout.total_dim(); ++s) {
    const auto idx = static_cast<Eigen::Index>(s);
    total += static_cast<double>(layout.local_index(s, 0)) * state.rho.matrix()(idx, idx);
  }
  if (std::abs(total.imag()) >= 1e-8) {
    throw SolverError("phonon_number: expectation has imaginary part " + std::to_string(total.imag()));
  }
  return total.real();
}

double figure_of_merit(const SteadyState& state) {
  if (!(state.n_th > 0.0)) {
    throw ValidationError("figure_of_merit: undefined for n_th = 0");
  }
  return phonon_number(state) / state.n_th;
}

double min_eigenvalue(const LabeledOperator& rho) {
  const Matrix herm = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

TruncatedSolve solve_with_truncation_check(const std::function<LindbladModel(std::size_t)>& build,
                                           std::size_t n_max, double rel_tol,
                                           const AssembleOptions& assemble_options,
                                           const SolveOptions& solve_options) {
  const SteadyState coarse = solve_model(build(n_max), assemble_options, solve_options);
  TruncatedSolve out;
  out.n_max = 2 * n_max;
  out.state = solve_model(build(out.n_max), assemble_options, solve_options);
  const double scale = std::max(std::abs(out.state.phonon_number), 1e-300);
  out.relative_change = std::abs(out.state.phonon_number - coarse.phonon_number) / scale;
  out.converged = out.relative_change < rel_tol || out.state.phonon_number == coarse.phonon_number;
  return out;
}

Matrix apply(const Liouvillian& liouvillian, const Matrix& rho) {
  const auto d = static_cast<Eigen::Index>(liouvillian.layout.total_dim());
  if (rho.rows() != d || rho.cols() != d) {
    throw ValidationError("apply: density matrix does not match the Liouvillian layout");
  }
  return scatter(liouvillian, liouvillian.matrix * gather(liouvillian, rho));
}

}  // namespace phonon_chill
