#include "phonon_chill/spectral.hpp"

#include "phonon_chill/errors.hpp"

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace phonon_chill {

namespace {

constexpr cplx kI{0.0, 1.0};

double spectral_scale(const Matrix& h) {
  const double m = h.cwiseAbs().maxCoeff();
  return m > 0.0 ? m * static_cast<double>(h.rows()) : 1.0;
}

// Rotate v so its largest-magnitude entry is real and positive.
CVector fix_phase(CVector v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  const double a = std::abs(v(k));
  if (a > 0.0) v *= std::conj(v(k)) / a;
  return v;
}

cplx bilinear(const CVector& a, const CVector& b) { return (a.transpose() * b)(0, 0); }

// Columns spanning span(Q) with Phi^T Phi = I. Prefers a real orthonormal basis, which
// exists whenever span(Q) is closed under conjugation.
Matrix bilinear_orthonormal(const Matrix& q) {
  const Eigen::Index n = q.rows();
  const Eigen::Index m = q.cols();
  if (2 * m <= n || m == 1) {
    Eigen::MatrixXd parts(n, 2 * m);
    parts << q.real(), q.imag();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(parts, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const bool rank_m = s.size() <= m || s(m) <= 1e-8 * s(0);
    if (rank_m) {
      Matrix basis = svd.matrixU().leftCols(m).cast<cplx>();
      const Matrix projected = q * q.completeOrthogonalDecomposition().solve(basis);
      if ((projected - basis).norm() <= 1e-8 * std::sqrt(static_cast<double>(m))) {
        for (Eigen::Index c = 0; c < m; ++c) basis.col(c) = fix_phase(basis.col(c));
        return basis;
      }
    }
  }
  std::vector<CVector> pending;
  for (Eigen::Index c = 0; c < m; ++c) pending.push_back(q.col(c));
  Matrix out(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    std::size_t best = 0;
    double best_ratio = -1.0;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      const double nrm = pending[k].squaredNorm();
      const double ratio = nrm > 0.0 ? std::abs(bilinear(pending[k], pending[k])) / nrm : 0.0;
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = k;
      }
    }
    if (best_ratio < 1e-6) {
      throw SolverError(
          "eigenmodes: eigenvector cluster cannot be biorthogonalized (defective or self-orthogonal "
          "mode); perturb the Hamiltonian slightly and retry");
    }
    CVector phi = pending[best] / std::sqrt(bilinear(pending[best], pending[best]));
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto& v : pending) v -= bilinear(phi, v) * phi;
    out.col(c) = phi;
  }
  return out;
}

EigenMode make_symmetric_mode(cplx freq, const CVector& phi) {
  EigenMode mode;
  mode.freq = freq;
  mode.right = fix_phase(phi / phi.norm());
  const cplx norm = bilinear(mode.right, mode.right);
  if (std::abs(norm) < 1e-8) {
    throw SolverError("eigenmodes: self-orthogonal eigenvector; perturb the Hamiltonian slightly and retry");
  }
  mode.left = mode.right.transpose() / norm;
  return mode;
}

void classify(std::vector<EigenMode>& modes, const AtomicHamiltonian& h, const SpectrumOptions& options) {
  const RVector rates = h.site_decay_rates();
  const double threshold = rates.minCoeff() - options.subradiant_margin * rates.mean();
  for (auto& m : modes) m.subradiant = m.gamma() < threshold;
}

std::vector<std::vector<Eigen::Index>> cluster_eigenvalues(const Eigen::VectorXcd& lambda, double tol) {
  const Eigen::Index n = lambda.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  std::function<Eigen::Index(Eigen::Index)> root = [&](Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(lambda(i) - lambda(j)) <= tol) parent[static_cast<std::size_t>(root(j))] = root(i);
    }
  }
  std::vector<std::vector<Eigen::Index>> clusters;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = root(i);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<Eigen::Index>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(i);
  }
  return clusters;
}

using OdeState = std::vector<double>;

AmplitudeTrajectory integrate(const std::function<void(const CVector&, CVector&)>& rhs, const CVector& c0,
                              const std::vector<double>& t_grid, const EvolveOptions& options) {
  if (t_grid.empty()) throw ValidationError("evolve: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= t_grid[i - 1])) throw ValidationError("evolve: time grid must be non-decreasing");
  }
  if (c0.squaredNorm() > 1.0 + 1e-12) throw ValidationError("evolve: initial amplitudes have norm above 1");
  const Eigen::Index n = c0.size();
  auto pack = [n](const CVector& c, OdeState& x) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(2 * i)] = c(i).real();
      x[static_cast<std::size_t>(2 * i + 1)] = c(i).imag();
    }
  };
  auto unpack = [n](const OdeState& x) {
    CVector c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      c(i) = cplx{x[static_cast<std::size_t>(2 * i)], x[static_cast<std::size_t>(2 * i + 1)]};
    }
    return c;
  };
  auto system = [&](const OdeState& x, OdeState& dxdt, double) {
    CVector d(n);
    rhs(unpack(x), d);
    pack(d, dxdt);
  };

  AmplitudeTrajectory out;
  OdeState x(static_cast<std::size_t>(2 * n));
  pack(c0, x);
  auto observer = [&](const OdeState& state, double t) {
    out.t.push_back(t);
    out.amplitudes.push_back(unpack(state));
  };
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol,
                                           odeint::runge_kutta_dopri5<OdeState>());
  double dt = options.initial_step;
  if (t_grid.size() > 1 && t_grid.back() > t_grid.front()) {
    dt = std::min(dt, (t_grid.back() - t_grid.front()) / 10.0);
  }
  try {
    odeint::integrate_times(stepper, system, x, t_grid.begin(), t_grid.end(), dt, observer,
                            odeint::max_step_checker(static_cast<int>(std::min<std::size_t>(
                                options.max_steps, static_cast<std::size_t>(std::numeric_limits<int>::max())))));
  } catch (const std::exception& e) {
    throw SolverError(std::string("evolve: integration failed (step-size underflow or step limit): ") + e.what());
  }
  return out;
}

}  // namespace

RVector AtomicHamiltonian::site_decay_rates() const { return -2.0 * matrix.diagonal().imag(); }

bool AtomicHamiltonian::complex_symmetric(double rel_tol) const {
  const double scale = std::max(matrix.norm(), 1e-300);
  return (matrix - matrix.transpose()).norm() <= rel_tol * scale;
}

AtomicHamiltonian AtomicHamiltonian::from_params(const SystemParams& params) {
  params.validate();
  RVector omega = Eigen::Map<const RVector>(params.omega.data(), static_cast<Eigen::Index>(params.size()));
  return from_parts(omega, params.coupling_matrix(), params.cooperative_matrix());
}

AtomicHamiltonian AtomicHamiltonian::from_parts(const RVector& omega, const Eigen::MatrixXd& J,
                                                const Eigen::MatrixXd& gamma_cross) {
  const Eigen::Index n = omega.size();
  if (n == 0) throw ValidationError("AtomicHamiltonian: N must be at least 1");
  if (J.rows() != n || J.cols() != n || gamma_cross.rows() != n || gamma_cross.cols() != n) {
    throw ValidationError("AtomicHamiltonian: J and gamma_cross must be N x N");
  }
  AtomicHamiltonian h;
  h.matrix = J.cast<cplx>() - 0.5 * kI * gamma_cross.cast<cplx>();
  for (Eigen::Index i = 0; i < n; ++i) h.matrix(i, i) = cplx{omega(i), -0.5 * gamma_cross(i, i)};
  return h;
}

std::vector<EigenMode> eigenmodes(const AtomicHamiltonian& h, const SpectrumOptions& options) {
  const Eigen::Index n = h.matrix.rows();
  if (n == 0 || h.matrix.cols() != n) throw ValidationError("eigenmodes: H must be square with N >= 1");
  if (!h.matrix.allFinite()) throw ValidationError("eigenmodes: H has non-finite entries");

  Eigen::ComplexEigenSolver<Matrix> solver(h.matrix, true);
  if (solver.info() != Eigen::Success) throw SolverError("eigenmodes: eigen-decomposition failed");
  const Eigen::VectorXcd& lambda = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  const double radius = std::max(lambda.cwiseAbs().maxCoeff(), 1e-300);
  const auto clusters = cluster_eigenvalues(lambda, options.degeneracy_gap * radius);

  std::vector<EigenMode> modes;
  modes.reserve(static_cast<std::size_t>(n));
  if (h.complex_symmetric()) {
    for (const auto& cluster : clusters) {
      Matrix q(n, static_cast<Eigen::Index>(cluster.size()));
      cplx mean{};
      for (std::size_t c = 0; c < cluster.size(); ++c) {
        q.col(static_cast<Eigen::Index>(c)) = vectors.col(cluster[c]);
        mean += lambda(cluster[c]);
      }
      mean /= static_cast<double>(cluster.size());
      if (q.cols() > 1) {
        // Eigenvectors of a large degenerate cluster come back nearly dependent; span the
        // eigenspace with the unitary null space of H - mean instead.
        Eigen::JacobiSVD<Matrix> svd(h.matrix - mean * Matrix::Identity(n, n), Eigen::ComputeFullV);
        q = svd.matrixV().rightCols(q.cols());
      }
      const Matrix basis = bilinear_orthonormal(q);
      for (Eigen::Index c = 0; c < basis.cols(); ++c) modes.push_back(make_symmetric_mode(mean, basis.col(c)));
    }
  } else {
    Eigen::FullPivLU<Matrix> lu(vectors);
    if (!lu.isInvertible() || lu.rcond() < 1e-12) {
      throw SolverError("eigenmodes: eigenvector matrix is singular (defective H); perturb the Hamiltonian "
                        "slightly and retry");
    }
    const Matrix inverse = lu.inverse();
    for (const auto& cluster : clusters) {
      cplx mean{};
      for (Eigen::Index k : cluster) mean += lambda(k);
      mean /= static_cast<double>(cluster.size());
      for (Eigen::Index k : cluster) {
        EigenMode mode;
        mode.freq = mean;
        const double nrm = vectors.col(k).norm();
        mode.right = vectors.col(k) / nrm;
        mode.left = inverse.row(k) * nrm;
        modes.push_back(std::move(mode));
      }
    }
  }
  classify(modes, h, options);
  std::stable_sort(modes.begin(), modes.end(), [](const EigenMode& a, const EigenMode& b) {
    if (a.gamma() != b.gamma()) return a.gamma() < b.gamma();
    return a.omega() < b.omega();
  });
  if (biorthogonality_error(modes) > 1e-8) {
    throw SolverError("eigenmodes: biorthogonalization failed; perturb the Hamiltonian slightly and retry");
  }
  return modes;
}

std::vector<EigenMode> align_cluster_to_seed(const AtomicHamiltonian& h, std::vector<EigenMode> modes,
                                             const CVector& seed, const SpectrumOptions& options) {
  const Eigen::Index n = h.matrix.rows();
  if (seed.size() != n || seed.norm() == 0.0) throw ValidationError("align_cluster_to_seed: bad seed vector");
  const CVector s = seed / seed.norm();
  const CVector hs = h.matrix * s;
  const cplx lambda = s.dot(hs);
  const double scale = spectral_scale(h.matrix);
  if ((hs - lambda * s).norm() > 1e-9 * scale) {
    throw ValidationError("align_cluster_to_seed: seed is not an eigenvector of H");
  }
  double radius = 0.0;
  for (const auto& m : modes) radius = std::max(radius, std::abs(m.freq));
  const double tol = std::max(options.degeneracy_gap * radius, 1e-9 * scale);
  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    if (std::abs(modes[k].freq - lambda) <= tol) members.push_back(k);
  }
  if (members.empty()) throw ValidationError("align_cluster_to_seed: no mode matches the seed eigenvalue");

  const auto m = static_cast<Eigen::Index>(members.size());
  std::vector<CVector> basis{s};
  auto add_orthogonalized = [&](CVector v, bool symmetric) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        v -= symmetric ? bilinear(b, v) / bilinear(b, b) * b : b.dot(v) * b;
      }
    }
    if (v.norm() > 1e-8) basis.push_back(symmetric ? CVector(v) : CVector(v / v.norm()));
  };
  const bool symmetric = h.complex_symmetric();
  if (symmetric && std::abs(bilinear(s, s)) < 1e-8) {
    throw SolverError("align_cluster_to_seed: seed is self-orthogonal under the transpose pairing");
  }
  for (std::size_t k : members) {
    if (static_cast<Eigen::Index>(basis.size()) == m) break;
    add_orthogonalized(modes[k].right, symmetric);
  }
  if (static_cast<Eigen::Index>(basis.size()) != m) {
    throw ValidationError("align_cluster_to_seed: seed does not lie in the degenerate eigenspace");
  }
  // The seed must lie in the span of the cluster.
  Matrix old(n, m);
  for (Eigen::Index c = 0; c < m; ++c) old.col(c) = modes[members[static_cast<std::size_t>(c)]].right;
  const CVector proj = old * old.completeOrthogonalDecomposition().solve(s);
  if ((proj - s).norm() > 1e-8) {
    throw ValidationError("align_cluster_to_seed: seed does not lie in the degenerate eigenspace");
  }

  const cplx freq = modes[members.front()].freq;
  const bool subradiant = modes[members.front()].subradiant;
  if (symmetric) {
    for (Eigen::Index c = 0; c < m; ++c) {
      EigenMode mode;
      mode.freq = freq;
      mode.right = basis[static_cast<std::size_t>(c)] / basis[static_cast<std::size_t>(c)].norm();
      if (c > 0) mode.right = fix_phase(mode.right);
      mode.left = mode.right.transpose() / bilinear(mode.right, mode.right);
      mode.subradiant = subradiant;
      modes[members[static_cast<std::size_t>(c)]] = std::move(mode);
    }
  } else {
    Matrix old_left(m, n);
    for (Eigen::Index c = 0; c < m; ++c) old_left.row(c) = modes[members[static_cast<std::size_t>(c)]].left;
    Matrix fresh(n, m);
    for (Eigen::Index c = 0; c < m; ++c) fresh.col(c) = basis[static_cast<std::size_t>(c)];
    const Matrix coeff = old_left * fresh;
    const Matrix new_left = coeff.inverse() * old_left;
    for (Eigen::Index c = 0; c < m; ++c) {
      EigenMode& mode = modes[members[static_cast<std::size_t>(c)]];
      mode.right = fresh.col(c);
      mode.left = new_left.row(c);
    }
  }
  return modes;
}

std::size_t closest_mode(const std::vector<EigenMode>& modes, const CVector& v) {
  if (modes.empty()) throw ValidationError("closest_mode: empty mode list");
  std::size_t best = 0;
  double best_overlap = -1.0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const double o = std::abs(modes[k].right.dot(v));
    if (o > best_overlap) {
      best_overlap = o;
      best = k;
    }
  }
  return best;
}

double biorthogonality_error(const std::vector<EigenMode>& modes) {
  double worst = 0.0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    for (std::size_t l = 0; l < modes.size(); ++l) {
      const cplx o = (modes[k].left * modes[l].right)(0, 0);
      worst = std::max(worst, std::abs(o - (k == l ? 1.0 : 0.0)));
    }
  }
  return worst;
}

DickeSpectrum dicke_spectrum(std::size_t n, double omega_o, double J_n, double gamma, double gamma_n) {
  if (n < 2) throw ValidationError("dicke_spectrum: N must be at least 2");
  const double m = static_cast<double>(n - 1);
  DickeSpectrum out;
  out.bright = cplx{omega_o + m * J_n, -(gamma + m * gamma_n) / 2.0};
  out.dark = cplx{omega_o - J_n, -(gamma - gamma_n) / 2.0};
  out.bright_multiplicity = 1;
  out.dark_multiplicity = n - 1;
  return out;
}

RVector w_state(std::size_t n) {
  if (n == 0) throw ValidationError("w_state: N must be positive");
  return RVector::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n)));
}

RVector anti_w_state(std::size_t n) {
  if (n == 0 || n % 2 != 0) throw ValidationError("anti_w_state: N must be even and positive");
  RVector v = w_state(n);
  v.tail(static_cast<Eigen::Index>(n / 2)) *= -1.0;
  return v;
}

RVector bipartite_dark(std::size_t n, std::size_t i, std::size_t j) {
  if (i >= n || j >= n || i == j) throw ValidationError("bipartite_dark: need distinct sites below N");
  RVector v = RVector::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(2.0);
  v(static_cast<Eigen::Index>(j)) = -1.0 / std::sqrt(2.0);
  return v;
}

std::vector<RVector> subradiant_basis(std::size_t n, const std::optional<RVector>& seed) {
  if (n < 2) throw ValidationError("subradiant_basis: N must be at least 2");
  RVector s = seed ? *seed : (n % 2 == 0 ? anti_w_state(n) : bipartite_dark(n, 0, 1));
  if (s.size() != static_cast<Eigen::Index>(n) || s.norm() == 0.0) {
    throw ValidationError("subradiant_basis: seed must be a non-zero N-vector");
  }
  if (std::abs(s.sum()) > 1e-10 * s.lpNorm<1>()) {
    throw ValidationError("subradiant_basis: seed must be zero-sum (orthogonal to the W state)");
  }
  std::vector<RVector> basis{s / s.norm()};
  for (std::size_t k = 1; k < n && basis.size() < n - 1; ++k) {
    RVector c = RVector::Zero(static_cast<Eigen::Index>(n));
    c(0) = 1.0;
    c(static_cast<Eigen::Index>(k)) = -1.0;
    const double start = c.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) c -= b.dot(c) * b;
    }
    if (c.norm() > 1e-8 * start) basis.push_back(c / c.norm());
  }
  return basis;
}

std::vector<RVector> anti_w_permutation_set(std::size_t n) {
  const RVector base = anti_w_state(n);
  std::vector<RVector> out{base};
  const auto half = static_cast<Eigen::Index>(n / 2);
  for (Eigen::Index i = 0; i < half; ++i) {
    for (Eigen::Index j = half; j < static_cast<Eigen::Index>(n); ++j) {
      RVector v = base;
      std::swap(v(i), v(j));
      out.push_back(v);
    }
  }
  return out;
}

CouplingVector selective_coupling(const EigenMode& mode, double magnitude) {
  if (!(magnitude > 0.0) || !std::isfinite(magnitude)) {
    throw ValidationError("selective_coupling: magnitude must be positive and finite");
  }
  CouplingVector out;
  out.g = mode.left.transpose() * (magnitude / mode.left.norm());
  out.magnitude = magnitude;
  if (!mode.subradiant) {
    out.warning = true;
    out.note = "target mode is not subradiant; coupling isolates it but gives no decay advantage";
  }
  return out;
}

cplx overlap(const CouplingVector& g, const CVector& right) {
  if (g.g.size() != right.size()) throw ValidationError("overlap: size mismatch");
  return (g.g.transpose() * right)(0, 0);
}

double inverse_participation_ratio(const CVector& v) {
  const double nrm2 = v.squaredNorm();
  if (nrm2 == 0.0) throw ValidationError("inverse_participation_ratio: zero vector");
  return 1.0 / (v.cwiseAbs2() / nrm2).array().square().sum();
}

CriticalReport critical_check(const EigenMode& mode, double g_magnitude, std::size_t n_participants,
                              double lossless_tol) {
  if (!(g_magnitude >= 0.0)) throw ValidationError("critical_check: g must be non-negative");
  CriticalReport r;
  r.participation_exact = inverse_participation_ratio(mode.right);
  r.participants = n_participants != 0 ? n_participants
                                       : static_cast<std::size_t>(std::llround(r.participation_exact));
  r.g_eff = std::sqrt(static_cast<double>(r.participants)) * g_magnitude;
  r.gamma_sub = std::abs(2.0 * mode.freq.imag());
  r.subradiant = mode.subradiant;
  if (!mode.subradiant) r.note = "mode is not subradiant";
  if (r.gamma_sub <= lossless_tol * std::max(1.0, std::abs(mode.freq))) {
    r.coolable = false;
    r.ratio = 0.0;
    r.note = "lossless dark mode (gamma_sub = 0): it cannot carry heat away by decay";
    return r;
  }
  r.ratio = 2.0 * r.g_eff / r.gamma_sub;
  return r;
}

AmplitudeTrajectory evolve_single_excitation(const AtomicHamiltonian& h, const CouplingVector& g,
                                             const CVector& c0, const std::vector<double>& t_grid,
                                             const EvolveOptions& options,
                                             const SpectrumOptions& spectrum_options) {
  return evolve_single_excitation(eigenmodes(h, spectrum_options), g, c0, t_grid, options);
}

AmplitudeTrajectory evolve_single_excitation(const std::vector<EigenMode>& modes, const CouplingVector& g,
                                             const CVector& c0, const std::vector<double>& t_grid,
                                             const EvolveOptions& options) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  if (c0.size() != n + 1) throw ValidationError("evolve_single_excitation: c0 must hold c_g and N mode amplitudes");
  if (!g.g.allFinite()) throw ValidationError("evolve_single_excitation: coupling vector has non-finite entries");
  CVector coupling(n);
  CVector freq(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    coupling(k) = overlap(g, modes[static_cast<std::size_t>(k)].right);
    freq(k) = modes[static_cast<std::size_t>(k)].freq - options.omega_m;
  }
  auto rhs = [&](const CVector& c, CVector& d) {
    cplx acc{};
    for (Eigen::Index k = 0; k < n; ++k) acc += coupling(k) * c(k + 1);
    d(0) = -kI * acc;
    for (Eigen::Index k = 0; k < n; ++k) d(k + 1) = -kI * freq(k) * c(k + 1) - kI * coupling(k) * c(0);
  };
  return integrate(rhs, c0, t_grid, options);
}

AmplitudeTrajectory evolve_two_atom(const TwoAtomSystem& system, const CVector& c0,
                                    const std::vector<double>& t_grid, const EvolveOptions& options) {
  if (c0.size() != 3) throw ValidationError("evolve_two_atom: c0 must be (c_g, c_s, c_a)");
  const double gs = (system.g1 + system.g2) / std::sqrt(2.0);
  const double ga = (system.g1 - system.g2) / std::sqrt(2.0);
  const double gamma_s = system.gamma + system.gamma12;
  const double gamma_a = system.gamma - system.gamma12;
  const double ws = system.omega_o + system.J12 - options.omega_m;
  const double wa = system.omega_o - system.J12 - options.omega_m;
  auto rhs = [&](const CVector& c, CVector& d) {
    d(0) = -kI * (gs * c(1) + ga * c(2));
    d(1) = -kI * (ws * c(1) + gs * c(0)) - 0.5 * gamma_s * c(1);
    d(2) = -kI * (wa * c(2) + ga * c(0)) - 0.5 * gamma_a * c(2);
  };
  return integrate(rhs, c0, t_grid, options);
}

}  // namespace phonon_chill
