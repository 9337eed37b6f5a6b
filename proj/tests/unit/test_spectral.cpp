#include "oracles.hpp"

#include <phonon_chill/errors.hpp>
#include <phonon_chill/spectral.hpp>

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace phonon_chill;
namespace t = phonon_chill::testing;

namespace {

AtomicHamiltonian dicke(std::size_t n, double omega_o, double J_n, double gamma, double gamma_n) {
  const auto p = SystemParams::uniform(n, 1.0, omega_o, 1.0, gamma, 0.1, 0.0, J_n, gamma_n);
  return AtomicHamiltonian::from_params(p);
}

double max_residual(const AtomicHamiltonian& h, const std::vector<EigenMode>& modes) {
  double worst = 0.0;
  for (const auto& m : modes) worst = std::max(worst, (h.matrix * m.right - m.freq * m.right).norm());
  return worst / h.matrix.norm();
}

std::vector<cplx> sorted(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

Matrix projector(const std::vector<RVector>& basis) {
  Matrix p = Matrix::Zero(basis.front().size(), basis.front().size());
  for (const auto& v : basis) p += v.cast<cplx>() * v.cast<cplx>().adjoint();
  return p;
}

double trajectory_norm(const CVector& c) { return c.squaredNorm(); }

}  // namespace

TEST_CASE("two interacting emitters split into symmetric and antisymmetric modes") {
  const double omega = 1.0, J = 0.3, gamma = 1.0, gamma12 = 0.6;
  const auto h = AtomicHamiltonian::from_parts(RVector::Constant(2, omega), Eigen::MatrixXd{{0, J}, {J, 0}},
                                               Eigen::MatrixXd{{gamma, gamma12}, {gamma12, gamma}});
  CHECK(h.complex_symmetric());
  const auto modes = eigenmodes(h);
  REQUIRE(modes.size() == 2);
  // Sorted by decay rate: antisymmetric first.
  CHECK(std::abs(modes[0].freq - cplx(omega - J, -(gamma - gamma12) / 2)) < 1e-14);
  CHECK(std::abs(modes[1].freq - cplx(omega + J, -(gamma + gamma12) / 2)) < 1e-14);
  CHECK(std::abs(std::abs(modes[0].right.dot(bipartite_dark(2, 0, 1).cast<cplx>())) - 1.0) < 1e-14);
  CHECK(std::abs(std::abs(modes[1].right.dot(w_state(2).cast<cplx>())) - 1.0) < 1e-14);
  CHECK(modes[0].subradiant);
  CHECK_FALSE(modes[1].subradiant);
  CHECK(biorthogonality_error(modes) < 1e-12);
}

TEST_CASE("Dicke spectrum of six emitters matches the closed form") {
  const auto h = dicke(6, 1.0, 0.2, 1.0, 0.8);
  const auto modes = eigenmodes(h);
  const auto analytic = dicke_spectrum(6, 1.0, 0.2, 1.0, 0.8);
  CHECK(analytic.bright_multiplicity == 1);
  CHECK(analytic.dark_multiplicity == 5);
  std::size_t dark = 0;
  for (const auto& m : modes) {
    const double to_dark = std::abs(m.freq - analytic.dark);
    const double to_bright = std::abs(m.freq - analytic.bright);
    CHECK(std::min(to_dark, to_bright) < 1e-10);
    if (to_dark < 1e-10) ++dark;
  }
  CHECK(dark == 5);
  CHECK(biorthogonality_error(modes) < 1e-10);
  CHECK(max_residual(h, modes) < 1e-10);
}

TEST_CASE("coherent couplings alone do not change decay rates") {
  t::Rng rng(17);
  const std::size_t n = 5;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) J(i, j) = J(j, i) = t::uniform(rng, -1.0, 1.0);
  RVector omega(n);
  for (auto& w : omega) w = t::uniform(rng, 0.5, 1.5);
  const auto h = AtomicHamiltonian::from_parts(omega, J, 0.7 * Eigen::MatrixXd::Identity(n, n));
  for (const auto& m : eigenmodes(h)) {
    CHECK(m.gamma() == doctest::Approx(0.7).epsilon(1e-12));
    CHECK_FALSE(m.subradiant);
  }
}

TEST_CASE("closed-form Dicke values") {
  const auto pair = dicke_spectrum(2, 1.0, 0.0, 1.0, 1.0);
  CHECK(std::abs(pair.bright - cplx(1.0, -1.0)) < 1e-15);
  CHECK(std::abs(pair.dark - cplx(1.0, 0.0)) < 1e-15);

  const auto ten = dicke_spectrum(10, 1.0, 0.0, 1.0, 0.9);
  CHECK(-2.0 * ten.bright.imag() == doctest::Approx(9.1).epsilon(1e-14));
  CHECK(-2.0 * ten.dark.imag() == doctest::Approx(0.1).epsilon(1e-12));
  const auto modes = eigenmodes(dicke(10, 1.0, 0.0, 1.0, 0.9));
  CHECK(modes.back().gamma() == doctest::Approx(9.1).epsilon(1e-12));
  CHECK(modes.front().gamma() == doctest::Approx(0.1).epsilon(1e-10));

  for (std::size_t n : {2u, 5u, 20u}) {
    CHECK(-2.0 * dicke_spectrum(n, 1.0, 0.0, 1.0, 1.0 - 1e-9).bright.imag() ==
          doctest::Approx(double(n)).epsilon(1e-7));
  }
}

TEST_CASE("W, anti-W and bipartite states") {
  CHECK((w_state(2) - RVector::Constant(2, 1.0 / std::sqrt(2.0))).norm() < 1e-15);
  RVector anti2(2);
  anti2 << 1.0, -1.0;
  CHECK((anti_w_state(2) - anti2 / std::sqrt(2.0)).norm() < 1e-15);

  RVector anti4(4);
  anti4 << 0.5, 0.5, -0.5, -0.5;
  CHECK((anti_w_state(4) - anti4).norm() < 1e-15);
  CHECK(std::abs(anti_w_state(4).dot(w_state(4))) < 1e-15);

  RVector bi(5);
  bi << 1.0, -1.0, 0.0, 0.0, 0.0;
  CHECK((bipartite_dark(5, 0, 1) - bi / std::sqrt(2.0)).norm() < 1e-15);
  CHECK(std::abs(bipartite_dark(5, 0, 1).sum()) < 1e-15);

  CHECK_THROWS_AS(anti_w_state(3), ValidationError);
  CHECK_THROWS_AS(bipartite_dark(3, 1, 1), ValidationError);
}

TEST_CASE("subradiant bases") {
  SUBCASE("pair") {
    const auto basis = subradiant_basis(2);
    REQUIRE(basis.size() == 1);
    CHECK((basis[0] - anti_w_state(2)).norm() < 1e-15);
  }
  SUBCASE("four sites seeded with the anti-W state") {
    const auto basis = subradiant_basis(4, anti_w_state(4));
    REQUIRE(basis.size() == 3);
    CHECK((basis[0] - anti_w_state(4)).norm() < 1e-15);
    Eigen::MatrixXd q(4, 3);
    for (int k = 0; k < 3; ++k) q.col(k) = basis[k];
    CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    // QR oracle: the zero-sum subspace is the orthogonal complement of W.
    const Eigen::MatrixXd complement =
        Eigen::MatrixXd::Identity(4, 4) - w_state(4) * w_state(4).transpose();
    CHECK((q * q.transpose() - complement).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("permuted anti-W states span the same subspace") {
    const auto perms = anti_w_permutation_set(4);
    Eigen::MatrixXd a(4, perms.size());
    for (std::size_t k = 0; k < perms.size(); ++k) a.col(k) = perms[k];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    REQUIRE(qr.rank() == 3);
    const Eigen::MatrixXd qfull = qr.householderQ();
    const Eigen::MatrixXd q = qfull.leftCols(3);
    CHECK((Matrix((q * q.transpose()).cast<cplx>()) - projector(subradiant_basis(4))).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("seeds must be zero-sum") {
    RVector seed = RVector::Zero(4);
    seed(0) = 1.0;
    CHECK_THROWS_AS(subradiant_basis(4, seed), ValidationError);
  }
  SUBCASE("every vector is zero-sum and orthogonal to W") {
    for (std::size_t n = 2; n <= 12; ++n) {
      for (const auto& v : subradiant_basis(n)) {
        CHECK(std::abs(v.sum()) <= 1e-12);
        CHECK(std::abs(v.dot(w_state(n))) <= 1e-12);
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("selective coupling isolates the target mode") {
  SUBCASE("antisymmetric pair mode gives odd parity") {
    const auto modes = eigenmodes(dicke(2, 1.0, 0.0, 1.0, 0.99));
    const auto c = selective_coupling(modes.front(), 1.0);
    CHECK_FALSE(c.warning);
    CHECK(std::abs(c.g(0) + c.g(1)) < 1e-14);
    CHECK(c.g.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(overlap(c, modes.back().right)) < 1e-14);
  }
  SUBCASE("Dicke four anti-W mode") {
    const auto h = dicke(4, 1.0, 0.1, 1.0, 0.9);
    const auto modes = align_cluster_to_seed(h, eigenmodes(h), anti_w_state(4).cast<cplx>());
    const std::size_t k = closest_mode(modes, anti_w_state(4).cast<cplx>());
    const auto c = selective_coupling(modes[k], 1.0);
    const CVector expected = anti_w_state(4).cast<cplx>();
    const cplx phase = c.g(0) / expected(0);
    CHECK((c.g - phase * expected).norm() < 1e-12);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
    for (std::size_t l = 0; l < modes.size(); ++l) {
      if (l != k) CHECK(std::abs(overlap(c, modes[l].right)) <= 1e-10 * c.g.norm());
    }
  }
  SUBCASE("uncorrelated ensembles isolate any mode") {
    t::Rng rng(42);
    const std::size_t n = 6;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) J(i, j) = J(j, i) = t::uniform(rng, -1.0, 1.0);
    const auto h = AtomicHamiltonian::from_parts(RVector::Constant(n, 1.0), J, Eigen::MatrixXd::Identity(n, n));
    const auto modes = eigenmodes(h);
    for (std::size_t k = 0; k < n; ++k) {
      const auto c = selective_coupling(modes[k], 2.0);
      CHECK(c.warning);  // nothing is subradiant here
      for (std::size_t l = 0; l < n; ++l) {
        if (l != k) CHECK(std::abs(overlap(c, modes[l].right)) <= 1e-10 * c.g.norm());
      }
      CHECK(std::abs(overlap(c, modes[k].right)) > 1e-3);
    }
  }
}

TEST_CASE("critical check") {
  SUBCASE("correlated pair at the dark-state critical coupling") {
    const double gamma = 283.0, gamma12 = 0.99 * gamma;
    const auto modes = eigenmodes(dicke(2, 1.0, 0.0, gamma, gamma12));
    const double g = (gamma - gamma12) / (2.0 * std::sqrt(2.0));
    const auto report = critical_check(modes.front(), g);
    CHECK(report.participants == 2);
    CHECK(report.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.coolable);
  }
  SUBCASE("uncorrelated pair reduces to the ensemble condition") {
    const auto modes = eigenmodes(dicke(2, 1.0, 0.0, 2.0 * std::sqrt(2.0), 0.0));
    const auto report = critical_check(modes.front(), 1.0, 2);
    CHECK(report.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(report.subradiant);
  }
  SUBCASE("lossless dark states are flagged") {
    const auto modes = eigenmodes(dicke(3, 1.0, 0.0, 1.0, 1.0));
    const auto report = critical_check(modes.front(), 1.0);
    CHECK_FALSE(report.coolable);
    CHECK(report.ratio == 0.0);
    CHECK_FALSE(report.note.empty());
  }
}

TEST_CASE("participation ratio of standard states") {
  CHECK(inverse_participation_ratio(w_state(7).cast<cplx>()) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(inverse_participation_ratio(bipartite_dark(7, 2, 5).cast<cplx>()) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("spectrum is invariant under site relabeling") {
  t::Rng rng(123);
  const std::size_t n = 5;
  auto p = SystemParams::uniform(n, 1.0, 1.0, 1.0, 1.0, 0.1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    p.omega[i] = t::uniform(rng, 0.8, 1.2);
    for (std::size_t j = i + 1; j < n; ++j) {
      p.J(i, j) = p.J(j, i) = t::uniform(rng, -0.5, 0.5);
      p.gamma_cross(i, j) = p.gamma_cross(j, i) = t::uniform(rng, -0.2, 0.2);
    }
  }
  const auto h = AtomicHamiltonian::from_params(p);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm.indices()(i) = order[i];
  const AtomicHamiltonian permuted{perm * h.matrix * perm.transpose()};
  std::vector<cplx> a, b;
  for (const auto& m : eigenmodes(h)) a.push_back(m.freq);
  for (const auto& m : eigenmodes(permuted)) b.push_back(m.freq);
  a = sorted(a);
  b = sorted(b);
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-10);
}

TEST_CASE("biorthonormality and residuals over random correlated ensembles") {
  t::Rng rng(555);
  for (int draw = 0; draw < 10; ++draw) {
    const std::size_t n = 2 + draw % 7;
    RVector omega(n);
    for (auto& w : omega) w = t::uniform(rng, 0.9, 1.1);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd G = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        J(i, j) = J(j, i) = t::uniform(rng, -0.3, 0.3);
        G(i, j) = G(j, i) = t::uniform(rng, -0.9, 0.9) / double(n - 1);
      }
    const auto h = AtomicHamiltonian::from_parts(omega, J, G);
    const auto modes = eigenmodes(h);
    CHECK(biorthogonality_error(modes) <= 1e-10);
    CHECK(max_residual(h, modes) <= 1e-10);
  }
}

TEST_CASE("exact Dicke degeneracy is biorthogonalized for every size") {
  for (std::size_t n : {2u, 3u, 4u, 5u, 6u, 7u, 8u, 9u, 10u, 11u, 12u, 32u, 64u, 128u}) {
    CAPTURE(n);
    const auto h = dicke(n, 1.0, 0.05, 1.0, 0.9);
    const auto modes = eigenmodes(h);
    CHECK(biorthogonality_error(modes) <= 1e-10);
    CHECK(max_residual(h, modes) <= 1e-10);
  }
}

TEST_CASE("defective Hamiltonians are rejected") {
  // A Jordan block: [[1, 1], [0, 1]] is not diagonalizable.
  Matrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(eigenmodes(AtomicHamiltonian{m}), SolverError);
  // Complex-symmetric and nilpotent: the eigenvector (1, i) is self-orthogonal.
  Matrix s(2, 2);
  s << 1.0, cplx(0.0, 1.0), cplx(0.0, 1.0), -1.0;
  CHECK_THROWS_AS(eigenmodes(AtomicHamiltonian{s}), SolverError);
}

TEST_CASE("single-excitation dynamics") {
  std::vector<double> grid;
  for (int k = 0; k <= 200; ++k) grid.push_back(0.05 * k);

  SUBCASE("even parity never excites the antisymmetric amplitude") {
    const TwoAtomSystem sys{1.0, 0.2, 1.0, 0.5, 0.7, 0.7};
    CVector c0 = CVector::Zero(3);
    c0(0) = 1.0;
    const auto traj = evolve_two_atom(sys, c0, grid, EvolveOptions{1.0});
    double worst = 0.0;
    for (const auto& c : traj.amplitudes) worst = std::max(worst, std::abs(c(2)));
    CHECK(worst <= 1e-12);
  }
  SUBCASE("uncoupled modes decay exponentially") {
    const auto h = dicke(3, 1.0, 0.1, 1.0, 0.4);
    const auto modes = eigenmodes(h);
    CouplingVector zero;
    zero.g = CVector::Zero(3);
    CVector c0(4);
    c0 << 0.0, 0.5, cplx(0.0, 0.5), 0.5;
    const auto traj = evolve_single_excitation(modes, zero, c0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (int k = 0; k < 3; ++k) {
        const double expected = std::abs(c0(k + 1)) * std::exp(-modes[k].gamma() * grid[i] / 2.0);
        CHECK(std::abs(std::abs(traj.amplitudes[i](k + 1)) - expected) < 1e-10);
      }
    }
  }
  SUBCASE("odd parity at critical coupling drains the resonator within one Rabi period") {
    const double gamma = 1.0, gamma12 = 0.0, g = 0.5 / std::sqrt(2.0);
    const TwoAtomSystem sys{1.0, 0.0, gamma, gamma12, g, -g};
    const double g_a = std::sqrt(2.0) * g;
    const double rabi_period = 2.0 * M_PI / (2.0 * g_a);
    CVector c0 = CVector::Zero(3);
    c0(0) = 1.0;
    const auto traj = evolve_two_atom(sys, c0, {0.0, rabi_period}, EvolveOptions{1.0});
    // Regression value: |c_g|^2 = 0.0198 at t = one Rabi period.
    CHECK(std::norm(traj.amplitudes.back()(0)) == doctest::Approx(0.0197964).epsilon(1e-4));
    CHECK(std::norm(traj.amplitudes.back()(1)) < 1e-20);
  }
  SUBCASE("mode-basis equations reproduce the two-atom equations") {
    const TwoAtomSystem sys{1.0, 0.3, 1.0, 0.6, 0.4, -0.9};
    const auto h = AtomicHamiltonian::from_parts(RVector::Constant(2, 1.0), Eigen::MatrixXd{{0, 0.3}, {0.3, 0}},
                                                 Eigen::MatrixXd{{1.0, 0.6}, {0.6, 1.0}});
    const auto modes = eigenmodes(h);
    CouplingVector g;
    g.g = CVector(2);
    g.g << 0.4, -0.9;
    CVector c0 = CVector::Zero(3);
    c0(0) = 1.0;
    const auto modal = evolve_single_excitation(modes, g, c0, grid, EvolveOptions{1.0});
    const auto pair = evolve_two_atom(sys, c0, grid, EvolveOptions{1.0});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(std::abs(modal.amplitudes[i](0)) - std::abs(pair.amplitudes[i](0))) < 1e-9);
    }
  }
  SUBCASE("the norm never grows for a physical cooperative matrix") {
    const auto h = dicke(4, 1.0, 0.1, 1.0, 0.3);
    const auto modes = eigenmodes(h);
    const auto c = selective_coupling(modes.front(), 0.4);
    CVector c0 = CVector::Zero(5);
    c0(0) = 1.0;
    const auto traj = evolve_single_excitation(modes, c, c0, grid, EvolveOptions{1.0});
    for (std::size_t i = 1; i < grid.size(); ++i) {
      CHECK(trajectory_norm(traj.amplitudes[i]) <= trajectory_norm(traj.amplitudes[i - 1]) + 1e-12);
    }
  }
}
