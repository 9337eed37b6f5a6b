#include "oracles.hpp"

#include <phonon_chill/closedform.hpp>
#include <phonon_chill/errors.hpp>
#include <phonon_chill/models.hpp>
#include <phonon_chill/steadystate.hpp>

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace phonon_chill;
namespace t = phonon_chill::testing;

namespace {

double relative_hermiticity_error(const LabeledOperator& h) {
  return (h.matrix() - h.matrix().adjoint()).norm() / std::max(1.0, h.matrix().norm());
}

LabeledOperator excitation_number(const SpaceLayout& layout) {
  const auto a = fock_ladder(layout, 0);
  auto n = a.adjoint() * a;
  for (std::size_t i = 1; i < layout.subsystem_count(); ++i) {
    const auto s = spin_lowering(layout, i);
    n += s.adjoint() * s;
  }
  return n;
}

SystemParams random_ensemble(t::Rng& rng, std::size_t n) {
  SystemParams p;
  p.omega_m = t::uniform(rng, 0.5, 2.0);
  p.kappa = t::log_uniform(rng, 1e-3, 1.0);
  p.n_th = t::uniform(rng, 0.0, 1.0);
  p.gamma_phi = t::uniform(rng, 0.0, 0.5);
  p.J = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    p.omega.push_back(t::uniform(rng, 0.5, 2.0));
    p.g.push_back(t::uniform(rng, -2.0, 2.0));
    p.gamma.push_back(t::log_uniform(rng, 0.1, 5.0));
  }
  p.gamma_cross = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    p.gamma_cross(i, i) = p.gamma[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double jij = t::uniform(rng, -1.0, 1.0);
      p.J(i, j) = p.J(j, i) = jij;
      // Correlations below 1/(N-1) keep the cooperative matrix diagonally dominant.
      const double c = t::uniform(rng, -0.9, 0.9) / static_cast<double>(n - 1);
      p.gamma_cross(i, j) = p.gamma_cross(j, i) = c * std::sqrt(p.gamma[i] * p.gamma[j]);
    }
  }
  return p;
}

}  // namespace

TEST_CASE("single TLS with g = 0 relaxes to the bath occupation") {
  const auto p = SystemParams::single(1.0, 1.0, 0.0, 2.0, 0.05, 1.3);
  const auto state = solve_model(build_single_tls(p, fock_cutoff_for_tail(1.3, 1e-12)));
  CHECK(t::rel_diff(phonon_number(state), 1.3) < 1e-10);
  CHECK(figure_of_merit(state) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("single TLS at zero temperature stays in the vacuum") {
  const auto p = SystemParams::single(1.0, 1.0, 1.0, 2.0, 0.01, 0.0);
  const auto state = solve_model(build_single_tls(p, 6));
  CHECK(std::abs(phonon_number(state)) < 1e-8);
  const Matrix& rho = state.rho.matrix();
  // |0> (x) |g> is basis index 0 * 2 + kGround.
  CHECK(std::abs(rho(kGround, kGround) - 1.0) < 1e-8);
}

TEST_CASE("single TLS Liouvillian agrees with the continued fraction") {
  const auto p = SystemParams::single(1.0, 1.0, 1.0, 2.0, 0.01, 2.0);
  const auto state = solve_model(build_single_tls(p, 60));
  const auto cf = phonon_number_cf(p);
  CHECK(t::rel_diff(phonon_number(state), cf.phonon_number) < 1e-6);
}

TEST_CASE("single TLS builder requires one emitter") {
  auto p = SystemParams::uniform(2, 1.0, 1.0, 1.0, 1.0, 0.1, 0.5);
  CHECK_THROWS_AS(build_single_tls(p, 4), ValidationError);
}

TEST_CASE("N = 2 ensemble without correlations equals two emitters wired by hand") {
  SystemParams p;
  p.omega_m = 1.0;
  p.omega = {1.1, 0.9};
  p.g = {0.7, -0.4};
  p.gamma = {1.5, 0.8};
  p.gamma_phi = 0.2;
  p.kappa = 0.05;
  p.n_th = 0.6;
  const std::size_t n_max = 4;
  const auto model = build_ensemble(p, n_max);

  const SpaceLayout layout({n_max + 1, 2, 2});
  const auto a = fock_ladder(layout, 0);
  const auto s1 = spin_lowering(layout, 1);
  const auto s2 = spin_lowering(layout, 2);
  LindbladModel ref;
  ref.hamiltonian = 1.0 * (a.adjoint() * a) + 1.1 * (s1.adjoint() * s1) + 0.9 * (s2.adjoint() * s2) +
                    0.7 * (s1.adjoint() * a + s1 * a.adjoint()) + (-0.4) * (s2.adjoint() * a + s2 * a.adjoint());
  ref.dissipators = {{1.5, s1, s1, false},
                     {0.8, s2, s2, false},
                     {0.2, spin_z(layout, 1), spin_z(layout, 1), false},
                     {0.2, spin_z(layout, 2), spin_z(layout, 2), false},
                     {0.05 * 1.6, a, a, false},
                     {0.05 * 0.6, a.adjoint(), a.adjoint(), false}};

  const auto lhs = assemble(model);
  const auto rhs = assemble(ref);
  CHECK(Matrix(lhs.matrix - rhs.matrix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("strongly correlated pair with odd-parity coupling is a valid ensemble") {
  auto p = SystemParams::uniform(2, 1.0, 1.0, 1.0, 283.0, 1e-3, 2.0, 0.0, 0.99 * 283.0);
  p.g = {1.0, -1.0};
  CHECK_NOTHROW(p.validate());
  const auto model = build_ensemble(p, 3);
  std::size_t cooperative = 0;
  for (const auto& term : model.dissipators) {
    if (term.cooperative) {
      ++cooperative;
      CHECK(term.rate == doctest::Approx(0.99 * 283.0));
    }
  }
  CHECK(cooperative == 2);
}

TEST_CASE("unphysical cooperative matrices are rejected") {
  auto p = SystemParams::uniform(2, 1.0, 1.0, 1.0, 1.0, 0.1, 0.5);
  p.gamma_cross = Eigen::MatrixXd{{1.0, 1.2}, {1.2, 1.0}};
  CHECK_THROWS_AS(build_ensemble(p, 3), ValidationError);
  p.gamma_cross = Eigen::MatrixXd{{1.0, 0.2}, {0.3, 1.0}};
  CHECK_THROWS_AS(build_ensemble(p, 3), ValidationError);
}

TEST_CASE("even-parity coupling never populates the antisymmetric state") {
  auto p = SystemParams::uniform(2, 1.0, 1.0, 0.8, 0.0, 0.1, 0.0, 0.3);
  const std::size_t n_max = 3;
  const auto model = build_ensemble(p, n_max);
  const SpaceLayout& layout = model.layout();
  const std::size_t d = layout.total_dim();
  // |n; s1 s2> -> index n*4 + s1*2 + s2
  auto index = [](std::size_t n, std::size_t s1, std::size_t s2) { return n * 4 + s1 * 2 + s2; };
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(d);
  psi0(index(1, kGround, kGround)) = 1.0;
  Eigen::VectorXcd anti = Eigen::VectorXcd::Zero(d);
  anti(index(0, kExcited, kGround)) = 1.0 / std::sqrt(2.0);
  anti(index(0, kGround, kExcited)) = -1.0 / std::sqrt(2.0);
  double worst = 0.0;
  for (double time : {0.3, 1.0, 2.7, 7.5, 20.0}) {
    const Matrix u = (cplx(0.0, -time) * model.hamiltonian.matrix()).exp();
    worst = std::max(worst, std::abs(anti.dot(u * psi0)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("two-oscillator model with one emitter linearizes the TLS at low occupation") {
  const auto p = SystemParams::single(1.0, 1.0, 0.5, 2.0, 0.1, 1e-3);
  const double tls = phonon_number(solve_model(build_single_tls(p, 6)));
  const double osc = phonon_number(solve_model(build_two_oscillator(p, 1, 6, 6)));
  // The saturation correction scales with the emitter population, here ~1e-3.
  CHECK(t::rel_diff(tls, osc) < 5e-3);
  CHECK(t::rel_diff(tls, osc) > 0.0);
}

TEST_CASE("two-oscillator model with g = 0") {
  const auto p = SystemParams::single(1.0, 1.0, 0.0, 2.0, 0.1, 0.4);
  const auto model = build_two_oscillator(p, 3, 24, 6);
  const auto state = solve_model(model);
  CHECK(t::rel_diff(phonon_number(state), 0.4) < 1e-10);
  const auto b = fock_ladder(model.layout(), 1);
  CHECK(std::abs(expectation(b.adjoint() * b, state.rho)) < 1e-14);
}

TEST_CASE("resonant four-emitter two-oscillator model matches the closed form") {
  const auto p = SystemParams::uniform(4, 1.0, 1.0, 0.5, 1.5, 0.2, 0.2);
  const std::size_t n_max = fock_cutoff_for_tail(0.2, 1e-12);
  const auto state = solve_model(build_two_oscillator(p, 4, n_max, n_max));
  CHECK(t::rel_diff(phonon_number(state), phonon_number_two_osc(p, 4)) < 1e-10);
  CHECK(t::rel_diff(phonon_number_two_osc(p, 4), t::two_oscillator_moments(p, 4)) < 1e-12);
}

TEST_CASE("two-oscillator builder rejects inhomogeneous ensembles") {
  SystemParams p;
  p.omega = {1.0, 1.0};
  p.g = {1.0, 0.5};
  p.gamma = {1.0, 1.0};
  p.kappa = 0.1;
  CHECK_THROWS_AS(build_two_oscillator(p, 2, 4, 4), ValidationError);
}

TEST_CASE("three-level emitter with a strong pump reduces to the two-level model") {
  ThreeLevelParams tl;
  tl.omega_o = 1.0;
  tl.omega_m = 1.0;
  tl.g = 1.0;
  tl.gamma_g = 0.02;
  tl.gamma_e = 2.0;
  tl.pump = 200.0;
  tl.kappa = 0.05;
  tl.n_th = 0.5;
  const std::size_t n_max = default_fock_cutoff(0.5);
  const double three = phonon_number(solve_model(build_three_level(tl, n_max)));
  const double two =
      phonon_number(solve_model(build_single_tls(SystemParams::single(1.0, 1.0, 1.0, 2.0, 0.05, 0.5), n_max)));
  CHECK(t::rel_diff(three, two) < 0.05);
}

TEST_CASE("equal-rate three-level emitter needs the extra dephasing") {
  ThreeLevelParams tl;
  tl.g = 1.0;
  tl.gamma_g = 2.0;
  tl.gamma_e = 2.0;
  tl.pump = 2000.0;
  tl.kappa = 0.05;
  tl.n_th = 0.5;
  const std::size_t n_max = default_fock_cutoff(0.5);
  const double three = phonon_number(solve_model(build_three_level(tl, n_max)));
  const double plain =
      phonon_number(solve_model(build_single_tls(SystemParams::single(1.0, 1.0, 1.0, 2.0, 0.05, 0.5), n_max)));
  const double dephased = phonon_number(solve_model(build_single_tls(
      SystemParams::single(1.0, 1.0, 1.0, 2.0, 0.05, 0.5, dephasing_rate_from_excited_projector(2.0)), n_max)));
  CHECK(t::rel_diff(three, dephased) < 0.02);
  CHECK(t::rel_diff(three, plain) > 0.1);
}

TEST_CASE("uncoupled three-level emitter solves the pump balance") {
  ThreeLevelParams tl;
  tl.g = 0.0;
  tl.gamma_g = 3.0;
  tl.gamma_e = 2.0;
  tl.pump = 7.0;
  tl.kappa = 0.1;
  tl.n_th = 0.7;
  const auto model = build_three_level(tl, fock_cutoff_for_tail(0.7, 1e-12));
  const auto state = solve_model(model);
  CHECK(t::rel_diff(phonon_number(state), 0.7) < 1e-10);
  // P rho_pp = gamma_g rho_gg, rho_ee = 0.
  const auto pop = [&](std::size_t level) {
    return expectation(transition(model.layout(), 1, level, level), state.rho).real();
  };
  CHECK(std::abs(pop(kLevelE)) < 1e-12);
  CHECK(pop(kLevelG) == doctest::Approx(7.0 / 10.0).epsilon(1e-10));
  CHECK(pop(kLevelP) == doctest::Approx(3.0 / 10.0).epsilon(1e-10));
}

TEST_CASE("every builder returns a Hermitian Hamiltonian") {
  t::Rng rng(20240611);
  for (int draw = 0; draw < 10; ++draw) {
    const auto ens = random_ensemble(rng, 3);
    CHECK(relative_hermiticity_error(build_ensemble(ens, 3).hamiltonian) < 1e-12);
    const auto single = t::random_single(rng);
    CHECK(relative_hermiticity_error(build_single_tls(single, 4).hamiltonian) < 1e-12);
    CHECK(relative_hermiticity_error(build_two_oscillator(single, 3, 4, 3).hamiltonian) < 1e-12);
    ThreeLevelParams tl;
    tl.omega_p = t::uniform(rng, -1.0, 1.0);
    tl.g = t::uniform(rng, 0.1, 2.0);
    tl.pump = t::uniform(rng, 1.0, 100.0);
    CHECK(relative_hermiticity_error(build_three_level(tl, 4).hamiltonian) < 1e-12);
  }
}

TEST_CASE("Hamiltonians conserve the excitation number") {
  t::Rng rng(99);
  for (std::size_t n : {1u, 2u, 3u}) {
    const auto p = n == 1 ? t::random_single(rng) : random_ensemble(rng, n);
    const auto model = build_ensemble(p, 4);
    const auto comm = commutator(model.hamiltonian, excitation_number(model.layout()));
    CHECK(comm.matrix().cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("ensemble builder with one emitter reproduces the single-TLS builder") {
  const auto p = SystemParams::single(1.0, 1.3, 0.7, 2.0, 0.02, 1.0, 0.1);
  const auto lhs = build_ensemble(p, 5);
  const auto rhs = build_single_tls(p, 5);
  CHECK((lhs.hamiltonian.matrix() - rhs.hamiltonian.matrix()).norm() == 0.0);
  CHECK(Matrix(assemble(lhs).matrix - assemble(rhs).matrix).norm() == 0.0);
}

TEST_CASE("flipping every coupling sign leaves the phonon number unchanged") {
  t::Rng rng(5);
  auto p = random_ensemble(rng, 2);
  const double n_plus = phonon_number(solve_model(build_ensemble(p, 12)));
  for (double& g : p.g) g = -g;
  const double n_minus = phonon_number(solve_model(build_ensemble(p, 12)));
  CHECK(t::rel_diff(n_minus, n_plus) < 1e-9);
}
