#include "phonon_chill/models.hpp"

#include "phonon_chill/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace phonon_chill {

namespace {

bool finite(double x) { return std::isfinite(x); }

void add_bath_terms(LindbladModel& model, const LabeledOperator& a, double kappa, double n_th) {
  model.dissipators.push_back({kappa * (n_th + 1.0), a, a, false});
  if (n_th > 0.0) {
    const LabeledOperator ad = a.adjoint();
    model.dissipators.push_back({kappa * n_th, ad, ad, false});
  }
}

// Excitation number: Fock level of factor 0 plus the label of each remaining factor.
std::vector<int> excitation_charges(const SpaceLayout& layout, const std::vector<std::vector<int>>& labels) {
  std::vector<int> charges(layout.total_dim());
  for (std::size_t s = 0; s < layout.total_dim(); ++s) {
    int q = static_cast<int>(layout.local_index(s, 0));
    for (std::size_t k = 1; k < layout.subsystem_count(); ++k) {
      q += labels[k - 1][layout.local_index(s, k)];
    }
    charges[s] = q;
  }
  return charges;
}

void require_hermitian(const LabeledOperator& h, const char* who) {
  if (!h.is_hermitian(1e-12)) {
    throw SolverError(std::string(who) + ": assembled Hamiltonian is not Hermitian");
  }
}

}  // namespace

Eigen::MatrixXd SystemParams::coupling_matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  if (J.size() == 0) {
    return Eigen::MatrixXd::Zero(n, n);
  }
  return J;
}

Eigen::MatrixXd SystemParams::cooperative_matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  if (gamma_cross.size() == 0) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, i) = gamma[static_cast<std::size_t>(i)];
    }
    return m;
  }
  return gamma_cross;
}

bool SystemParams::homogeneous(double rel_tol) const {
  auto same = [rel_tol](const std::vector<double>& v) {
    for (double x : v) {
      if (std::abs(x - v.front()) > rel_tol * std::max(1.0, std::abs(v.front()))) return false;
    }
    return true;
  };
  return !omega.empty() && same(omega) && same(g) && same(gamma);
}

bool SystemParams::interacting() const {
  const Eigen::MatrixXd j = coupling_matrix();
  Eigen::MatrixXd c = cooperative_matrix();
  c.diagonal().setZero();
  return j.cwiseAbs().maxCoeff() > 0.0 || c.cwiseAbs().maxCoeff() > 0.0;
}

void SystemParams::validate() const {
  const std::size_t n = size();
  if (n == 0) {
    throw ValidationError("SystemParams: at least one emitter is required");
  }
  if (g.size() != n || gamma.size() != n) {
    throw ValidationError("SystemParams: omega, g and gamma must have equal length");
  }
  if (!(kappa > 0.0) || !finite(kappa)) {
    throw ValidationError("SystemParams: kappa must be positive and finite");
  }
  if (!(n_th >= 0.0) || !finite(n_th)) {
    throw ValidationError("SystemParams: n_th must be non-negative and finite");
  }
  if (!(gamma_phi >= 0.0) || !finite(gamma_phi) || !finite(omega_m)) {
    throw ValidationError("SystemParams: gamma_phi must be non-negative and finite");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(gamma[i] >= 0.0) || !finite(gamma[i]) || !finite(g[i]) || !finite(omega[i])) {
      throw ValidationError("SystemParams: gamma_i must be non-negative, all entries finite");
    }
  }
  const auto ni = static_cast<Eigen::Index>(n);
  if (J.size() != 0) {
    if (J.rows() != ni || J.cols() != ni) {
      throw ValidationError("SystemParams: J must be N x N");
    }
    if ((J - J.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, J.cwiseAbs().maxCoeff())) {
      throw ValidationError("SystemParams: J must be symmetric");
    }
    if (J.diagonal().cwiseAbs().maxCoeff() != 0.0) {
      throw ValidationError("SystemParams: J must have zero diagonal");
    }
  }
  if (gamma_cross.size() != 0) {
    if (gamma_cross.rows() != ni || gamma_cross.cols() != ni) {
      throw ValidationError("SystemParams: gamma_cross must be N x N");
    }
    const double scale = std::max(1.0, gamma_cross.cwiseAbs().maxCoeff());
    if ((gamma_cross - gamma_cross.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ValidationError("SystemParams: gamma_cross must be symmetric");
    }
    for (Eigen::Index i = 0; i < ni; ++i) {
      if (std::abs(gamma_cross(i, i) - gamma[static_cast<std::size_t>(i)]) > 1e-12 * scale) {
        throw ValidationError("SystemParams: gamma_cross diagonal must equal gamma");
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma_cross, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
      throw ValidationError("SystemParams: gamma_cross is not positive semidefinite (unphysical Lindblad form)");
    }
  }
}

SystemParams SystemParams::single(double omega_m, double omega_o, double g, double gamma,
                                  double kappa, double n_th, double gamma_phi) {
  SystemParams p;
  p.omega_m = omega_m;
  p.omega = {omega_o};
  p.g = {g};
  p.gamma = {gamma};
  p.kappa = kappa;
  p.n_th = n_th;
  p.gamma_phi = gamma_phi;
  return p;
}

SystemParams SystemParams::uniform(std::size_t n, double omega_m, double omega_o, double g,
                                   double gamma, double kappa, double n_th, double J_n,
                                   double gamma_n, double gamma_phi) {
  SystemParams p;
  p.omega_m = omega_m;
  p.omega.assign(n, omega_o);
  p.g.assign(n, g);
  p.gamma.assign(n, gamma);
  p.kappa = kappa;
  p.n_th = n_th;
  p.gamma_phi = gamma_phi;
  const auto ni = static_cast<Eigen::Index>(n);
  p.J = Eigen::MatrixXd::Constant(ni, ni, J_n);
  p.J.diagonal().setZero();
  p.gamma_cross = Eigen::MatrixXd::Constant(ni, ni, gamma_n);
  p.gamma_cross.diagonal().setConstant(gamma);
  return p;
}

void ThreeLevelParams::validate() const {
  if (!(pump > 0.0)) {
    throw ValidationError("ThreeLevelParams: pump rate must be positive");
  }
  if (!(gamma_g >= 0.0) || !(gamma_e >= 0.0)) {
    throw ValidationError("ThreeLevelParams: decay rates must be non-negative");
  }
  if (!(kappa > 0.0) || !(n_th >= 0.0)) {
    throw ValidationError("ThreeLevelParams: kappa must be positive and n_th non-negative");
  }
}

LindbladModel build_ensemble(const SystemParams& params, std::size_t n_max) {
  params.validate();
  if (n_max < 1) {
    throw ValidationError("build_ensemble: n_max must be >= 1");
  }
  const std::size_t n = params.size();
  std::vector<std::size_t> dims{n_max + 1};
  dims.insert(dims.end(), n, 2);
  const SpaceLayout layout(dims);

  const LabeledOperator a = fock_ladder(layout, 0);
  const LabeledOperator ad = a.adjoint();
  std::vector<LabeledOperator> sigma;
  sigma.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    sigma.push_back(spin_lowering(layout, i + 1));
  }

  const Eigen::MatrixXd J = params.coupling_matrix();
  const Eigen::MatrixXd coop = params.cooperative_matrix();

  LabeledOperator h = params.omega_m * (ad * a);
  for (std::size_t i = 0; i < n; ++i) {
    const LabeledOperator sd = sigma[i].adjoint();
    h += params.omega[i] * (sd * sigma[i]);
    h += params.g[i] * (sd * a + sigma[i] * ad);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double jij = J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (jij != 0.0) {
        h += jij * (sd * sigma[j] + sigma[i] * sigma[j].adjoint());
      }
    }
  }
  require_hermitian(h, "build_ensemble");

  LindbladModel model;
  model.hamiltonian = std::move(h);
  model.n_th = params.n_th;
  for (std::size_t i = 0; i < n; ++i) {
    if (params.gamma[i] > 0.0) {
      model.dissipators.push_back({params.gamma[i], sigma[i], sigma[i], false});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double rate = coop(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (i != j && rate != 0.0) {
        model.dissipators.push_back({rate, sigma[i], sigma[j], true});
      }
    }
  }
  if (params.gamma_phi > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const LabeledOperator sz = spin_z(layout, i + 1);
      model.dissipators.push_back({params.gamma_phi, sz, sz, false});
    }
  }
  add_bath_terms(model, a, params.kappa, params.n_th);

  const std::vector<int> spin_label{1, 0};  // index kExcited -> 1, kGround -> 0
  model.charges = excitation_charges(layout, std::vector<std::vector<int>>(n, spin_label));
  return model;
}

LindbladModel build_single_tls(const SystemParams& params, std::size_t n_max) {
  if (params.size() != 1) {
    throw ValidationError("build_single_tls: expects exactly one emitter, got " +
                          std::to_string(params.size()));
  }
  return build_ensemble(params, n_max);
}

LindbladModel build_two_oscillator(const SystemParams& params, std::size_t n_eff,
                                   std::size_t n_max_a, std::size_t n_max_b) {
  params.validate();
  if (n_eff == 0) {
    throw ValidationError("build_two_oscillator: N_eff must be positive");
  }
  if (n_eff > 1 && params.size() > 1 && !params.homogeneous()) {
    throw ValidationError("build_two_oscillator: collective mode requires homogeneous omega, g and gamma");
  }
  if (n_max_a < 1 || n_max_b < 1) {
    throw ValidationError("build_two_oscillator: truncations must be >= 1");
  }
  const SpaceLayout layout({n_max_a + 1, n_max_b + 1});
  const LabeledOperator a = fock_ladder(layout, 0);
  const LabeledOperator b = fock_ladder(layout, 1);
  const LabeledOperator ad = a.adjoint();
  const LabeledOperator bd = b.adjoint();
  const double g_eff = std::sqrt(static_cast<double>(n_eff)) * params.g.front();

  LabeledOperator h = params.omega.front() * (bd * b) + params.omega_m * (ad * a) +
                      g_eff * (ad * b + a * bd);
  require_hermitian(h, "build_two_oscillator");

  LindbladModel model;
  model.hamiltonian = std::move(h);
  model.n_th = params.n_th;
  if (params.gamma.front() > 0.0) {
    model.dissipators.push_back({params.gamma.front(), b, b, false});
  }
  if (params.gamma_phi > 0.0) {
    // 4 gamma_phi D[b^dagger b] damps <a^dagger b> at 2 gamma_phi.
    const LabeledOperator nb = bd * b;
    model.dissipators.push_back({4.0 * params.gamma_phi, nb, nb, false});
  }
  add_bath_terms(model, a, params.kappa, params.n_th);

  std::vector<int> b_label(n_max_b + 1);
  for (std::size_t k = 0; k <= n_max_b; ++k) b_label[k] = static_cast<int>(k);
  model.charges = excitation_charges(layout, {b_label});
  return model;
}

LindbladModel build_three_level(const ThreeLevelParams& params, std::size_t n_max) {
  params.validate();
  if (n_max < 1) {
    throw ValidationError("build_three_level: n_max must be >= 1");
  }
  const SpaceLayout layout({n_max + 1, 3});
  const LabeledOperator a = fock_ladder(layout, 0);
  const LabeledOperator ad = a.adjoint();
  const LabeledOperator s_ge = transition(layout, 1, kLevelG, kLevelE);
  const LabeledOperator s_gg = transition(layout, 1, kLevelG, kLevelG);
  const LabeledOperator s_ee = transition(layout, 1, kLevelE, kLevelE);

  LabeledOperator h = params.omega_p * s_gg + (params.omega_p + params.omega_o) * s_ee +
                      params.omega_m * (ad * a) + params.g * (ad * s_ge + a * s_ge.adjoint());
  require_hermitian(h, "build_three_level");

  LindbladModel model;
  model.hamiltonian = std::move(h);
  model.n_th = params.n_th;
  if (params.gamma_g > 0.0) {
    const LabeledOperator s_pg = transition(layout, 1, kLevelP, kLevelG);
    model.dissipators.push_back({params.gamma_g, s_pg, s_pg, false});
  }
  if (params.gamma_e > 0.0) {
    const LabeledOperator s_pe = transition(layout, 1, kLevelP, kLevelE);
    model.dissipators.push_back({params.gamma_e, s_pe, s_pe, false});
  }
  const LabeledOperator pump = transition(layout, 1, kLevelG, kLevelP);
  model.dissipators.push_back({params.pump, pump, pump, false});
  add_bath_terms(model, a, params.kappa, params.n_th);

  model.charges = excitation_charges(layout, {{1, 0, 0}});
  return model;
}

}  // namespace phonon_chill
