#include "phonon_chill_cli/commands.hpp"

#include <phonon_chill/errors.hpp>
#include <phonon_chill/spectral.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <ostream>

namespace phonon_chill::cli {

namespace {

nlohmann::json complex_array(const CVector& v, double scale = 1.0) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real() / scale, v(i).imag() / scale});
  return arr;
}

// Homogeneous all-to-all couplings: every off-diagonal J and gamma_ij equal.
bool dicke_like(const SystemParams& p) {
  if (p.size() < 2 || !p.homogeneous()) return false;
  const Eigen::MatrixXd j = p.coupling_matrix();
  const Eigen::MatrixXd c = p.cooperative_matrix();
  for (Eigen::Index r = 0; r < j.rows(); ++r) {
    for (Eigen::Index s = 0; s < j.cols(); ++s) {
      if (r == s) continue;
      if (std::abs(j(r, s) - j(0, 1)) > 1e-12 * std::max(1.0, std::abs(j(0, 1)))) return false;
      if (std::abs(c(r, s) - c(0, 1)) > 1e-12 * std::max(1.0, std::abs(c(0, 1)))) return false;
    }
  }
  return true;
}

std::optional<CVector> target_seed(const SpectrumConfig& s, std::size_t n) {
  if (s.target == "anti_w") return anti_w_state(n).cast<cplx>();
  if (s.target == "w") return w_state(n).cast<cplx>();
  if (s.target == "bipartite") return bipartite_dark(n, s.site_i, s.site_j).cast<cplx>();
  if (s.target == "seed") {
    return Eigen::Map<const RVector>(s.seed.data(), static_cast<Eigen::Index>(s.seed.size())).cast<cplx>();
  }
  return std::nullopt;
}

}  // namespace

int run_spectrum(const AppConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (config.model != ModelKind::Ensemble) throw ValidationError("spectrum: needs the ensemble model");
    const SystemParams& p = config.system;
    const double u = config.reference_g;
    const AtomicHamiltonian h = AtomicHamiltonian::from_params(p);
    std::vector<EigenMode> modes = eigenmodes(h);

    std::size_t target = 0;
    if (auto seed = target_seed(config.spectrum, p.size())) {
      modes = align_cluster_to_seed(h, std::move(modes), *seed);
      target = closest_mode(modes, *seed);
    } else if (config.spectrum.target == "index") {
      if (config.spectrum.index >= modes.size()) throw ValidationError("spectrum: index out of range");
      target = config.spectrum.index;
    }

    const RVector rates = h.site_decay_rates();
    const double margin = 1e-12 * rates.mean();
    std::size_t superradiant = 0;
    std::size_t subradiant = 0;
    for (const auto& m : modes) {
      if (m.gamma() > rates.maxCoeff() + margin) ++superradiant;
      if (m.subradiant) ++subradiant;
    }
    // Modes from one degenerate cluster carry identical frequencies.
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      if (k > 0 && modes[k].freq == modes[k - 1].freq) {
        clusters.back().push_back(k);
      } else {
        clusters.push_back({k});
      }
    }

    const EigenMode& mode = modes[target];
    const double g_mag = config.spectrum.g_magnitude.value_or(std::abs(p.g.front()));
    CouplingVector coupling;
    CriticalReport report;
    if (g_mag > 0.0) {
      coupling = selective_coupling(mode, g_mag);
    } else {
      coupling.g = CVector::Zero(static_cast<Eigen::Index>(p.size()));
      coupling.magnitude = 0.0;
    }
    report = critical_check(mode, g_mag, config.spectrum.n_participants);
    if (coupling.warning) err << "warning: " << coupling.note << '\n';

    if (options.format == Format::Csv) {
      out << "index,freq_re,freq_im,gamma_eff,subradiant,cluster_size\n";
      for (const auto& cluster : clusters) {
        for (std::size_t k : cluster) {
          out << k << ',' << format_double(modes[k].freq.real() / u) << ',' << format_double(modes[k].freq.imag() / u)
              << ',' << format_double(modes[k].gamma() / u) << ',' << (modes[k].subradiant ? "true" : "false") << ','
              << cluster.size() << '\n';
        }
      }
      return kExitOk;
    }

    nlohmann::json j;
    j["N"] = p.size();
    j["reference_g"] = u;
    nlohmann::json mj = nlohmann::json::array();
    for (std::size_t k = 0; k < modes.size(); ++k) {
      mj.push_back({{"index", k},
                    {"freq_re", modes[k].freq.real() / u},
                    {"freq_im", modes[k].freq.imag() / u},
                    {"gamma_eff", modes[k].gamma() / u},
                    {"subradiant", modes[k].subradiant},
                    {"vector", complex_array(modes[k].right)},
                    {"left", complex_array(modes[k].left.transpose())}});
    }
    j["modes"] = mj;
    nlohmann::json cj = nlohmann::json::array();
    for (const auto& cluster : clusters) {
      cj.push_back({{"freq_re", modes[cluster.front()].freq.real() / u},
                    {"freq_im", modes[cluster.front()].freq.imag() / u},
                    {"multiplicity", cluster.size()},
                    {"indices", cluster}});
    }
    j["summary"] = {{"superradiant", superradiant},
                    {"subradiant", subradiant},
                    {"biorthogonality_error", biorthogonality_error(modes)},
                    {"clusters", cj}};
    if (dicke_like(p)) {
      const Eigen::MatrixXd c = p.cooperative_matrix();
      const double J_n = p.coupling_matrix()(0, 1);
      const DickeSpectrum d = dicke_spectrum(p.size(), p.omega.front(), J_n, p.gamma.front(), c(0, 1));
      double worst = 0.0;
      for (const auto& m : modes) worst = std::max(worst, std::min(std::abs(m.freq - d.bright), std::abs(m.freq - d.dark)));
      j["dicke"] = {{"bright_re", d.bright.real() / u}, {"bright_im", d.bright.imag() / u},
                    {"dark_re", d.dark.real() / u},     {"dark_im", d.dark.imag() / u},
                    {"dark_multiplicity", d.dark_multiplicity}, {"max_abs_error", worst / u}};
    }
    j["target"] = {{"kind", config.spectrum.target}, {"index", target}};
    j["selective_coupling"] = {{"g", complex_array(coupling.g, u)},
                               {"magnitude", coupling.magnitude / u},
                               {"warning", coupling.warning},
                               {"note", coupling.note}};
    j["critical_check"] = {{"g_eff", report.g_eff / u},
                           {"gamma_sub", report.gamma_sub / u},
                           {"ratio", report.ratio},
                           {"participants", report.participants},
                           {"participation_exact", report.participation_exact},
                           {"coolable", report.coolable},
                           {"subradiant", report.subradiant},
                           {"note", report.note}};
    out << j.dump(2) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace phonon_chill::cli
