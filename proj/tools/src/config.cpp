#include "phonon_chill_cli/config.hpp"

#include <phonon_chill/errors.hpp>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace phonon_chill::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> kAllowedKeys = {
    {"system",
     {"model", "reference_g", "N", "omega_m", "omega", "g", "gamma", "gamma_phi", "kappa", "n_th", "J",
      "J_offdiag", "gamma_cross", "gamma_offdiag", "gamma_offdiag_ratio"}},
    {"three_level", {"omega_p", "omega_o", "g", "gamma_g", "gamma_e", "pump"}},
    {"solver", {"method", "n_max", "tol", "memory_cap"}},
    {"sweep", {"kappa", "gamma", "overlay"}},
    {"spectrum", {"target", "seed", "sites", "index", "g_magnitude", "n_participants"}},
};

std::string trim(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ValidationError("config: '" + key + "' expects a number, got '" + t + "'");
  }
  if (used != t.size() || !std::isfinite(v)) {
    throw ValidationError("config: '" + key + "' expects a finite number, got '" + t + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v < 0.0 || v != std::floor(v)) throw ValidationError("config: '" + key + "' expects a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = boost::algorithm::to_lower_copy(trim(text));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ValidationError("config: '" + key + "' expects a boolean");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
  for (auto& p : parts) p = trim(p);
  return parts;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split_list(text)) out.push_back(parse_double(key, p));
  return out;
}

// A single value is broadcast to all N sites.
std::vector<double> per_site(const std::string& key, const std::string& text, std::size_t n) {
  std::vector<double> v = parse_list(key, text);
  if (v.size() == 1) v.assign(n, v.front());
  if (v.size() != n) {
    throw ValidationError("config: '" + key + "' needs 1 or N = " + std::to_string(n) + " values");
  }
  return v;
}

Eigen::MatrixXd parse_matrix(const std::string& key, const std::string& text, std::size_t n) {
  const std::vector<double> v = parse_list(key, text);
  if (v.size() != n * n) {
    throw ValidationError("config: '" + key + "' needs N*N = " + std::to_string(n * n) + " row-major values");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r * n + c];
  }
  return m;
}

Axis parse_axis(const std::string& name, const std::string& text) {
  const auto parts = split_list(text);
  if (parts.size() != 4) {
    throw ValidationError("config: sweep axis '" + name + "' must read '<log|linear>, min, max, points'");
  }
  Axis axis;
  axis.name = name;
  const std::string scale = boost::algorithm::to_lower_copy(parts[0]);
  if (scale == "log") {
    axis.log = true;
  } else if (scale == "linear" || scale == "lin") {
    axis.log = false;
  } else {
    throw ValidationError("config: sweep axis '" + name + "' scale must be log or linear");
  }
  axis.min = parse_double(name, parts[1]);
  axis.max = parse_double(name, parts[2]);
  axis.points = parse_count(name, parts[3]);
  if (axis.points < 2) throw ValidationError("config: sweep axis '" + name + "' needs at least 2 points");
  if (axis.log && !(axis.min > 0.0 && axis.max > 0.0)) {
    throw ValidationError("config: log sweep axis '" + name + "' needs positive bounds");
  }
  if (!(axis.max > axis.min)) throw ValidationError("config: sweep axis '" + name + "' needs max > min");
  return axis;
}

class Section {
 public:
  Section(const pt::ptree& root, const std::string& name) : name_(name) {
    if (auto child = root.get_child_optional(name)) tree_ = *child;
  }
  std::optional<std::string> get(const std::string& key) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'))) return trim(*v);
    return std::nullopt;
  }
  std::string qualified(const std::string& key) const { return name_ + "." + key; }

 private:
  std::string name_;
  pt::ptree tree_;
};

AppConfig build(const pt::ptree& root) {
  for (const auto& [section, body] : root) {
    const auto allowed = kAllowedKeys.find(section);
    if (allowed == kAllowedKeys.end()) {
      if (body.empty() && !body.data().empty()) {
        throw ValidationError("config: key '" + section + "' must live inside a [section]");
      }
      throw ValidationError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!allowed->second.count(key)) throw ValidationError("config: unknown key '" + section + "." + key + "'");
    }
  }

  AppConfig cfg;
  const Section sys(root, "system");
  if (auto v = sys.get("model")) {
    if (*v == "ensemble") {
      cfg.model = ModelKind::Ensemble;
    } else if (*v == "three_level") {
      cfg.model = ModelKind::ThreeLevel;
    } else {
      throw ValidationError("config: system.model must be ensemble or three_level");
    }
  }
  if (auto v = sys.get("reference_g")) cfg.reference_g = parse_double("system.reference_g", *v);
  if (!(cfg.reference_g > 0.0)) throw ValidationError("config: system.reference_g must be positive");
  const double u = cfg.reference_g;

  std::size_t n = 1;
  if (auto v = sys.get("N")) n = parse_count("system.N", *v);
  if (n == 0) throw ValidationError("config: system.N must be at least 1");

  SystemParams& p = cfg.system;
  p.omega_m = u * parse_double("system.omega_m", sys.get("omega_m").value_or("1"));
  p.omega = per_site("system.omega", sys.get("omega").value_or("1"), n);
  p.g = per_site("system.g", sys.get("g").value_or("1"), n);
  p.gamma = per_site("system.gamma", sys.get("gamma").value_or("1"), n);
  for (auto* list : {&p.omega, &p.g, &p.gamma}) {
    for (double& x : *list) x *= u;
  }
  p.gamma_phi = u * parse_double("system.gamma_phi", sys.get("gamma_phi").value_or("0"));
  p.kappa = u * parse_double("system.kappa", sys.get("kappa").value_or("1"));
  p.n_th = parse_double("system.n_th", sys.get("n_th").value_or("0"));

  const auto J = sys.get("J");
  const auto J_off = sys.get("J_offdiag");
  if (J && J_off) throw ValidationError("config: give either system.J or system.J_offdiag, not both");
  if (J) p.J = u * parse_matrix("system.J", *J, n);
  if (J_off) {
    p.J = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n),
                                    u * parse_double("system.J_offdiag", *J_off));
    p.J.diagonal().setZero();
  }

  const auto gc = sys.get("gamma_cross");
  const auto gc_off = sys.get("gamma_offdiag");
  const auto gc_ratio = sys.get("gamma_offdiag_ratio");
  if ((gc ? 1 : 0) + (gc_off ? 1 : 0) + (gc_ratio ? 1 : 0) > 1) {
    throw ValidationError("config: give at most one of gamma_cross, gamma_offdiag, gamma_offdiag_ratio");
  }
  if (gc) {
    p.gamma_cross = u * parse_matrix("system.gamma_cross", *gc, n);
    cfg.explicit_gamma_cross = true;
  }
  if (gc_off) cfg.gamma_offdiag = u * parse_double("system.gamma_offdiag", *gc_off);
  if (gc_ratio) cfg.gamma_offdiag_ratio = parse_double("system.gamma_offdiag_ratio", *gc_ratio);

  const Section tl(root, "three_level");
  ThreeLevelParams& t = cfg.three_level;
  t.omega_p = u * parse_double("three_level.omega_p", tl.get("omega_p").value_or("0"));
  t.omega_o = u * parse_double("three_level.omega_o", tl.get("omega_o").value_or("1"));
  t.g = u * parse_double("three_level.g", tl.get("g").value_or("1"));
  t.gamma_g = u * parse_double("three_level.gamma_g", tl.get("gamma_g").value_or("0"));
  t.gamma_e = u * parse_double("three_level.gamma_e", tl.get("gamma_e").value_or("1"));
  t.pump = u * parse_double("three_level.pump", tl.get("pump").value_or("100"));
  t.omega_m = p.omega_m;
  t.kappa = p.kappa;
  t.n_th = p.n_th;

  const Section solver(root, "solver");
  if (auto v = solver.get("method")) cfg.method = parse_method(*v);
  if (auto v = solver.get("n_max")) cfg.n_max = parse_count("solver.n_max", *v);
  if (auto v = solver.get("tol")) {
    cfg.tol = parse_double("solver.tol", *v);
    if (!(*cfg.tol > 0.0)) throw ValidationError("config: solver.tol must be positive");
  }
  if (auto v = solver.get("memory_cap")) {
    cfg.memory_cap = parse_double("solver.memory_cap", *v);
    if (!(cfg.memory_cap > 0.0)) throw ValidationError("config: solver.memory_cap must be positive");
  }

  const Section sweep(root, "sweep");
  for (const char* name : {"kappa", "gamma"}) {
    if (auto v = sweep.get(name)) cfg.axes.push_back(parse_axis(name, *v));
  }
  if (auto v = sweep.get("overlay")) cfg.overlay = parse_bool("sweep.overlay", *v);

  const Section spec(root, "spectrum");
  SpectrumConfig& s = cfg.spectrum;
  if (auto v = spec.get("target")) s.target = *v;
  static const std::set<std::string> targets{"lowest", "anti_w", "w", "bipartite", "seed", "index"};
  if (!targets.count(s.target)) {
    throw ValidationError("config: spectrum.target must be one of lowest, anti_w, w, bipartite, seed, index");
  }
  if (auto v = spec.get("seed")) s.seed = parse_list("spectrum.seed", *v);
  if (auto v = spec.get("sites")) {
    const auto sites = parse_list("spectrum.sites", *v);
    if (sites.size() != 2) throw ValidationError("config: spectrum.sites needs two site indices");
    s.site_i = parse_count("spectrum.sites", std::to_string(sites[0]));
    s.site_j = parse_count("spectrum.sites", std::to_string(sites[1]));
  }
  if (auto v = spec.get("index")) s.index = parse_count("spectrum.index", *v);
  if (auto v = spec.get("g_magnitude")) s.g_magnitude = u * parse_double("spectrum.g_magnitude", *v);
  if (auto v = spec.get("n_participants")) s.n_participants = parse_count("spectrum.n_participants", *v);
  if (s.target == "seed" && s.seed.size() != n) {
    throw ValidationError("config: spectrum.seed needs N values when target = seed");
  }

  // Resolve the off-diagonal conveniences once so validation sees the final matrices.
  cfg.system = cfg.system_at(std::nullopt, std::nullopt);
  if (cfg.model == ModelKind::Ensemble) {
    cfg.system.validate();
  } else {
    cfg.three_level.validate();
  }
  for (const auto& axis : cfg.axes) {
    if (cfg.model == ModelKind::ThreeLevel && axis.name == "gamma") {
      throw ValidationError("config: the three_level model only supports a kappa sweep axis");
    }
    if (axis.name == "gamma" && cfg.explicit_gamma_cross && n > 1) {
      throw ValidationError(
          "config: a gamma sweep cannot keep an explicit gamma_cross; use gamma_offdiag_ratio or gamma_offdiag");
    }
  }
  return cfg;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::Auto: return "auto";
    case Method::Liouvillian: return "liouvillian";
    case Method::ContinuedFraction: return "continued_fraction";
    case Method::TwoOscillator: return "two_oscillator";
    case Method::MeanField: return "mean_field";
  }
  return "unknown";
}

Method parse_method(const std::string& text) {
  for (Method m : {Method::Auto, Method::Liouvillian, Method::ContinuedFraction, Method::TwoOscillator,
                   Method::MeanField}) {
    if (text == to_string(m)) return m;
  }
  throw ValidationError("config: unknown method '" + text + "'");
}

std::vector<double> Axis::values() const {
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(points - 1);
    if (log) {
      out[i] = std::pow(10.0, std::log10(min) + s * (std::log10(max) - std::log10(min)));
    } else {
      out[i] = min + s * (max - min);
    }
  }
  out.front() = min;
  out.back() = max;
  return out;
}

SystemParams AppConfig::system_at(std::optional<double> kappa, std::optional<double> gamma) const {
  SystemParams p = system;
  if (kappa) p.kappa = *kappa * reference_g;
  if (gamma) p.gamma.assign(p.size(), *gamma * reference_g);
  const auto n = static_cast<Eigen::Index>(p.size());
  if (gamma_offdiag_ratio) {
    p.gamma_cross.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double gi = p.gamma[static_cast<std::size_t>(i)];
        const double gj = p.gamma[static_cast<std::size_t>(j)];
        p.gamma_cross(i, j) = i == j ? gi : *gamma_offdiag_ratio * std::sqrt(gi * gj);
      }
    }
  } else if (gamma_offdiag) {
    p.gamma_cross = Eigen::MatrixXd::Constant(n, n, *gamma_offdiag);
    for (Eigen::Index i = 0; i < n; ++i) p.gamma_cross(i, i) = p.gamma[static_cast<std::size_t>(i)];
  }
  return p;
}

ThreeLevelParams AppConfig::three_level_at(std::optional<double> kappa) const {
  ThreeLevelParams t = three_level;
  if (kappa) t.kappa = *kappa * reference_g;
  return t;
}

AppConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  return build(root);
}

AppConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_string(buffer.str());
}

}  // namespace phonon_chill::cli
