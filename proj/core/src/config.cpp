#include "gfft/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gfft {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in) {
  ConfigFile cfg;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) + ": malformed section");
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections_.try_emplace(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
    cfg.sections_[section].emplace_back(key, value);
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse(in);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return false;
  for (const auto& [k, v] : it->second)
    if (k == key) return true;
  return false;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  if (it != sections_.end())
    for (const auto& [k, v] : it->second)
      if (k == key) return v;
  throw std::runtime_error("config: missing key [" + section + "] " + key);
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

std::vector<std::string> ConfigFile::get_all(const std::string& section,
                                             const std::string& key) const {
  std::vector<std::string> out;
  const auto it = sections_.find(section);
  if (it != sections_.end())
    for (const auto& [k, v] : it->second)
      if (k == key) out.push_back(v);
  return out;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
  std::vector<std::string> out;
  const auto it = sections_.find(section);
  if (it != sections_.end())
    for (const auto& [k, v] : it->second) out.push_back(k);
  return out;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error("config: not a number: '" + tok + "'");
    }
  }
  return out;
}

namespace {

std::vector<double> poly_density_at_nodes(const std::vector<double>& coeffs,
                                          const SpaceConfig& cfg) {
  std::vector<double> v(cfg.n() + 1);
  for (int i = 0; i <= cfg.n(); ++i) {
    const double t = cfg.nodes()[i];
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
    v[i] = acc;
  }
  return v;
}

}  // namespace

CMElement RunConfig::element(const std::string& name) const {
  const auto it = element_polys.find(name);
  if (it == element_polys.end())
    throw std::runtime_error("config: missing [elements] entry '" + name + "'");
  return CMElement(space, poly_density_at_nodes(it->second, *space));
}

CMElement RunConfig::element_or_zero(const std::string& name) const {
  const auto it = element_polys.find(name);
  if (it == element_polys.end()) return CMElement::zero(space);
  return CMElement(space, poly_density_at_nodes(it->second, *space));
}

KernelOperator RunConfig::operator1() const {
  if (phi1_poly) return KernelOperator(space, poly_density_at_nodes(*phi1_poly, *space));
  return KernelOperator::identity(space);
}

KernelOperator RunConfig::operator2() const {
  if (phi2_poly) return KernelOperator(space, poly_density_at_nodes(*phi2_poly, *space));
  return KernelOperator::zero(space);
}

std::optional<KernelOperator> RunConfig::single_operator() const {
  if (!phi_poly) return std::nullopt;
  return KernelOperator(space, poly_density_at_nodes(*phi_poly, *space));
}

AtomicMeasure RunConfig::measure() const {
  if (atoms.empty()) throw std::runtime_error("config: [measure] has no atoms");
  std::vector<std::pair<cplx, CMElement>> list;
  list.reserve(atoms.size());
  for (const auto& spec : atoms)
    list.emplace_back(spec.coef, CMElement(space, poly_density_at_nodes(spec.density_poly, *space)));
  return AtomicMeasure(space, std::move(list));
}

PhaseFunctional RunConfig::functional() const {
  return build_fresnel(measure(), operator1(), operator2());
}

void RunConfig::check_q_admissible() const {
  if (!(std::abs(q1) > q0) || !(std::abs(q2) > q0))
    throw std::runtime_error(
        "config: boundary parameters must satisfy |q1| > q0 and |q2| > q0 "
        "(admissible region constraint)");
}

RunConfig parse_run_config(std::istream& in, std::optional<int> grid_override) {
  const ConfigFile file = ConfigFile::parse(in);
  RunConfig rc;

  const std::string a_family = file.get_or("space", "a_family", "zero");
  const std::string b_family = file.get_or("space", "b_family", "linear");
  const auto a_params = parse_numbers(file.get_or("space", "a_params", ""));
  const auto b_params = parse_numbers(file.get_or("space", "b_params", "1"));
  const double T = std::stod(file.get_or("space", "T", "1"));
  int grid_n = static_cast<int>(std::stod(file.get_or("space", "grid_n", "1024")));
  if (grid_override) grid_n = *grid_override;

  DriftSpec drift{ScalarFunction::from_family(a_family, a_params)};
  VarianceSpec variance{ScalarFunction::from_family(b_family, b_params), T};
  rc.space = SpaceConfig::create(drift, variance, TimeGrid(grid_n, T));

  for (const auto& key : file.keys("elements"))
    rc.element_polys[key] = parse_numbers(file.get("elements", key));

  if (file.has("operators", "phi1_poly"))
    rc.phi1_poly = parse_numbers(file.get("operators", "phi1_poly"));
  if (file.has("operators", "phi2_poly"))
    rc.phi2_poly = parse_numbers(file.get("operators", "phi2_poly"));
  if (file.has("operators", "phi_poly"))
    rc.phi_poly = parse_numbers(file.get("operators", "phi_poly"));

  for (const std::string& atom_text : file.get_all("measure", "atom")) {
    const auto colon = atom_text.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("config: atom entry needs 're im : poly...' format");
    const auto head = parse_numbers(atom_text.substr(0, colon));
    if (head.size() != 2)
      throw std::runtime_error("config: atom entry needs exactly two coefficient numbers");
    MeasureAtomSpec spec;
    spec.coef = cplx(head[0], head[1]);
    spec.density_poly = parse_numbers(atom_text.substr(colon + 1));
    if (spec.density_poly.empty())
      throw std::runtime_error("config: atom entry has an empty density polynomial");
    rc.atoms.push_back(std::move(spec));
  }

  rc.q0 = std::stod(file.get_or("run", "q0", "0.5"));
  rc.q1 = std::stod(file.get_or("run", "q1", "1"));
  rc.q2 = std::stod(file.get_or("run", "q2", "-1"));
  rc.samples = static_cast<std::size_t>(std::stod(file.get_or("run", "samples", "100000")));
  rc.seed = static_cast<std::uint64_t>(std::stoull(file.get_or("run", "seed", "1")));
  rc.basis_n = static_cast<int>(std::stod(file.get_or("run", "basis_n", "17")));
  rc.rho1 = std::stod(file.get_or("run", "rho1", "1"));
  rc.rho2 = std::stod(file.get_or("run", "rho2", "1"));
  rc.out = file.get_or("run", "out", "");
  if (file.has("run", "n_list")) {
    rc.n_list.clear();
    for (double v : parse_numbers(file.get("run", "n_list")))
      rc.n_list.push_back(static_cast<int>(v));
  }
  if (!(rc.q0 > 0.0)) throw std::runtime_error("config: q0 must be positive");
  return rc;
}

RunConfig load_run_config(const std::string& path, std::optional<int> grid_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_run_config(in, grid_override);
}

OrthonormalBasis cosine_basis(ConfigPtr cfg, std::size_t count) {
  std::vector<CMElement> seeds;
  seeds.reserve(count);
  const double T = cfg->horizon();
  for (std::size_t k = 0; k < count; ++k) {
    seeds.push_back(CMElement::from_density(
        cfg, [k, T](double t) { return std::cos(static_cast<double>(k) * std::numbers::pi * t / T); }));
  }
  return gram_schmidt(seeds, count);
}

}  // namespace gfft
