#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gfft/fresnel.hpp"

namespace gfft {

/// Sectioned key-value text ([section] headers, key = value lines, # and ;
/// comments). Repeated keys keep their order within a section.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in);
  static ConfigFile load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  std::vector<std::string> get_all(const std::string& section, const std::string& key) const;
  std::vector<std::string> keys(const std::string& section) const;

 private:
  // section -> ordered (key, value) pairs
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

std::vector<double> parse_numbers(const std::string& text);

struct MeasureAtomSpec {
  cplx coef;
  std::vector<double> density_poly;
};

/// Everything a run needs, assembled from one config file:
/// [space]     a_family, a_params, b_family, b_params, T, grid_n
/// [elements]  named densities as polynomial coefficient lists
/// [operators] phi1_poly, phi2_poly (transform pair), phi_poly (single kernel)
/// [measure]   atom = re im : z-poly coefficients   (repeatable)
/// [run]       q0, q1, q2, samples, seed, n_list, basis_n, rho1, rho2, out
struct RunConfig {
  ConfigPtr space;
  std::map<std::string, std::vector<double>> element_polys;
  std::optional<std::vector<double>> phi1_poly, phi2_poly, phi_poly;
  std::vector<MeasureAtomSpec> atoms;

  double q0 = 0.5;
  double q1 = 1.0;
  double q2 = -1.0;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::vector<int> n_list = {2, 4, 8, 16};
  int basis_n = 17;
  double rho1 = 1.0;
  double rho2 = 1.0;
  std::string out;

  CMElement element(const std::string& name) const;
  CMElement element_or_zero(const std::string& name) const;
  KernelOperator operator1() const;  // phi1 or identity
  KernelOperator operator2() const;  // phi2 or zero
  std::optional<KernelOperator> single_operator() const;
  AtomicMeasure measure() const;
  PhaseFunctional functional() const;  // build_fresnel(measure, op1, op2)

  /// |q_1|, |q_2| must exceed q0 for any boundary evaluation.
  void check_q_admissible() const;
};

RunConfig load_run_config(const std::string& path, std::optional<int> grid_override = {});
RunConfig parse_run_config(std::istream& in, std::optional<int> grid_override = {});

/// Orthonormal basis grown from cosine seed densities cos(k pi t / T); well
/// conditioned under any admissible weight, unlike high-degree monomials.
OrthonormalBasis cosine_basis(ConfigPtr cfg, std::size_t count);

}  // namespace gfft
