#pragma once

#include <cmath>
#include <vector>

#include "gfft/config.hpp"
#include "gfft/fresnel.hpp"

namespace gfft::test {

// a(t)=0, b(t)=t
inline ConfigPtr wiener_config(int n = 1024, double T = 1.0) {
  return SpaceConfig::create({ScalarFunction::zero()}, {ScalarFunction::linear(1.0), T},
                             TimeGrid(n, T));
}

// a(t)=t, b(t)=t
inline ConfigPtr drift_config(int n = 1024, double T = 1.0) {
  return SpaceConfig::create({ScalarFunction::linear(1.0)}, {ScalarFunction::linear(1.0), T},
                             TimeGrid(n, T));
}

// a(t)=t, b(t)=(t^2+t)/2
inline ConfigPtr curved_config(int n = 1024, double T = 1.0) {
  return SpaceConfig::create({ScalarFunction::linear(1.0)},
                             {ScalarFunction::polynomial({0.0, 0.5, 0.5}), T}, TimeGrid(n, T));
}

inline CMElement poly_element(ConfigPtr cfg, std::vector<double> coeffs) {
  return CMElement::from_density(cfg, [coeffs](double t) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
    return acc;
  });
}

// deterministic path through given node values
inline PathSample make_path(ConfigPtr cfg, const std::function<double(double)>& f) {
  PathSample p;
  p.values.resize(cfg->n() + 1);
  for (int i = 0; i <= cfg->n(); ++i) p.values[i] = f(cfg->nodes()[i]);
  p.cfg = std::move(cfg);
  return p;
}

inline double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / (1.0 + std::abs(want));
}

}  // namespace gfft::test
