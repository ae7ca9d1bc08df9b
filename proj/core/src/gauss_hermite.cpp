#include "gfft/gauss_hermite.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace gfft {

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1 || n > 128) throw std::invalid_argument("gauss_hermite: n out of range");
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    // initial guesses for the descending positive roots
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * rule.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * rule.nodes[1];
    else
      z = 2.0 * z - rule.nodes[i - 2];

    double pp = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

std::complex<double> gaussian_tensor_expectation(
    const std::function<std::complex<double>(std::span<const double>)>& g,
    std::span<const double> means, std::span<const double> scales, int nodes_per_dim) {
  const int d = static_cast<int>(means.size());
  if (d < 1 || d > 10) throw std::invalid_argument("gaussian_tensor_expectation: dimension");
  if (scales.size() != means.size())
    throw std::invalid_argument("gaussian_tensor_expectation: scales size");
  const GaussHermiteRule rule = gauss_hermite(nodes_per_dim);

  // u_k = mean_k + sqrt(2) s_k x_k:
  //   (2 pi)^{-1/2} e^{-(u-m)^2/2} du = pi^{-1/2} s e^{(1-s^2) x^2} * e^{-x^2} dx
  double prefactor = 1.0;
  for (int k = 0; k < d; ++k) prefactor *= scales[k] / std::sqrt(std::numbers::pi);

  std::vector<int> idx(d, 0);
  std::vector<double> u(d);
  std::complex<double> acc(0.0, 0.0);
  const double sqrt2 = std::numbers::sqrt2;
  while (true) {
    double wprod = 1.0;
    double extra = 0.0;
    for (int k = 0; k < d; ++k) {
      const double x = rule.nodes[idx[k]];
      u[k] = means[k] + sqrt2 * scales[k] * x;
      wprod *= rule.weights[idx[k]];
      extra += (1.0 - scales[k] * scales[k]) * x * x;
    }
    acc += wprod * std::exp(extra) * g(u);

    int k = 0;
    while (k < d && ++idx[k] == nodes_per_dim) idx[k++] = 0;
    if (k == d) break;
  }
  return prefactor * acc;
}

}  // namespace gfft
