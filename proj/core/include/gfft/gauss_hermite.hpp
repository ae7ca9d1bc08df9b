#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace gfft {

/// Nodes and weights for int_R e^{-x^2} g(x) dx ~ sum w_i g(x_i).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch-free construction: Newton iteration on the normalized
/// Hermite recurrence. Good to ~1e-14 for n <= 100.
GaussHermiteRule gauss_hermite(int n);

/// Tensor quadrature of
///   E[g] = (2 pi)^{-d/2} int g(u) exp{-sum (u_k - mean_k)^2 / 2} du
/// on a d-dimensional Gaussian with unit variances. scale_k stretches the
/// substitution in dimension k (u = mean + sqrt(2)*scale*x); any positive
/// value is exact in the limit, a value matched to the integrand's decay
/// keeps the node count small.
std::complex<double> gaussian_tensor_expectation(
    const std::function<std::complex<double>(std::span<const double>)>& g,
    std::span<const double> means, std::span<const double> scales, int nodes_per_dim);

}  // namespace gfft
