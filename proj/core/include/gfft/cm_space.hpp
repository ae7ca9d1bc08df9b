#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gfft/time_functions.hpp"

namespace gfft {

/// Element w(t) = int_0^t z db of the Cameron-Martin subspace, stored through
/// its density z. The density is nodal values together with a support cutoff
/// node m: the represented function is z(s) = nodal(s) on [0, t_m), 0 after.
/// A full-support element has cutoff N. Keeping the cutoff explicit (instead
/// of sampling the indicator onto nodes) makes truncation integrals exact:
/// (w, beta_t) evaluates the same prefix integral as w(t) itself.
class CMElement {
 public:
  CMElement(ConfigPtr cfg, std::vector<double> nodal);
  CMElement(ConfigPtr cfg, std::vector<double> nodal, int cutoff);

  static CMElement zero(ConfigPtr cfg);
  /// Density from node samples of a callable.
  static CMElement from_density(ConfigPtr cfg, const std::function<double(double)>& z);
  /// The drift a as an element: density a'/b'.
  static CMElement drift_element(ConfigPtr cfg);

  const ConfigPtr& config() const { return cfg_; }
  std::span<const double> nodal() const { return nodal_; }
  int cutoff() const { return cutoff_; }
  bool full_support() const { return cutoff_ == cfg_->n(); }

  /// Density value as an L2 function: nodal below the cutoff, 0 from it on.
  double density_at(int node) const;

  /// w(t_i) = int_0^{t_i} z db (prefix rule of SpaceConfig).
  double path_value(int node) const;
  std::vector<double> path_values() const;

  CMElement scaled(double factor) const;

 private:
  ConfigPtr cfg_;
  std::vector<double> nodal_;
  int cutoff_;
};

/// D_t^{-1}: element from a density given at grid nodes.
CMElement d_inv(std::span<const double> density, ConfigPtr cfg);

/// w(t) with t snapped to the nearest grid node.
double eval_path(const CMElement& w, double t);

/// (w1, w2)_{C'} = int z1 z2 db, integrated up to the smaller support cutoff.
double inner_cm(const CMElement& w1, const CMElement& w2);
double norm_cm(const CMElement& w);

/// (w, a)_{C'} = int z a' dt over the support of w.
double inner_drift(const CMElement& w);

/// alpha*w1 + beta*w2. Mixed support cutoffs fall back to node-sampled
/// densities (the step is then resolved only at grid resolution).
CMElement lincomb(double alpha, const CMElement& w1, double beta, const CMElement& w2);

/// Reproducing element: density 1 on [0, t), t snapped to the grid.
/// (w, beta(t)) = w(t) for every element w, exactly at the discrete level.
CMElement beta(double t, ConfigPtr cfg);

class OrthonormalBasis {
 public:
  OrthonormalBasis() = default;
  explicit OrthonormalBasis(std::vector<CMElement> elements);
  std::size_t size() const { return elements_.size(); }
  const CMElement& operator[](std::size_t k) const { return elements_[k]; }
  const std::vector<CMElement>& elements() const { return elements_; }
  /// max_{i,j} |(e_i,e_j) - delta_ij|
  double gram_defect() const;

 private:
  std::vector<CMElement> elements_;
};

/// Modified Gram-Schmidt with one re-orthogonalization pass.
/// Throws std::runtime_error naming the first seed whose residual norm falls
/// below 1e-8 (rank deficiency).
OrthonormalBasis gram_schmidt(const std::vector<CMElement>& seeds, std::size_t n);
OrthonormalBasis gram_schmidt_densities(const std::vector<std::vector<double>>& seed_densities,
                                        std::size_t n, ConfigPtr cfg);

struct BasisExtension {
  std::vector<double> coeffs;          // (e_k, w)
  double residual_norm = 0.0;          // [||w||^2 - sum coeffs^2]^{1/2}, clamped at 0
  std::optional<CMElement> next;       // e_{n+1} when residual_norm > 1e-8
  double next_drift_ip = 0.0;          // (e_{n+1}, a), 0 when w lies in the span
};

/// Expands w over the basis and, when independent, returns the normalized
/// residual direction. (e_{n+1}, a) is computed algebraically from the
/// expansion so it is exact even for mixed-support w.
BasisExtension extend_basis(const OrthonormalBasis& basis, const CMElement& w);

/// Bounded self-adjoint multiplication operator A w(t) = int_0^t phi z db,
/// given by its kernel phi at grid nodes.
class KernelOperator {
 public:
  KernelOperator(ConfigPtr cfg, std::vector<double> phi);
  static KernelOperator from_kernel(ConfigPtr cfg, const std::function<double(double)>& phi);
  static KernelOperator identity(ConfigPtr cfg);
  static KernelOperator zero(ConfigPtr cfg);
  static KernelOperator scalar(ConfigPtr cfg, double c);

  const ConfigPtr& config() const { return cfg_; }
  std::span<const double> phi() const { return phi_; }
  bool nonnegative() const { return nonneg_; }

 private:
  ConfigPtr cfg_;
  std::vector<double> phi_;
  bool nonneg_;
};

/// A w (density phi*z) or A^{1/2} w (density sqrt(phi)*z, requires phi >= 0).
CMElement apply_op(const KernelOperator& A, const CMElement& w, bool sqrt_kernel = false);

/// Kernel split phi = phi_plus - phi_minus: returns (A_plus, A_minus), both nonnegative.
std::pair<KernelOperator, KernelOperator> decompose(const KernelOperator& A);

/// ||A^{1/2}||_o realized as the grid maximum of sqrt(phi); requires phi >= 0.
double op_norm_sqrt(const KernelOperator& A);

/// (A u, v)_{C'} = int phi z_u z_v db evaluated directly from the kernel.
double kernel_inner(const KernelOperator& A, const CMElement& u, const CMElement& v);

}  // namespace gfft
