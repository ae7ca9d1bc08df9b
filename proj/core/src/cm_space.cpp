#include "gfft/cm_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gfft {

namespace {

constexpr double kRankTol = 1e-8;

void check_same_config(const ConfigPtr& a, const ConfigPtr& b, const char* what) {
  if (a.get() != b.get()) throw std::invalid_argument(std::string(what) + ": config mismatch");
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite density");
}

}  // namespace

CMElement::CMElement(ConfigPtr cfg, std::vector<double> nodal)
    : CMElement(std::move(cfg), std::move(nodal), -1) {}

CMElement::CMElement(ConfigPtr cfg, std::vector<double> nodal, int cutoff)
    : cfg_(std::move(cfg)), nodal_(std::move(nodal)), cutoff_(cutoff) {
  if (!cfg_) throw std::invalid_argument("CMElement: null config");
  if (static_cast<int>(nodal_.size()) != cfg_->n() + 1)
    throw std::invalid_argument("CMElement: density size mismatch with grid");
  if (cutoff_ < 0) cutoff_ = cfg_->n();
  if (cutoff_ > cfg_->n()) throw std::invalid_argument("CMElement: cutoff out of range");
  check_finite(nodal_, "CMElement");
}

CMElement CMElement::zero(ConfigPtr cfg) {
  const int n = cfg->n();
  return CMElement(std::move(cfg), std::vector<double>(n + 1, 0.0));
}

CMElement CMElement::from_density(ConfigPtr cfg, const std::function<double(double)>& z) {
  std::vector<double> v(cfg->n() + 1);
  for (int i = 0; i <= cfg->n(); ++i) v[i] = z(cfg->nodes()[i]);
  return CMElement(std::move(cfg), std::move(v));
}

CMElement CMElement::drift_element(ConfigPtr cfg) {
  std::vector<double> v(cfg->drift_density().begin(), cfg->drift_density().end());
  return CMElement(std::move(cfg), std::move(v));
}

double CMElement::density_at(int node) const {
  if (node < 0 || node > cfg_->n()) throw std::out_of_range("density_at: node out of range");
  return node < cutoff_ ? nodal_[node] : 0.0;
}

double CMElement::path_value(int node) const {
  if (node < 0 || node > cfg_->n()) throw std::out_of_range("path_value: node out of range");
  const int m = std::min(node, cutoff_);
  std::vector<double> f(cfg_->n() + 1);
  for (int i = 0; i <= cfg_->n(); ++i) f[i] = nodal_[i] * cfg_->bprime()[i];
  return cfg_->prefix_integral(f, m);
}

std::vector<double> CMElement::path_values() const {
  const int n = cfg_->n();
  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i) f[i] = nodal_[i] * cfg_->bprime()[i];
  std::vector<double> cum(n + 1);
  cfg_->cumulative_integral(f, cum);
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) out[i] = cum[std::min(i, cutoff_)];
  return out;
}

CMElement CMElement::scaled(double factor) const {
  std::vector<double> v(nodal_);
  for (double& x : v) x *= factor;
  return CMElement(cfg_, std::move(v), cutoff_);
}

CMElement d_inv(std::span<const double> density, ConfigPtr cfg) {
  return CMElement(std::move(cfg), std::vector<double>(density.begin(), density.end()));
}

double eval_path(const CMElement& w, double t) { return w.path_value(w.config()->snap(t)); }

double inner_cm(const CMElement& w1, const CMElement& w2) {
  check_same_config(w1.config(), w2.config(), "inner_cm");
  const SpaceConfig& cfg = *w1.config();
  const int m = std::min(w1.cutoff(), w2.cutoff());
  std::vector<double> f(cfg.n() + 1, 0.0);
  const int hi = std::min(cfg.n(), m + 1);
  for (int i = 0; i <= hi; ++i) f[i] = w1.nodal()[i] * w2.nodal()[i] * cfg.bprime()[i];
  return cfg.prefix_integral(f, m);
}

double norm_cm(const CMElement& w) { return std::sqrt(std::max(0.0, inner_cm(w, w))); }

double inner_drift(const CMElement& w) {
  const SpaceConfig& cfg = *w.config();
  const int m = w.cutoff();
  std::vector<double> f(cfg.n() + 1, 0.0);
  const int hi = std::min(cfg.n(), m + 1);
  for (int i = 0; i <= hi; ++i) f[i] = w.nodal()[i] * cfg.aprime()[i];
  return cfg.prefix_integral(f, m);
}

CMElement lincomb(double alpha, const CMElement& w1, double beta, const CMElement& w2) {
  check_same_config(w1.config(), w2.config(), "lincomb");
  const int n = w1.config()->n();
  std::vector<double> v(n + 1);
  if (w1.cutoff() == w2.cutoff()) {
    for (int i = 0; i <= n; ++i) v[i] = alpha * w1.nodal()[i] + beta * w2.nodal()[i];
    return CMElement(w1.config(), std::move(v), w1.cutoff());
  }
  for (int i = 0; i <= n; ++i) v[i] = alpha * w1.density_at(i) + beta * w2.density_at(i);
  return CMElement(w1.config(), std::move(v));
}

CMElement beta(double t, ConfigPtr cfg) {
  const int m = cfg->snap(t);
  const int n = cfg->n();
  return CMElement(std::move(cfg), std::vector<double>(n + 1, 1.0), m);
}

OrthonormalBasis::OrthonormalBasis(std::vector<CMElement> elements)
    : elements_(std::move(elements)) {}

double OrthonormalBasis::gram_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < elements_.size(); ++i)
    for (std::size_t j = i; j < elements_.size(); ++j) {
      const double g = inner_cm(elements_[i], elements_[j]);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

OrthonormalBasis gram_schmidt(const std::vector<CMElement>& seeds, std::size_t n) {
  if (n > seeds.size()) throw std::invalid_argument("gram_schmidt: not enough seeds");
  std::vector<CMElement> basis;
  basis.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    CMElement v = seeds[k];
    for (int pass = 0; pass < 2; ++pass) {
      for (const CMElement& e : basis) {
        const double c = inner_cm(e, v);
        v = lincomb(1.0, v, -c, e);
      }
    }
    const double r = norm_cm(v);
    if (r <= kRankTol)
      throw std::runtime_error("gram_schmidt: rank deficiency at seed " + std::to_string(k));
    basis.push_back(v.scaled(1.0 / r));
  }
  return OrthonormalBasis(std::move(basis));
}

OrthonormalBasis gram_schmidt_densities(const std::vector<std::vector<double>>& seed_densities,
                                        std::size_t n, ConfigPtr cfg) {
  std::vector<CMElement> seeds;
  seeds.reserve(seed_densities.size());
  for (const auto& z : seed_densities) seeds.emplace_back(cfg, z);
  return gram_schmidt(seeds, n);
}

BasisExtension extend_basis(const OrthonormalBasis& basis, const CMElement& w) {
  BasisExtension ext;
  ext.coeffs.resize(basis.size());
  double sumsq = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    ext.coeffs[k] = inner_cm(basis[k], w);
    sumsq += ext.coeffs[k] * ext.coeffs[k];
  }
  const double norm2 = inner_cm(w, w);
  ext.residual_norm = std::sqrt(std::max(0.0, norm2 - sumsq));
  if (ext.residual_norm > kRankTol) {
    // (e_{n+1}, a) from the expansion; exact regardless of representation.
    double da = inner_drift(w);
    for (std::size_t k = 0; k < basis.size(); ++k) da -= ext.coeffs[k] * inner_drift(basis[k]);
    ext.next_drift_ip = da / ext.residual_norm;

    CMElement res = w;
    for (std::size_t k = 0; k < basis.size(); ++k)
      res = lincomb(1.0, res, -ext.coeffs[k], basis[k]);
    ext.next = res.scaled(1.0 / ext.residual_norm);
  }
  return ext;
}

KernelOperator::KernelOperator(ConfigPtr cfg, std::vector<double> phi)
    : cfg_(std::move(cfg)), phi_(std::move(phi)) {
  if (!cfg_) throw std::invalid_argument("KernelOperator: null config");
  if (static_cast<int>(phi_.size()) != cfg_->n() + 1)
    throw std::invalid_argument("KernelOperator: kernel size mismatch with grid");
  check_finite(phi_, "KernelOperator");
  nonneg_ = std::all_of(phi_.begin(), phi_.end(), [](double x) { return x >= 0.0; });
}

KernelOperator KernelOperator::from_kernel(ConfigPtr cfg,
                                           const std::function<double(double)>& phi) {
  std::vector<double> v(cfg->n() + 1);
  for (int i = 0; i <= cfg->n(); ++i) v[i] = phi(cfg->nodes()[i]);
  return KernelOperator(std::move(cfg), std::move(v));
}

KernelOperator KernelOperator::identity(ConfigPtr cfg) { return scalar(std::move(cfg), 1.0); }
KernelOperator KernelOperator::zero(ConfigPtr cfg) { return scalar(std::move(cfg), 0.0); }

KernelOperator KernelOperator::scalar(ConfigPtr cfg, double c) {
  const int n = cfg->n();
  return KernelOperator(std::move(cfg), std::vector<double>(n + 1, c));
}

CMElement apply_op(const KernelOperator& A, const CMElement& w, bool sqrt_kernel) {
  check_same_config(A.config(), w.config(), "apply_op");
  if (sqrt_kernel && !A.nonnegative())
    throw std::domain_error("apply_op: square root of an operator with a negative kernel");
  const int n = A.config()->n();
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double k = sqrt_kernel ? std::sqrt(A.phi()[i]) : A.phi()[i];
    v[i] = k * w.nodal()[i];
  }
  return CMElement(w.config(), std::move(v), w.cutoff());
}

std::pair<KernelOperator, KernelOperator> decompose(const KernelOperator& A) {
  const int n = A.config()->n();
  std::vector<double> plus(n + 1), minus(n + 1);
  for (int i = 0; i <= n; ++i) {
    plus[i] = std::max(A.phi()[i], 0.0);
    minus[i] = std::max(-A.phi()[i], 0.0);
  }
  return {KernelOperator(A.config(), std::move(plus)), KernelOperator(A.config(), std::move(minus))};
}

double op_norm_sqrt(const KernelOperator& A) {
  if (!A.nonnegative()) throw std::domain_error("op_norm_sqrt: negative kernel");
  double mx = 0.0;
  for (double p : A.phi()) mx = std::max(mx, p);
  return std::sqrt(mx);
}

double kernel_inner(const KernelOperator& A, const CMElement& u, const CMElement& v) {
  check_same_config(A.config(), u.config(), "kernel_inner");
  check_same_config(A.config(), v.config(), "kernel_inner");
  const SpaceConfig& cfg = *A.config();
  const int m = std::min(u.cutoff(), v.cutoff());
  std::vector<double> f(cfg.n() + 1, 0.0);
  const int hi = std::min(cfg.n(), m + 1);
  for (int i = 0; i <= hi; ++i)
    f[i] = A.phi()[i] * u.nodal()[i] * v.nodal()[i] * cfg.bprime()[i];
  return cfg.prefix_integral(f, m);
}

}  // namespace gfft
