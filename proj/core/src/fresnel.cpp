#include "gfft/fresnel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gfft/parallel.hpp"

namespace gfft {

namespace {

constexpr double kMergeTol = 1e-12;

void check_same_config(const ConfigPtr& a, const ConfigPtr& b, const char* what) {
  if (a.get() != b.get()) throw std::invalid_argument(std::string(what) + ": config mismatch");
}

double sup_distance(const CMElement& a, const CMElement& b) {
  double d = 0.0;
  if (a.cutoff() == b.cutoff()) {
    for (std::size_t i = 0; i < a.nodal().size(); ++i)
      d = std::max(d, std::abs(a.nodal()[i] - b.nodal()[i]));
  } else {
    for (int i = 0; i <= a.config()->n(); ++i)
      d = std::max(d, std::abs(a.density_at(i) - b.density_at(i)));
  }
  return d;
}

cplx lambda_component(const ScalingParam& p) { return p.value(); }

void require_admissible(const LambdaPair& lambda, double q0, const char* what) {
  for (int j = 0; j < 2; ++j) {
    const ScalingParam& p = lambda[j];
    if (p.is_boundary()) {
      if (!(std::abs(p.q()) > q0))
        throw std::domain_error(std::string(what) +
                                ": boundary parameter with |q| <= q0 is outside the "
                                "admissible region");
    } else if (!(p.value().real() > 0.0)) {
      throw std::domain_error(std::string(what) + ": interior parameter needs Re > 0");
    }
  }
}

}  // namespace

cplx sqrt_principal(cplx z) {
  if (z == cplx(0.0, 0.0)) throw std::domain_error("sqrt_principal: zero argument");
  if (z.real() < 0.0 && std::abs(z.imag()) < 1e-300)
    throw std::domain_error("sqrt_principal: argument on the negative real axis");
  return std::sqrt(z);
}

cplx inv_sqrt(cplx lambda) {
  if (lambda == cplx(0.0, 0.0)) throw std::domain_error("inv_sqrt: zero argument");
  if (lambda.real() < 0.0)
    throw std::domain_error("inv_sqrt: argument must have nonnegative real part");
  const cplx r = std::sqrt(1.0 / lambda);
  return r.real() >= 0.0 ? r : -r;
}

cplx pow_half(cplx lambda, int n) {
  const cplx s = sqrt_principal(lambda);
  cplx acc(1.0, 0.0);
  for (int k = 0; k < n; ++k) acc *= s;
  return acc;
}

cplx pow_neg_half(cplx lambda, int n) {
  const cplx s = inv_sqrt(lambda);
  cplx acc(1.0, 0.0);
  for (int k = 0; k < n; ++k) acc *= s;
  return acc;
}

ScalingParam ScalingParam::interior(cplx lambda) {
  if (!(lambda.real() > 0.0))
    throw std::domain_error("ScalingParam::interior: Re(lambda) must be positive");
  ScalingParam p;
  p.value_ = lambda;
  return p;
}

ScalingParam ScalingParam::boundary(double q) {
  if (q == 0.0) throw std::domain_error("ScalingParam::boundary: q must be nonzero");
  ScalingParam p;
  p.value_ = cplx(0.0, -q);
  p.boundary_ = true;
  p.q_ = q;
  return p;
}

LambdaPair LambdaPair::interior(cplx l1, cplx l2) {
  return {ScalingParam::interior(l1), ScalingParam::interior(l2)};
}

LambdaPair LambdaPair::boundary(double q1, double q2) {
  return {ScalingParam::boundary(q1), ScalingParam::boundary(q2)};
}

bool in_gamma_region(const LambdaPair& lambda, double q0) {
  if (!(q0 > 0.0)) throw std::domain_error("in_gamma_region: q0 must be positive");
  const double bound = 1.0 / std::sqrt(2.0 * q0);
  for (int j = 0; j < 2; ++j) {
    const cplx r = inv_sqrt(lambda_component(lambda[j]));
    if (!(std::abs(r.imag()) < bound)) return false;
  }
  return true;
}

AtomicMeasure::AtomicMeasure(ConfigPtr cfg, std::vector<std::pair<cplx, CMElement>> atoms)
    : cfg_(std::move(cfg)) {
  for (auto& [c, w] : atoms) {
    check_same_config(cfg_, w.config(), "AtomicMeasure");
    bool merged = false;
    for (auto& [c0, w0] : atoms_) {
      if (sup_distance(w0, w) <= kMergeTol) {
        c0 += c;
        merged = true;
        break;
      }
    }
    if (!merged) atoms_.emplace_back(c, std::move(w));
  }
}

AtomicMeasure AtomicMeasure::single(ConfigPtr cfg, cplx coef, CMElement w) {
  std::vector<std::pair<cplx, CMElement>> v;
  v.emplace_back(coef, std::move(w));
  return AtomicMeasure(std::move(cfg), std::move(v));
}

double AtomicMeasure::total_variation() const {
  double s = 0.0;
  for (const auto& [c, w] : atoms_) s += std::abs(c);
  return s;
}

PhaseAtom::PhaseAtom(cplx coef_, CMElement u1_, CMElement u2_)
    : coef(coef_), u1(std::move(u1_)), u2(std::move(u2_)) {
  check_same_config(u1.config(), u2.config(), "PhaseAtom");
  for (int j = 0; j < 2; ++j) {
    const CMElement& uj = u(j);
    norm2[j] = std::max(0.0, inner_cm(uj, uj));
    drift_ip[j] = inner_drift(uj);
  }
}

PhaseFunctional::PhaseFunctional(ConfigPtr cfg, std::vector<PhaseAtom> atoms)
    : cfg_(std::move(cfg)) {
  for (auto& a : atoms) {
    check_same_config(cfg_, a.u1.config(), "PhaseFunctional");
    bool merged = false;
    for (auto& a0 : atoms_) {
      if (sup_distance(a0.u1, a.u1) <= kMergeTol && sup_distance(a0.u2, a.u2) <= kMergeTol) {
        a0.coef += a.coef;
        merged = true;
        break;
      }
    }
    if (!merged) atoms_.push_back(std::move(a));
  }
}

PhaseFunctional PhaseFunctional::constant(ConfigPtr cfg, cplx value) {
  std::vector<PhaseAtom> atoms;
  atoms.emplace_back(value, CMElement::zero(cfg), CMElement::zero(cfg));
  return PhaseFunctional(std::move(cfg), std::move(atoms));
}

double PhaseFunctional::norm_bound() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += std::abs(a.coef);
  return s;
}

double PathArg::pair_with(const CMElement& u) const {
  double acc = 0.0;
  if (path) acc += path_scale * pwz(u, *path);
  if (shift) acc += shift_scale * inner_cm(u, *shift);
  return acc;
}

PhaseFunctional build_fresnel(const AtomicMeasure& f, const KernelOperator& A1,
                              const KernelOperator& A2) {
  if (!A1.nonnegative() || !A2.nonnegative())
    throw std::domain_error("build_fresnel: operators must have nonnegative kernels");
  std::vector<PhaseAtom> atoms;
  PhaseFunctional::Provenance prov;
  prov.op_norm_sqrt[0] = op_norm_sqrt(A1);
  prov.op_norm_sqrt[1] = op_norm_sqrt(A2);
  atoms.reserve(f.atoms().size());
  for (const auto& [c, w] : f.atoms()) {
    atoms.emplace_back(c, apply_op(A1, w, /*sqrt_kernel=*/true),
                       apply_op(A2, w, /*sqrt_kernel=*/true));
    prov.w_norm.push_back(norm_cm(w));
  }
  PhaseFunctional F(f.config(), std::move(atoms));
  // provenance is per-atom; valid only if no atoms merged
  if (F.atoms().size() == prov.w_norm.size()) F.set_provenance(std::move(prov));
  return F;
}

cplx eval_functional(const PhaseFunctional& F, const PathArg& x1, const PathArg& x2) {
  std::vector<cplx> terms(F.atoms().size());
  for (std::size_t k = 0; k < F.atoms().size(); ++k) {
    const PhaseAtom& a = F.atoms()[k];
    const double phase = x1.pair_with(a.u1) + x2.pair_with(a.u2);
    terms[k] = a.coef * std::exp(cplx(0.0, phase));
  }
  return pairwise_sum(std::span<const cplx>(terms));
}

cplx eval_functional(const PhaseFunctional& F, const PathSample& x1, const PathSample& x2) {
  return eval_functional(F, PathArg::of(x1), PathArg::of(x2));
}

cplx psi(const LambdaPair& lambda, const PhaseAtom& atom) {
  cplx expo(0.0, 0.0);
  for (int j = 0; j < 2; ++j) {
    const cplx lam = lambda_component(lambda[j]);
    expo += -atom.norm2[j] / (2.0 * lam) + cplx(0.0, 1.0) * inv_sqrt(lam) * atom.drift_ip[j];
  }
  return std::exp(expo);
}

cplx gfft_transform(const PhaseFunctional& F, const LambdaPair& lambda, double q0,
                    const PathArg& y1, const PathArg& y2) {
  require_admissible(lambda, q0, "gfft_transform");
  std::vector<cplx> terms(F.atoms().size());
  for (std::size_t k = 0; k < F.atoms().size(); ++k) {
    const PhaseAtom& a = F.atoms()[k];
    const double phase = y1.pair_with(a.u1) + y2.pair_with(a.u2);
    terms[k] = a.coef * std::exp(cplx(0.0, phase)) * psi(lambda, a);
  }
  return pairwise_sum(std::span<const cplx>(terms));
}

PhaseFunctional gfft_functional(const PhaseFunctional& F, const LambdaPair& lambda, double q0) {
  require_admissible(lambda, q0, "gfft_functional");
  std::vector<PhaseAtom> atoms;
  atoms.reserve(F.atoms().size());
  for (const PhaseAtom& a : F.atoms()) atoms.emplace_back(a.coef * psi(lambda, a), a.u1, a.u2);
  return PhaseFunctional(F.config(), std::move(atoms));
}

cplx feynman_integral(const PhaseFunctional& F, double q1, double q2, double q0) {
  return gfft_transform(F, LambdaPair::boundary(q1, q2), q0);
}

PhaseFunctional first_variation(const PhaseFunctional& F, const CMElement& g1,
                                const CMElement& g2) {
  std::vector<PhaseAtom> atoms;
  atoms.reserve(F.atoms().size());
  for (const PhaseAtom& a : F.atoms()) {
    const cplx factor(0.0, inner_cm(a.u1, g1) + inner_cm(a.u2, g2));
    atoms.emplace_back(a.coef * factor, a.u1, a.u2);
  }
  return PhaseFunctional(F.config(), std::move(atoms));
}

cplx first_variation_fd(const PhaseFunctional& F, const CMElement& g1, const CMElement& g2,
                        const PathArg& x1, const PathArg& x2, double step) {
  auto with_shift = [](const PathArg& x, const CMElement& g, double h) {
    // one shift slot per argument
    PathArg out = x;
    if (out.shift != nullptr)
      throw std::invalid_argument("first_variation_fd: argument already carries a shift");
    out.shift = &g;
    out.shift_scale = h;
    return out;
  };
  const cplx f1p = eval_functional(F, with_shift(x1, g1, step), x2);
  const cplx f1m = eval_functional(F, with_shift(x1, g1, -step), x2);
  const cplx f2p = eval_functional(F, x1, with_shift(x2, g2, step));
  const cplx f2m = eval_functional(F, x1, with_shift(x2, g2, -step));
  return (f1p - f1m) / (2.0 * step) + (f2p - f2m) / (2.0 * step);
}

cplx feynman_linear_weighted(const PhaseFunctional& F, const CMElement& g1, const CMElement& g2,
                             cplx c1, cplx c2, const LambdaPair& lambda, double q0) {
  require_admissible(lambda, q0, "feynman_linear_weighted");
  const CMElement* gs[2] = {&g1, &g2};
  const cplx cs[2] = {c1, c2};
  std::vector<cplx> terms(F.atoms().size());
  for (std::size_t k = 0; k < F.atoms().size(); ++k) {
    const PhaseAtom& a = F.atoms()[k];
    cplx lin(0.0, 0.0);
    for (int j = 0; j < 2; ++j) {
      const cplx lam = lambda_component(lambda[j]);
      lin += cs[j] * (inv_sqrt(lam) * inner_drift(*gs[j]) +
                      cplx(0.0, 1.0) * inner_cm(a.u(j), *gs[j]) / lam);
    }
    terms[k] = a.coef * lin * psi(lambda, a);
  }
  return pairwise_sum(std::span<const cplx>(terms));
}

TranslationCheck translation_check(const PhaseFunctional& F, double q1, double q2, double q0,
                                   const CMElement& shift1, const CMElement& shift2,
                                   const PathArg& y1, const PathArg& y2) {
  const LambdaPair boundary = LambdaPair::boundary(q1, q2);
  require_admissible(boundary, q0, "translation_check");
  const double qs[2] = {q1, q2};
  const CMElement* vs[2] = {&shift1, &shift2};

  // lhs: transform evaluated at y_j + path-of(shift_j)
  auto shifted = [](const PathArg& y, const CMElement& v) {
    PathArg out = y;
    if (out.shift != nullptr)
      throw std::invalid_argument("translation_check: argument already carries a shift");
    out.shift = &v;
    out.shift_scale = 1.0;
    return out;
  };
  const cplx lhs =
      gfft_transform(F, boundary, q0, shifted(y1, shift1), shifted(y2, shift2));

  // rhs: prefactor, phase in y, and the twisted functional
  cplx expo(0.0, 0.0);
  for (int j = 0; j < 2; ++j) {
    const double norm2 = inner_cm(*vs[j], *vs[j]);
    const double da = inner_drift(*vs[j]);
    expo += cplx(0.0, qs[j] * 0.5 * norm2) - sqrt_principal(cplx(0.0, -qs[j])) * da;
  }
  double yphase = 0.0;
  const PathArg* ys[2] = {&y1, &y2};
  for (int j = 0; j < 2; ++j) yphase += qs[j] * ys[j]->pair_with(*vs[j]);

  std::vector<PhaseAtom> twisted;
  twisted.reserve(F.atoms().size());
  for (const PhaseAtom& a : F.atoms())
    twisted.emplace_back(a.coef, lincomb(1.0, a.u1, -qs[0], shift1),
                         lincomb(1.0, a.u2, -qs[1], shift2));
  PhaseFunctional Fstar(F.config(), std::move(twisted));

  const cplx rhs = std::exp(expo) * std::exp(cplx(0.0, yphase)) *
                   gfft_transform(Fstar, boundary, q0, y1, y2);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

PhaseFunctional build_from_theta(ConfigPtr cfg,
                                 const std::vector<std::pair<cplx, std::vector<double>>>& points,
                                 const std::vector<CMElement>& gs, const KernelOperator& A1,
                                 const KernelOperator& A2) {
  if (gs.empty()) throw std::invalid_argument("build_from_theta: needs at least one direction");
  if (!A1.nonnegative() || !A2.nonnegative())
    throw std::domain_error("build_from_theta: operators must have nonnegative kernels");
  std::vector<PhaseAtom> atoms;
  atoms.reserve(points.size());
  for (const auto& [weight, v] : points) {
    if (v.size() != gs.size())
      throw std::invalid_argument("build_from_theta: point dimension mismatch");
    CMElement w = gs[0].scaled(v[0]);
    for (std::size_t l = 1; l < gs.size(); ++l) w = lincomb(1.0, w, v[l], gs[l]);
    atoms.emplace_back(weight, apply_op(A1, w, true), apply_op(A2, w, true));
  }
  if (atoms.empty()) return PhaseFunctional::constant(std::move(cfg), 0.0);
  return PhaseFunctional(std::move(cfg), std::move(atoms));
}

PhaseFunctional product(const PhaseFunctional& F, const PhaseFunctional& G) {
  check_same_config(F.config(), G.config(), "product");
  std::vector<PhaseAtom> atoms;
  atoms.reserve(F.atoms().size() * G.atoms().size());
  for (const PhaseAtom& a : F.atoms())
    for (const PhaseAtom& b : G.atoms())
      atoms.emplace_back(a.coef * b.coef, lincomb(1.0, a.u1, 1.0, b.u1),
                         lincomb(1.0, a.u2, 1.0, b.u2));
  return PhaseFunctional(F.config(), std::move(atoms));
}

ClassReport class_check(const PhaseFunctional& F, double q0,
                        const std::vector<LambdaPair>& lambda_samples, double cap) {
  if (!(q0 > 0.0)) throw std::domain_error("class_check: q0 must be positive");
  ClassReport rep;
  rep.q0 = q0;
  const double drift_norm = norm_cm(CMElement::drift_element(F.config()));
  const double inv = 1.0 / std::sqrt(2.0 * q0);

  for (std::size_t k = 0; k < F.atoms().size(); ++k) {
    const PhaseAtom& a = F.atoms()[k];
    double expo = 0.0;
    if (F.provenance()) {
      const auto& prov = *F.provenance();
      for (int j = 0; j < 2; ++j) expo += inv * prov.op_norm_sqrt[j] * prov.w_norm[k] * drift_norm;
    } else {
      for (int j = 0; j < 2; ++j) expo += inv * std::sqrt(a.norm2[j]) * drift_norm;
    }
    rep.k_values.push_back(std::exp(expo));
    rep.weighted_sum += std::abs(a.coef) * rep.k_values.back();
  }

  rep.gamma_margin = inv;
  rep.min_bound_margin = std::numeric_limits<double>::infinity();
  for (const LambdaPair& lambda : lambda_samples) {
    if (!in_gamma_region(lambda, q0))
      throw std::domain_error("class_check: sample outside the admissible region");
    double worst_im = 0.0;
    for (int j = 0; j < 2; ++j)
      worst_im = std::max(worst_im, std::abs(inv_sqrt(lambda_component(lambda[j])).imag()));
    rep.gamma_margin = std::min(rep.gamma_margin, inv - worst_im);
    for (std::size_t k = 0; k < F.atoms().size(); ++k) {
      const double margin = rep.k_values[k] - std::abs(psi(lambda, F.atoms()[k]));
      rep.min_bound_margin = std::min(rep.min_bound_margin, margin);
      if (!(margin > 0.0)) rep.bound_holds = false;
    }
  }
  if (lambda_samples.empty()) rep.min_bound_margin = 0.0;
  rep.membership = rep.weighted_sum < cap;
  return rep;
}

}  // namespace gfft
