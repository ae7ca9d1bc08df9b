#include "gfft/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gfft/parallel.hpp"

namespace gfft {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

MCEstimate reduce_values(std::vector<cplx>& values, RngStream rng, bool antithetic) {
  // antithetic sampling averages partners first; the statistics then run
  // over the independent pair averages
  if (antithetic) {
    std::vector<cplx> pairs(values.size() / 2);
    for (std::size_t p = 0; p < pairs.size(); ++p)
      pairs[p] = 0.5 * (values[2 * p] + values[2 * p + 1]);
    values.swap(pairs);
  }
  const std::size_t n = values.size();
  MCEstimate est;
  est.n = n;
  est.seed = rng.seed;
  est.mean = pairwise_sum(std::span<const cplx>(values)) / static_cast<double>(n);
  double vre = 0.0, vim = 0.0;
  for (const cplx& v : values) {
    vre += (v.real() - est.mean.real()) * (v.real() - est.mean.real());
    vim += (v.imag() - est.mean.imag()) * (v.imag() - est.mean.imag());
  }
  if (n > 1) {
    vre /= static_cast<double>(n - 1);
    vim /= static_cast<double>(n - 1);
    est.stderr_ = std::sqrt(std::max(vre, vim) / static_cast<double>(n));
  }
  return est;
}

void require_finite_value(const cplx& v, std::size_t index) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw std::domain_error("non-finite integrand value at path " + std::to_string(index));
}

VerifyReport make_report(std::string id, int n, cplx closed, cplx counterpart, double stderr_,
                         double threshold, double runtime) {
  VerifyReport rep;
  rep.theorem_id = std::move(id);
  rep.n = n;
  rep.closed_form = closed;
  rep.counterpart = counterpart;
  rep.stderr_ = stderr_;
  rep.discrepancy = std::abs(closed - counterpart);
  rep.threshold = threshold;
  rep.pass = rep.discrepancy <= threshold;
  rep.runtime_sec = runtime;
  return rep;
}

}  // namespace

MCEstimate mc_expectation(const PathIntegrand& f, ConfigPtr cfg, std::size_t n, RngStream rng,
                          bool antithetic) {
  if (n < 100) throw std::invalid_argument("mc_expectation: needs at least 100 samples");
  if (antithetic && n % 2 != 0) --n;
  const SpaceConfig& c = *cfg;
  std::vector<cplx> values(n);
  std::string error;
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    PathSample x;
    x.cfg = cfg;
    x.values.resize(c.n() + 1);
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t key = antithetic ? i / 2 : i;
      const bool negate = antithetic && (i % 2 == 1);
      sample_path_values(c, rng, key, x.values, negate);
      values[i] = f(x);
    }
  });
  for (std::size_t i = 0; i < values.size(); ++i) require_finite_value(values[i], i);
  return reduce_values(values, rng, antithetic);
}

MCEstimate mc_pair_expectation(const PairIntegrand& f, ConfigPtr cfg, std::size_t n,
                               RngStream rng, bool antithetic) {
  if (n < 100) throw std::invalid_argument("mc_pair_expectation: needs at least 100 samples");
  if (antithetic && n % 2 != 0) --n;
  const SpaceConfig& c = *cfg;
  const RngStream rng1{rng.seed, 2 * rng.stream_id};
  const RngStream rng2{rng.seed, 2 * rng.stream_id + 1};
  std::vector<cplx> values(n);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    PathSample x1, x2;
    x1.cfg = cfg;
    x2.cfg = cfg;
    x1.values.resize(c.n() + 1);
    x2.values.resize(c.n() + 1);
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t key = antithetic ? i / 2 : i;
      const bool negate = antithetic && (i % 2 == 1);
      sample_path_values(c, rng1, key, x1.values, negate);
      sample_path_values(c, rng2, key, x2.values, negate);
      values[i] = f(x1, x2);
    }
  });
  for (std::size_t i = 0; i < values.size(); ++i) require_finite_value(values[i], i);
  return reduce_values(values, rng, antithetic);
}

cplx g_n_weight(cplx lambda, const PathSample& x, const OrthonormalBasis& basis, std::size_t n) {
  if (!(lambda.real() > 0.0))
    throw std::domain_error("g_n_weight: Re(lambda) must be positive");
  if (n > basis.size()) throw std::invalid_argument("g_n_weight: n exceeds basis size");
  cplx expo(0.0, 0.0);
  const cplx half_one_minus = 0.5 * (cplx(1.0, 0.0) - lambda);
  const cplx sqrt_minus_one = sqrt_principal(lambda) - 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = pwz(basis[k], x);
    expo += half_one_minus * (s * s) + sqrt_minus_one * inner_drift(basis[k]) * s;
  }
  return std::exp(expo);
}

cplx gn_normalized_moment(cplx lambda, const CMElement& w, const OrthonormalBasis& basis,
                          std::size_t n) {
  if (n > basis.size())
    throw std::invalid_argument("gn_normalized_moment: n exceeds basis size");
  OrthonormalBasis prefix(std::vector<CMElement>(basis.elements().begin(),
                                                 basis.elements().begin() + n));
  const BasisExtension ext = extend_basis(prefix, w);
  double sumsq = 0.0, drift_dot = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sumsq += ext.coeffs[k] * ext.coeffs[k];
    drift_dot += inner_drift(basis[k]) * ext.coeffs[k];
  }
  const double norm2 = inner_cm(w, w);
  cplx expo = (lambda - 1.0) / (2.0 * lambda) * sumsq - 0.5 * norm2;
  expo += cplx(0.0, 1.0) * inv_sqrt(lambda) * drift_dot;
  expo += cplx(0.0, 1.0) * ext.next_drift_ip * ext.residual_norm;
  return std::exp(expo);
}

cplx gn_exp_moment_exact(cplx lambda, const CMElement& w, const OrthonormalBasis& basis,
                         std::size_t n) {
  return pow_neg_half(lambda, static_cast<int>(n)) * gn_normalized_moment(lambda, w, basis, n);
}

cplx gn_exp_moment_quadrature(cplx lambda, const CMElement& w, const OrthonormalBasis& basis,
                              std::size_t n, int nodes_per_dim) {
  if (n > basis.size())
    throw std::invalid_argument("gn_exp_moment_quadrature: n exceeds basis size");
  if (n > 4)
    throw std::invalid_argument(
        "gn_exp_moment_quadrature: tensor oracle is limited to n <= 4 "
        "(nodes^(n+1) evaluations)");
  OrthonormalBasis prefix(std::vector<CMElement>(basis.elements().begin(),
                                                 basis.elements().begin() + n));
  const BasisExtension ext = extend_basis(prefix, w);
  const std::size_t d = n + 1;
  std::vector<double> means(d), scales(d), coeffs(d);
  for (std::size_t k = 0; k < n; ++k) {
    means[k] = inner_drift(basis[k]);
    coeffs[k] = ext.coeffs[k];
    scales[k] = 1.0 / std::sqrt(std::min(lambda.real(), 1.0));
  }
  means[n] = ext.next_drift_ip;
  coeffs[n] = ext.residual_norm;
  scales[n] = 1.0;

  const cplx half_one_minus = 0.5 * (cplx(1.0, 0.0) - lambda);
  const cplx sqrt_minus_one = sqrt_principal(lambda) - 1.0;
  auto integrand = [&](std::span<const double> u) -> cplx {
    cplx expo(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      expo += half_one_minus * u[k] * u[k] + sqrt_minus_one * means[k] * u[k];
    double phase = 0.0;
    for (std::size_t k = 0; k < d; ++k) phase += coeffs[k] * u[k];
    return std::exp(expo + cplx(0.0, phase));
  };
  return gaussian_tensor_expectation(integrand, means, scales, nodes_per_dim);
}

cplx gn_normalization_quadrature(cplx lambda, const OrthonormalBasis& basis, std::size_t n,
                                 int nodes_per_dim) {
  if (n > basis.size())
    throw std::invalid_argument("gn_normalization_quadrature: n exceeds basis size");
  const cplx half_one_minus = 0.5 * (cplx(1.0, 0.0) - lambda);
  const cplx sqrt_minus_one = sqrt_principal(lambda) - 1.0;
  cplx prod(1.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double mean = inner_drift(basis[k]);
    const double scale = 1.0 / std::sqrt(std::min(lambda.real(), 1.0));
    auto integrand = [&](std::span<const double> u) -> cplx {
      return std::exp(half_one_minus * u[0] * u[0] + sqrt_minus_one * mean * u[0]);
    };
    prod *= gaussian_tensor_expectation(integrand, std::span<const double>(&mean, 1),
                                        std::span<const double>(&scale, 1), nodes_per_dim);
  }
  return pow_half(lambda, static_cast<int>(n)) * prod;
}

LemmaVerification verify_lemma_limit(cplx lambda, const CMElement& w,
                                     const OrthonormalBasis& basis, std::size_t n,
                                     std::size_t mc_n, RngStream rng, int gh_nodes) {
  LemmaVerification out;
  const auto t0 = clock_type::now();
  const cplx exact = gn_exp_moment_exact(lambda, w, basis, n);
  const cplx oracle = gn_exp_moment_quadrature(lambda, w, basis, n, gh_nodes);
  out.oracle = make_report("lemma/oracle", static_cast<int>(n), exact, oracle, 0.0,
                           thresholds::closed_vs_oracle * (1.0 + std::abs(exact)),
                           seconds_since(t0));
  if (lambda.real() >= 0.3 && mc_n >= 100) {
    const auto t1 = clock_type::now();
    const MCEstimate est = mc_expectation(
        [&](const PathSample& x) {
          return g_n_weight(lambda, x, basis, n) *
                 std::exp(cplx(0.0, pwz(w, x)));
        },
        w.config(), mc_n, rng);
    out.mc = make_report("lemma/mc", static_cast<int>(n), exact, est.mean, est.stderr_,
                         thresholds::mc_sigmas * est.stderr_ + thresholds::mc_floor,
                         seconds_since(t1));
  }
  return out;
}

double pwz_mean(const CMElement& u) {
  const SpaceConfig& cfg = *u.config();
  double acc = 0.0;
  for (int j = 0; j < u.cutoff(); ++j) acc += u.nodal()[j] * cfg.da_cells()[j];
  return acc;
}

double pwz_cov(const CMElement& u, const CMElement& v) {
  if (u.config().get() != v.config().get())
    throw std::invalid_argument("pwz_cov: config mismatch");
  const SpaceConfig& cfg = *u.config();
  const int m = std::min(u.cutoff(), v.cutoff());
  double acc = 0.0;
  for (int j = 0; j < m; ++j) acc += u.nodal()[j] * v.nodal()[j] * cfg.db_cells()[j];
  return acc;
}

namespace {

// finite-rank value sum_k c_k e^{i<u_k,y>} prod_j normalized-moment(lambda_j, u_kj)
cplx finite_rank_transform(const PhaseFunctional& F, cplx lam1, cplx lam2, const PathArg& y1,
                           const PathArg& y2, const OrthonormalBasis& basis, std::size_t n) {
  std::vector<cplx> terms(F.atoms().size());
  for (std::size_t k = 0; k < F.atoms().size(); ++k) {
    const PhaseAtom& a = F.atoms()[k];
    const double phase = y1.pair_with(a.u1) + y2.pair_with(a.u2);
    terms[k] = a.coef * std::exp(cplx(0.0, phase)) *
               gn_normalized_moment(lam1, a.u1, basis, n) *
               gn_normalized_moment(lam2, a.u2, basis, n);
  }
  return pairwise_sum(std::span<const cplx>(terms));
}

cplx clip_into_gamma(cplx lam, double q0) {
  // push the real part up until the admissibility margin holds
  for (int i = 0; i < 60; ++i) {
    if (std::abs(inv_sqrt(lam).imag()) < 1.0 / std::sqrt(2.0 * q0)) return lam;
    lam = cplx(lam.real() * 2.0 + 1e-12, lam.imag());
  }
  throw std::runtime_error("clip_into_gamma: could not reach the admissible region");
}

}  // namespace

std::vector<VerifyReport> verify_limit_transform(const PhaseFunctional& F, double q1, double q2,
                                                 double q0, const PathArg& y1, const PathArg& y2,
                                                 const OrthonormalBasis& basis,
                                                 std::span<const int> n_list,
                                                 double lambda_path_scale, std::size_t mc_n,
                                                 RngStream rng) {
  std::vector<VerifyReport> reports;
  const cplx target = gfft_transform(F, LambdaPair::boundary(q1, q2), q0, y1, y2);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const int n = n_list[i];
    if (n < 0 || static_cast<std::size_t>(n) > basis.size())
      throw std::invalid_argument("verify_limit_transform: n exceeds basis size");
    const auto t0 = clock_type::now();
    cplx lam1(0.0, -q1), lam2(0.0, -q2);
    if (lambda_path_scale > 0.0) {
      const double re = lambda_path_scale * std::pow(0.5, n);
      lam1 = clip_into_gamma(cplx(re, -q1), q0);
      lam2 = clip_into_gamma(cplx(re, -q2), q0);
    }
    const cplx value = finite_rank_transform(F, lam1, lam2, y1, y2, basis, n);
    const bool last = (i + 1 == n_list.size());
    const double threshold = last ? std::min(prev, thresholds::limit_tail) : prev;
    reports.push_back(
        make_report("limit", n, target, value, 0.0, threshold, seconds_since(t0)));
    prev = reports.back().discrepancy;
  }

  if (mc_n >= 100 && !n_list.empty()) {
    // spot-check the finite-rank value itself at one interior parameter
    const int n = n_list.front();
    const cplx lam1(0.6, -0.6 * (q1 > 0 ? 1.0 : -1.0));
    const cplx lam2(0.6, -0.6 * (q2 > 0 ? 1.0 : -1.0));
    const auto t0 = clock_type::now();
    const cplx exact = finite_rank_transform(F, lam1, lam2, y1, y2, basis, n);
    const MCEstimate est = mc_pair_expectation(
        [&](const PathSample& x1, const PathSample& x2) {
          PathArg a1 = y1, a2 = y2;
          // shifted argument y + x: fold the sample into the evaluation
          cplx val(0.0, 0.0);
          for (const PhaseAtom& atom : F.atoms()) {
            const double phase = a1.pair_with(atom.u1) + pwz(atom.u1, x1) +
                                 a2.pair_with(atom.u2) + pwz(atom.u2, x2);
            val += atom.coef * std::exp(cplx(0.0, phase));
          }
          return g_n_weight(lam1, x1, basis, n) * g_n_weight(lam2, x2, basis, n) * val;
        },
        F.config(), mc_n, rng);
    const cplx scaled = pow_half(lam1, n) * pow_half(lam2, n) * est.mean;
    const double se = std::abs(pow_half(lam1, n) * pow_half(lam2, n)) * est.stderr_;
    reports.push_back(make_report("limit/mc-spot", n, exact, scaled, se,
                                  thresholds::mc_sigmas * se + thresholds::mc_floor,
                                  seconds_since(t0)));
  }
  return reports;
}

std::vector<VerifyReport> verify_change_of_scale(const PhaseFunctional& F, double rho1,
                                                 double rho2, const OrthonormalBasis& basis,
                                                 std::span<const int> n_list, std::size_t mc_n,
                                                 RngStream rng) {
  if (!(rho1 > 0.0) || !(rho2 > 0.0))
    throw std::domain_error("verify_change_of_scale: scales must be positive");
  std::vector<VerifyReport> reports;
  const cplx lam1(1.0 / (rho1 * rho1), 0.0), lam2(1.0 / (rho2 * rho2), 0.0);
  const cplx target =
      gfft_transform(F, LambdaPair::interior(lam1, lam2), 1.0, PathArg::zero(), PathArg::zero());
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const int n = n_list[i];
    const auto t0 = clock_type::now();
    const cplx value =
        finite_rank_transform(F, lam1, lam2, PathArg::zero(), PathArg::zero(), basis, n);
    const bool last = (i + 1 == n_list.size());
    const double threshold = last ? std::min(prev, thresholds::limit_tail) : prev;
    reports.push_back(make_report("scale", n, target, value, 0.0, threshold, seconds_since(t0)));
    prev = reports.back().discrepancy;
  }
  if (mc_n >= 100) {
    const auto t0 = clock_type::now();
    const MCEstimate est = mc_pair_expectation(
        [&](const PathSample& x1, const PathSample& x2) {
          return eval_functional(F, PathArg::of(x1, rho1), PathArg::of(x2, rho2));
        },
        F.config(), mc_n, rng);
    reports.push_back(make_report("scale/mc", 0, target, est.mean, est.stderr_,
                                  thresholds::mc_sigmas * est.stderr_ + thresholds::mc_floor,
                                  seconds_since(t0)));
  }
  return reports;
}

VerifyReport verify_translation(const PhaseFunctional& G, const CMElement& x0, std::size_t mc_n,
                                RngStream rng) {
  const auto t0 = clock_type::now();
  const double pref = std::exp(-0.5 * pwz_cov(x0, x0) - pwz_mean(x0));
  // per-path difference of the two sides; shared paths cancel most noise
  std::vector<cplx> diffs;
  const SpaceConfig& c = *G.config();
  const std::size_t n = mc_n;
  std::vector<cplx> lhs_vals(n), rhs_vals(n);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    PathSample x;
    x.cfg = G.config();
    x.values.resize(c.n() + 1);
    for (std::size_t i = lo; i < hi; ++i) {
      sample_path_values(c, rng, i, x.values);
      lhs_vals[i] = eval_functional(G, PathArg::shifted(x, x0), PathArg::zero());
      rhs_vals[i] = pref * std::exp(pwz(x0, x)) *
                    eval_functional(G, PathArg::of(x), PathArg::zero());
    }
  });
  diffs.resize(n);
  for (std::size_t i = 0; i < n; ++i) diffs[i] = lhs_vals[i] - rhs_vals[i];
  MCEstimate dstat = reduce_values(diffs, rng, false);
  const cplx lhs_mean = pairwise_sum(std::span<const cplx>(lhs_vals)) / static_cast<double>(n);
  const cplx rhs_mean = pairwise_sum(std::span<const cplx>(rhs_vals)) / static_cast<double>(n);
  VerifyReport rep = make_report("translation", 0, lhs_mean, rhs_mean, dstat.stderr_,
                                 thresholds::mc_sigmas * dstat.stderr_ + thresholds::mc_floor,
                                 seconds_since(t0));
  rep.discrepancy = std::abs(dstat.mean);
  rep.pass = rep.discrepancy <= rep.threshold;
  return rep;
}

double translation_exact_residual(const CMElement& x0) {
  const double mean = pwz_mean(x0);
  const double cov = pwz_cov(x0, x0);
  return std::abs(std::exp(-0.5 * cov - mean) * std::exp(mean + 0.5 * cov) - 1.0);
}

VerifyReport verify_cs_mu(const PhaseFunctional& F, const CMElement& g1, const CMElement& g2,
                          double rho1, double rho2, std::size_t mc_n, RngStream rng) {
  const auto t0 = clock_type::now();
  const PhaseFunctional dF = first_variation(F, g1.scaled(rho1), g2.scaled(rho2));
  const double cell_const = pwz_mean(g1) + pwz_mean(g2);
  const SpaceConfig& c = *F.config();
  std::size_t n = mc_n - (mc_n % 2);
  const RngStream rng1{rng.seed, 2 * rng.stream_id};
  const RngStream rng2{rng.seed, 2 * rng.stream_id + 1};
  std::vector<cplx> lhs_vals(n), rhs_vals(n), diffs(n);
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    PathSample x1, x2;
    x1.cfg = F.config();
    x2.cfg = F.config();
    x1.values.resize(c.n() + 1);
    x2.values.resize(c.n() + 1);
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t key = i / 2;
      const bool negate = (i % 2 == 1);
      sample_path_values(c, rng1, key, x1.values, negate);
      sample_path_values(c, rng2, key, x2.values, negate);
      const PathArg s1 = PathArg::of(x1, rho1), s2 = PathArg::of(x2, rho2);
      lhs_vals[i] = eval_functional(dF, s1, s2);
      const cplx fval = eval_functional(F, s1, s2);
      rhs_vals[i] = fval * (pwz(g1, x1) + pwz(g2, x2)) - cell_const * fval;
      diffs[i] = lhs_vals[i] - rhs_vals[i];
    }
  });
  MCEstimate dstat = reduce_values(diffs, rng, /*antithetic=*/true);
  std::vector<cplx> lhs_copy = lhs_vals, rhs_copy = rhs_vals;
  const MCEstimate lhs_stat = reduce_values(lhs_copy, rng, true);
  const MCEstimate rhs_stat = reduce_values(rhs_copy, rng, true);
  VerifyReport rep = make_report("cs-mu", 0, lhs_stat.mean, rhs_stat.mean, dstat.stderr_,
                                 thresholds::mc_sigmas * dstat.stderr_ + thresholds::mc_floor,
                                 seconds_since(t0));
  rep.discrepancy = std::abs(dstat.mean);
  rep.pass = rep.discrepancy <= rep.threshold;
  return rep;
}

cplx cs_feynman_rhs(const PhaseFunctional& F, const CMElement& g1, const CMElement& g2, double q1,
                    double q2, double q0, cplx second_term_coef) {
  const LambdaPair boundary = LambdaPair::boundary(q1, q2);
  const cplx weighted =
      feynman_linear_weighted(F, g1, g2, cplx(q1, 0.0), cplx(q2, 0.0), boundary, q0);
  const cplx drift_sum = sqrt_principal(cplx(0.0, -q1)) * inner_drift(g1) +
                         sqrt_principal(cplx(0.0, -q2)) * inner_drift(g2);
  const cplx ef = feynman_integral(F, q1, q2, q0);
  return cplx(0.0, -1.0) * weighted + second_term_coef * drift_sum * ef;
}

CsFeynmanVerification verify_cs_feynman(const PhaseFunctional& F, const CMElement& g1,
                                        const CMElement& g2, double q1, double q2, double q0,
                                        std::size_t mc_n, RngStream rng) {
  CsFeynmanVerification out;
  {
    const auto t0 = clock_type::now();
    const cplx lhs = feynman_integral(first_variation(F, g1, g2), q1, q2, q0);
    const cplx rhs = cs_feynman_rhs(F, g1, g2, q1, q2, q0);
    out.closed = make_report("cs-feynman", 0, lhs, rhs, 0.0,
                             thresholds::closed_vs_closed * (1.0 + std::abs(lhs)),
                             seconds_since(t0));
  }
  {
    // real-scaling precursor by antithetic paired MC
    const auto t0 = clock_type::now();
    const double lam1 = 1.5, lam2 = 0.8;
    const double r1 = 1.0 / std::sqrt(lam1), r2 = 1.0 / std::sqrt(lam2);
    const PhaseFunctional dF = first_variation(F, g1, g2);
    const double cell_const =
        std::sqrt(lam1) * pwz_mean(g1) + std::sqrt(lam2) * pwz_mean(g2);
    const SpaceConfig& c = *F.config();
    std::size_t n = mc_n - (mc_n % 2);
    const RngStream rng1{rng.seed, 2 * rng.stream_id + 16};
    const RngStream rng2{rng.seed, 2 * rng.stream_id + 17};
    std::vector<cplx> diffs(n);
    std::vector<cplx> lhs_vals(n), rhs_vals(n);
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
      PathSample x1, x2;
      x1.cfg = F.config();
      x2.cfg = F.config();
      x1.values.resize(c.n() + 1);
      x2.values.resize(c.n() + 1);
      for (std::size_t i = lo; i < hi; ++i) {
        const std::uint64_t key = i / 2;
        const bool negate = (i % 2 == 1);
        sample_path_values(c, rng1, key, x1.values, negate);
        sample_path_values(c, rng2, key, x2.values, negate);
        const PathArg s1 = PathArg::of(x1, r1), s2 = PathArg::of(x2, r2);
        lhs_vals[i] = eval_functional(dF, s1, s2);
        const cplx fval = eval_functional(F, s1, s2);
        rhs_vals[i] =
            fval * (std::sqrt(lam1) * pwz(g1, x1) + std::sqrt(lam2) * pwz(g2, x2)) -
            cell_const * fval;
        diffs[i] = lhs_vals[i] - rhs_vals[i];
      }
    });
    MCEstimate dstat = reduce_values(diffs, rng, true);
    std::vector<cplx> lhs_copy = lhs_vals, rhs_copy = rhs_vals;
    const MCEstimate lhs_stat = reduce_values(lhs_copy, rng, true);
    const MCEstimate rhs_stat = reduce_values(rhs_copy, rng, true);
    out.precursor = make_report("cs-feynman/real-scaling", 0, lhs_stat.mean, rhs_stat.mean,
                                dstat.stderr_,
                                thresholds::mc_sigmas * dstat.stderr_ + thresholds::mc_floor,
                                seconds_since(t0));
    out.precursor.discrepancy = std::abs(dstat.mean);
    out.precursor.pass = out.precursor.discrepancy <= out.precursor.threshold;
  }
  return out;
}

VerifyReport verify_kernel_operator_identity(const AtomicMeasure& f, const KernelOperator& A,
                                             const CMElement& g, double q0) {
  const auto t0 = clock_type::now();
  const auto [Aplus, Aminus] = decompose(A);
  const PhaseFunctional F = build_fresnel(f, Aplus, Aminus);
  const CMElement g1 = apply_op(Aplus, g, /*sqrt_kernel=*/true);
  const CMElement g2 = apply_op(Aminus, g, /*sqrt_kernel=*/true).scaled(-1.0);
  const cplx lhs = feynman_integral(first_variation(F, g1, g2), 1.0, -1.0, q0);

  // independent route: kernel-level quadratures only
  const SpaceConfig& cfg = *f.config();
  const cplx i_unit(0.0, 1.0);
  const cplx cplus = inv_sqrt(cplx(0.0, -1.0));  // (-i)^{-1/2}
  const cplx cminus = inv_sqrt(cplx(0.0, 1.0));  // (i)^{-1/2}
  cplx rhs(0.0, 0.0);
  std::vector<double> fplus(cfg.n() + 1), fminus(cfg.n() + 1);
  for (const auto& [coef, w] : f.atoms()) {
    const double awg = kernel_inner(A, w, g);
    const double aww = kernel_inner(A, w, w);
    for (int i = 0; i <= cfg.n(); ++i) {
      const double sp = std::sqrt(std::max(A.phi()[i], 0.0));
      const double sm = std::sqrt(std::max(-A.phi()[i], 0.0));
      fplus[i] = w.nodal()[i] * sp * cfg.aprime()[i];
      fminus[i] = w.nodal()[i] * sm * cfg.aprime()[i];
    }
    const double dplus = cfg.prefix_integral(fplus, w.cutoff());
    const double dminus = cfg.prefix_integral(fminus, w.cutoff());
    rhs += coef * i_unit * awg * std::exp(-0.5 * i_unit * aww) *
           std::exp(i_unit * (cplus * dplus + cminus * dminus));
  }
  return make_report("section9", 0, lhs, rhs, 0.0,
                     thresholds::closed_vs_closed * (1.0 + std::abs(lhs)), seconds_since(t0));
}

}  // namespace gfft
