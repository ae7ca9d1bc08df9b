#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gfft/fresnel.hpp"
#include "gfft/gauss_hermite.hpp"
#include "gfft/path_sampler.hpp"

namespace gfft {

/// Comparison thresholds used by every verifier.
namespace thresholds {
inline constexpr double closed_vs_closed = 1e-10;  // relative
inline constexpr double closed_vs_oracle = 1e-8;   // relative
inline constexpr double mc_sigmas = 4.0;           // times combined stderr
inline constexpr double mc_floor = 1e-12;          // for exactly-paired checks
inline constexpr double limit_tail = 1e-3;         // final residual of limit sequences
}  // namespace thresholds

struct MCEstimate {
  cplx mean;
  double stderr_ = 0.0;  // max of component standard errors
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

struct VerifyReport {
  std::string theorem_id;
  int n = 0;  // basis size / sequence index when meaningful
  cplx closed_form;
  cplx counterpart;
  double stderr_ = 0.0;
  double discrepancy = 0.0;
  double threshold = 0.0;
  bool pass = false;
  double runtime_sec = 0.0;
};

using PathIntegrand = std::function<cplx(const PathSample&)>;
using PairIntegrand = std::function<cplx(const PathSample&, const PathSample&)>;

/// Plain Monte Carlo over independent paths (or path pairs). Values are
/// stored per index and reduced with fixed-order pairwise summation, so the
/// result does not depend on the worker count. antithetic=true replaces
/// consecutive index pairs by (draws, negated draws) partners.
MCEstimate mc_expectation(const PathIntegrand& f, ConfigPtr cfg, std::size_t n, RngStream rng,
                          bool antithetic = false);
MCEstimate mc_pair_expectation(const PairIntegrand& f, ConfigPtr cfg, std::size_t n,
                               RngStream rng, bool antithetic = false);

/// Gaussian weight used by the finite-rank approximations:
///   G_n(lambda, x) = exp{ (1-lambda)/2 * sum_{k<=n} s_k^2
///                         + (lambda^{1/2}-1) * sum_{k<=n} (e_k,a) s_k },
/// s_k = <e_k, x>. Requires Re(lambda) > 0 (the weighted integrand is not
/// square integrable otherwise).
cplx g_n_weight(cplx lambda, const PathSample& x, const OrthonormalBasis& basis, std::size_t n);

/// Closed form of lambda^{n/2} E[G_n(lambda,.) exp{i <w, x>}]:
///   exp{ (lambda-1)/(2 lambda) sum c_k^2 - ||w||^2/2
///        + i lambda^{-1/2} sum (e_k,a) c_k + i (e_{n+1},a) r },
/// where c_k = (e_k, w) and r is the expansion residual. Valid for
/// Re(lambda) > 0 and, by continuation, for nonzero Re(lambda) >= 0.
cplx gn_normalized_moment(cplx lambda, const CMElement& w, const OrthonormalBasis& basis,
                          std::size_t n);

/// The un-normalized moment E[G_n exp{i<w,x>}] = lambda^{-n/2} * normalized.
cplx gn_exp_moment_exact(cplx lambda, const CMElement& w, const OrthonormalBasis& basis,
                         std::size_t n);

/// Independent (n+1)-dimensional Gauss-Hermite tensor oracle for the same
/// moment, straight from the finite-dimensional Gaussian law of the s_k.
cplx gn_exp_moment_quadrature(cplx lambda, const CMElement& w, const OrthonormalBasis& basis,
                              std::size_t n, int nodes_per_dim = 32);

/// lambda^{n/2} E[G_n] by independent per-dimension quadrature (the weight
/// factorizes over the s_k, so this stays cheap for any n). The
/// normalization invariant says the value is exactly 1.
cplx gn_normalization_quadrature(cplx lambda, const OrthonormalBasis& basis, std::size_t n,
                                 int nodes_per_dim = 64);

struct LemmaVerification {
  VerifyReport oracle;            // closed form vs tensor quadrature
  std::optional<VerifyReport> mc; // present when Re(lambda) >= 0.3
};

LemmaVerification verify_lemma_limit(cplx lambda, const CMElement& w,
                                     const OrthonormalBasis& basis, std::size_t n,
                                     std::size_t mc_n, RngStream rng, int gh_nodes = 48);

/// Mean and covariance of the pairings under the discrete path law:
///   E[<u,x>] = sum_j u_j (a_{j+1}-a_j),
///   Cov(<u,x>, <v,x>) = sum_j u_j v_j (b_{j+1}-b_j).
/// Identity checks subtract these (not the Simpson forms) so that constant
/// cases cancel exactly rather than within noise.
double pwz_mean(const CMElement& u);
double pwz_cov(const CMElement& u, const CMElement& v);

/// Finite-rank approximation sequence of the boundary transform:
/// row m compares sum_k c_k e^{i<u_k,y>} prod_j normalized-moment against the
/// closed transform at the boundary. lambda_path_scale > 0 follows the
/// interior path lambda_{j,n} = -i q_j + scale * 0.5^n (clipped into the
/// admissible region); scale = 0 evaluates directly at the boundary.
/// A final row spot-checks one interior lambda against Monte Carlo.
std::vector<VerifyReport> verify_limit_transform(const PhaseFunctional& F, double q1, double q2,
                                                 double q0, const PathArg& y1, const PathArg& y2,
                                                 const OrthonormalBasis& basis,
                                                 std::span<const int> n_list,
                                                 double lambda_path_scale, std::size_t mc_n,
                                                 RngStream rng);

/// Change-of-scale sequence: E[F(rho_1 x_1, rho_2 x_2)] (closed form, plus an
/// MC cross-check) against rho^{-n}-weighted finite-rank values.
std::vector<VerifyReport> verify_change_of_scale(const PhaseFunctional& F, double rho1,
                                                 double rho2, const OrthonormalBasis& basis,
                                                 std::span<const int> n_list, std::size_t mc_n,
                                                 RngStream rng);

/// Translation identity E[G(x + x0)] =
///   exp{-||x0||^2/2 - (x0,a)} E[G(x) e^{<x0,x>}]
/// for a first-coordinate functional G, with both sides sampled on the same
/// paths. The subtracted constants use the discrete path law, making the
/// G == 1 case an exact cancellation.
VerifyReport verify_translation(const PhaseFunctional& G, const CMElement& x0, std::size_t mc_n,
                                RngStream rng);

/// Exact residual of the translation constants under the discrete law
/// (zero up to rounding): exp{-cov/2 - mean} * exp{mean + cov/2} - 1.
double translation_exact_residual(const CMElement& x0);

/// Scaled first-variation identity: E[dF(rho x | rho g)] =
///   E[F(rho x) {<g_1,x_1> + <g_2,x_2>}] - {(g_1,a)+(g_2,a)} E[F(rho x)],
/// antithetic paired sampling; F == 1 cancels exactly.
VerifyReport verify_cs_mu(const PhaseFunctional& F, const CMElement& g1, const CMElement& g2,
                          double rho1, double rho2, std::size_t mc_n, RngStream rng);

/// Right-hand side of the boundary first-variation identity with an explicit
/// coefficient on the drift term:
///   -i E^{anf}[F {q_1<g_1,x_1> + q_2<g_2,x_2>}]
///   + coef * sum_j (-i q_j)^{1/2} (g_j, a) E^{anf}[F].
/// Analytic continuation of the real-scaling identity forces coef = -1.
cplx cs_feynman_rhs(const PhaseFunctional& F, const CMElement& g1, const CMElement& g2, double q1,
                    double q2, double q0, cplx second_term_coef = cplx(-1.0, 0.0));

struct CsFeynmanVerification {
  VerifyReport closed;             // LHS vs RHS, closed forms
  VerifyReport precursor;          // real-scaling identity by MC
};

CsFeynmanVerification verify_cs_feynman(const PhaseFunctional& F, const CMElement& g1,
                                        const CMElement& g2, double q1, double q2, double q0,
                                        std::size_t mc_n, RngStream rng);

/// Kernel-operator variation identity at parameters (1,-1): the generic
/// route (build, differentiate, integrate) against the direct kernel-level
/// closed form; two independent code paths, compared at 1e-10 relative.
VerifyReport verify_kernel_operator_identity(const AtomicMeasure& f, const KernelOperator& A,
                                             const CMElement& g, double q0 = 0.5);

}  // namespace gfft
