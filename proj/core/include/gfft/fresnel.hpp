#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "gfft/cm_space.hpp"
#include "gfft/path_sampler.hpp"

namespace gfft {

using cplx = std::complex<double>;

/// Principal square root restricted to the closed right half-plane minus 0;
/// the result always has positive real part there.
cplx sqrt_principal(cplx z);

/// r with r^2 = 1/lambda and Re(r) > 0, for lambda != 0, Re(lambda) >= 0.
cplx inv_sqrt(cplx lambda);

/// lambda^{n/2} and lambda^{-n/2} as powers of the principal square root.
cplx pow_half(cplx lambda, int n);
cplx pow_neg_half(cplx lambda, int n);

/// One scaling parameter: either interior (Re > 0) or the boundary value
/// -i q reached by analytic continuation, tagged with q != 0.
class ScalingParam {
 public:
  static ScalingParam interior(cplx lambda);
  static ScalingParam boundary(double q);
  cplx value() const { return value_; }
  bool is_boundary() const { return boundary_; }
  double q() const { return q_; }

 private:
  cplx value_;
  bool boundary_ = false;
  double q_ = 0.0;
};

struct LambdaPair {
  ScalingParam first, second;
  const ScalingParam& operator[](int j) const { return j == 0 ? first : second; }
  static LambdaPair interior(cplx l1, cplx l2);
  static LambdaPair boundary(double q1, double q2);
};

/// |Im(lambda^{-1/2})| < 1/sqrt(2 q0) for both components.
bool in_gamma_region(const LambdaPair& lambda, double q0);

/// Finite complex measure on the Cameron-Martin space as a list of weighted
/// atoms. Atoms whose supports coincide on the grid (sup distance of the
/// densities below 1e-12) are merged.
class AtomicMeasure {
 public:
  AtomicMeasure(ConfigPtr cfg, std::vector<std::pair<cplx, CMElement>> atoms);
  static AtomicMeasure single(ConfigPtr cfg, cplx coef, CMElement w);

  const ConfigPtr& config() const { return cfg_; }
  const std::vector<std::pair<cplx, CMElement>>& atoms() const { return atoms_; }
  double total_variation() const;

 private:
  ConfigPtr cfg_;
  std::vector<std::pair<cplx, CMElement>> atoms_;
};

/// One term c * exp{ i(u1, x1)~ + i(u2, x2)~ } of a functional in canonical
/// form. The C'-norms and drift pairings of u1, u2 are cached since every
/// closed form consumes them.
struct PhaseAtom {
  PhaseAtom(cplx coef, CMElement u1, CMElement u2);
  cplx coef;
  CMElement u1, u2;
  double norm2[2];     // ||u_j||^2
  double drift_ip[2];  // (u_j, a)
  const CMElement& u(int j) const { return j == 0 ? u1 : u2; }
};

/// Functional F(x1,x2) = sum_k c_k exp{ i(u_{k,1},x1)~ + i(u_{k,2},x2)~ }.
/// Closed under products, scaling, transforms and translation twists, which
/// is why atoms carry the phase elements directly.
class PhaseFunctional {
 public:
  PhaseFunctional(ConfigPtr cfg, std::vector<PhaseAtom> atoms);
  static PhaseFunctional constant(ConfigPtr cfg, cplx value);

  const ConfigPtr& config() const { return cfg_; }
  const std::vector<PhaseAtom>& atoms() const { return atoms_; }
  double norm_bound() const;  // sum |c_k|

  /// Operator data recorded by build_fresnel; enables the operator-norm
  /// form of the class bound and translation identities.
  struct Provenance {
    std::vector<double> w_norm;  // ||w_k|| per atom, pre-operator
    double op_norm_sqrt[2];      // ||A_j^{1/2}||_o
  };
  const std::optional<Provenance>& provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = std::move(p); }

 private:
  ConfigPtr cfg_;
  std::vector<PhaseAtom> atoms_;
  std::optional<Provenance> provenance_;
};

/// Evaluation argument: optionally a sampled path (scaled) plus a
/// deterministic Cameron-Martin shift. The pairing of an element u with the
/// shift v uses (u, v)_{C'}, the exact value of the stochastic pairing
/// against the path of v.
struct PathArg {
  const PathSample* path = nullptr;
  double path_scale = 1.0;
  const CMElement* shift = nullptr;
  double shift_scale = 1.0;

  static PathArg zero() { return {}; }
  static PathArg of(const PathSample& x, double scale = 1.0) { return {&x, scale, nullptr, 1.0}; }
  static PathArg shifted(const PathSample& x, const CMElement& v, double vscale = 1.0) {
    return {&x, 1.0, &v, vscale};
  }
  static PathArg of_element(const CMElement& v, double vscale = 1.0) {
    return {nullptr, 1.0, &v, vscale};
  }
  double pair_with(const CMElement& u) const;
};

/// F(x1,x2) = int exp{ sum_j i(A_j^{1/2} w, x_j)~ } df(w) in canonical form;
/// requires nonnegative kernels.
PhaseFunctional build_fresnel(const AtomicMeasure& f, const KernelOperator& A1,
                              const KernelOperator& A2);

cplx eval_functional(const PhaseFunctional& F, const PathSample& x1, const PathSample& x2);
cplx eval_functional(const PhaseFunctional& F, const PathArg& x1, const PathArg& x2);

/// Gaussian kernel of every closed form:
///   psi(lambda; atom) = prod_j exp{ -||u_j||^2/(2 lambda_j)
///                                   + i inv_sqrt(lambda_j) (u_j, a) }.
/// Boundary components substitute lambda_j = -i q_j directly.
cplx psi(const LambdaPair& lambda, const PhaseAtom& atom);

/// Transform with parameters lambda (interior) or -i q (boundary, |q_j| > q0):
///   sum_k c_k exp{ i sum_j <u_{k,j}, y_j> } psi(lambda; atom_k).
/// At y = 0 this is the analytic (resp. Feynman) function-space integral.
cplx gfft_transform(const PhaseFunctional& F, const LambdaPair& lambda, double q0,
                    const PathArg& y1 = {}, const PathArg& y2 = {});

/// The transform as a functional again: coefficients c_k psi(lambda; atom_k).
PhaseFunctional gfft_functional(const PhaseFunctional& F, const LambdaPair& lambda, double q0);

/// Boundary transform at y = 0.
cplx feynman_integral(const PhaseFunctional& F, double q1, double q2, double q0);

/// Directional derivative along (g1, g2): atom coefficients pick up the
/// factor i[(u_{k,1},g1) + (u_{k,2},g2)]; the phases are unchanged.
PhaseFunctional first_variation(const PhaseFunctional& F, const CMElement& g1,
                                const CMElement& g2);

/// Central finite-difference variant of the first variation at a point,
/// for cross-checking the closed form.
cplx first_variation_fd(const PhaseFunctional& F, const CMElement& g1, const CMElement& g2,
                        const PathArg& x1, const PathArg& x2, double step = 1e-5);

/// Linear-weighted integral: per atom,
///   sum_j c_j [ inv_sqrt(lambda_j)(g_j,a) + i (u_j,g_j)/lambda_j ] psi(lambda; atom),
/// summed with the atom coefficients. Equals the analytic function-space
/// integral of F(x) * (c_1 (g_1,x_1)~ + c_2 (g_2,x_2)~).
cplx feynman_linear_weighted(const PhaseFunctional& F, const CMElement& g1, const CMElement& g2,
                             cplx c1, cplx c2, const LambdaPair& lambda, double q0);

struct TranslationCheck {
  cplx lhs;
  cplx rhs;
  double abs_diff;
};

/// Translation identity for the boundary transform. shift_j plays the role
/// of A_j^{1/2} g_j; lhs evaluates the transform at y_j shifted by shift_j,
/// rhs is the twisted-functional form:
///   exp{ sum_j [ i q_j ||shift_j||^2 / 2 - (-i q_j)^{1/2} (shift_j, a) ] }
///   * exp{ sum_j i q_j <shift_j, y_j> } * T(F^*)(y), with
///   F^* atoms (c_k, u_{k,j} - q_j shift_j).
TranslationCheck translation_check(const PhaseFunctional& F, double q1, double q2, double q0,
                                   const CMElement& shift1, const CMElement& shift2,
                                   const PathArg& y1 = {}, const PathArg& y2 = {});

/// Functional from a discrete d-dimensional spectral measure: one atom per
/// point (weight, v): w = sum_l v_l g_l mapped through A_j^{1/2}.
PhaseFunctional build_from_theta(ConfigPtr cfg,
                                 const std::vector<std::pair<cplx, std::vector<double>>>& points,
                                 const std::vector<CMElement>& gs, const KernelOperator& A1,
                                 const KernelOperator& A2);

/// Atom-wise convolution: (F*G) evaluates to the pointwise product.
PhaseFunctional product(const PhaseFunctional& F, const PhaseFunctional& G);

struct ClassReport {
  double q0 = 0.0;
  std::vector<double> k_values;  // dominating constant per atom
  double weighted_sum = 0.0;     // sum |c_k| k_k
  double gamma_margin = 0.0;     // min over samples of 1/sqrt(2 q0) - max_j |Im inv_sqrt|
  bool bound_holds = true;       // |psi(lambda; atom)| < k for every sample/atom
  double min_bound_margin = 0.0; // min over samples/atoms of k - |psi|
  bool membership = false;       // weighted_sum below the cap
};

/// Checks the dominating bound |psi(lambda; atom)| < k(q0; atom) over the
/// given samples (all must lie in the admissible region) and sums the
/// per-atom constants. With operator provenance k uses
/// exp{ sum_j (2 q0)^{-1/2} ||A_j^{1/2}||_o ||w_k|| ||a|| }, otherwise the
/// tighter exp{ sum_j (2 q0)^{-1/2} ||u_{k,j}|| ||a|| }. The margin
/// degenerates to 0 when the drift pairings vanish and Re(lambda_j) = 0
/// (both sides collapse to 1); strictness needs interior samples or a
/// nonvanishing drift.
ClassReport class_check(const PhaseFunctional& F, double q0,
                        const std::vector<LambdaPair>& lambda_samples, double cap = 1e12);

}  // namespace gfft
