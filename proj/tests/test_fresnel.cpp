#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gfft/fresnel.hpp"
#include "test_support.hpp"

using namespace gfft;
using gfft::test::drift_config;
using gfft::test::make_path;
using gfft::test::poly_element;
using gfft::test::rel_err;
using gfft::test::wiener_config;

namespace {

const cplx I(0.0, 1.0);

PhaseFunctional single_atom(ConfigPtr cfg, cplx coef, CMElement u1, CMElement u2) {
  std::vector<PhaseAtom> atoms;
  atoms.emplace_back(coef, std::move(u1), std::move(u2));
  return PhaseFunctional(std::move(cfg), std::move(atoms));
}

}  // namespace

TEST_CASE("principal branch of the inverse square root") {
  CHECK(inv_sqrt(cplx(4.0, 0.0)) == cplx(0.5, 0.0));
  SUBCASE("boundary values match the explicit half-angle form") {
    for (double q : {1.0, -1.0, 2.0, -2.0, 5.0, -5.0}) {
      const cplx got = inv_sqrt(cplx(0.0, -q));
      const double mag = 1.0 / std::sqrt(2.0 * std::abs(q));
      const cplx want(mag, (q > 0 ? 1.0 : -1.0) * mag);
      CHECK(std::abs(got - want) < 1e-12);
    }
  }
  SUBCASE("upper imaginary axis") {
    const cplx got = inv_sqrt(cplx(0.0, 2.0));
    CHECK(std::abs(got - cplx(0.5, -0.5)) < 1e-14);
  }
  SUBCASE("zero and left half-plane are rejected") {
    CHECK_THROWS_AS(inv_sqrt(cplx(0.0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(inv_sqrt(cplx(-1.0, 0.5)), std::domain_error);
  }
  SUBCASE("branch invariant on random right-half-plane samples") {
    std::mt19937_64 gen(101);
    std::uniform_real_distribution<double> re(0.0, 5.0), im(-5.0, 5.0);
    for (int k = 0; k < 10000; ++k) {
      cplx lambda(re(gen), im(gen));
      if (std::abs(lambda) < 1e-6) continue;
      const cplx r = inv_sqrt(lambda);
      CHECK(r.real() > 0.0);
      CHECK(std::abs(r * r * lambda - 1.0) < 1e-12);
    }
  }
  SUBCASE("half powers agree with repeated multiplication") {
    const cplx lam(0.3, -1.7);
    CHECK(std::abs(pow_half(lam, 3) - sqrt_principal(lam) * sqrt_principal(lam) *
                                          sqrt_principal(lam)) < 1e-14);
    CHECK(std::abs(pow_half(lam, 2) * pow_neg_half(lam, 2) - 1.0) < 1e-14);
  }
}

TEST_CASE("admissible region") {
  CHECK(in_gamma_region(LambdaPair::boundary(1.0, -1.0), 0.5));
  CHECK_FALSE(in_gamma_region(LambdaPair::boundary(0.4, -1.0), 0.5));
  // small-modulus nearly-imaginary parameter: |Im(lambda^{-1/2})| ~ 1/sqrt(2|lambda|)
  const cplx lam(1e-4, 0.01);
  CHECK_FALSE(in_gamma_region({ScalingParam::interior(lam), ScalingParam::interior(lam)}, 0.5));
  // large modulus keeps the imaginary part small: inside even for big q0
  const cplx big(1e-4, 50.0);
  CHECK(in_gamma_region({ScalingParam::interior(big), ScalingParam::interior(big)}, 40.0));
  CHECK(in_gamma_region(LambdaPair::interior(cplx(1.0, 0.1), cplx(2.0, -0.3)), 0.5));
}

TEST_CASE("atomic measures merge coincident atoms") {
  auto cfg = wiener_config(128);
  std::vector<std::pair<cplx, CMElement>> atoms;
  atoms.emplace_back(cplx(1.0, 0.0), poly_element(cfg, {1.0}));
  atoms.emplace_back(cplx(0.0, 2.0), poly_element(cfg, {1.0}));
  atoms.emplace_back(cplx(0.5, 0.0), poly_element(cfg, {0.0, 1.0}));
  const AtomicMeasure f(cfg, std::move(atoms));
  CHECK(f.atoms().size() == 2);
  CHECK(f.atoms()[0].first == cplx(1.0, 2.0));
  CHECK(f.total_variation() == doctest::Approx(std::abs(cplx(1.0, 2.0)) + 0.5));
}

TEST_CASE("building functionals from measures and operators") {
  auto cfg = wiener_config(256);
  const auto w = poly_element(cfg, {0.5, 1.0});
  SUBCASE("identity and zero operators reduce to a single-argument functional") {
    const auto F = build_fresnel(AtomicMeasure::single(cfg, 1.0, w),
                                 KernelOperator::identity(cfg), KernelOperator::zero(cfg));
    REQUIRE(F.atoms().size() == 1);
    CHECK(F.atoms()[0].norm2[0] == doctest::Approx(inner_cm(w, w)).epsilon(1e-13));
    CHECK(F.atoms()[0].norm2[1] == 0.0);
  }
  SUBCASE("atom at the zero element is the constant functional") {
    const auto F = build_fresnel(AtomicMeasure::single(cfg, 1.0, CMElement::zero(cfg)),
                                 KernelOperator::identity(cfg), KernelOperator::identity(cfg));
    auto x = make_path(cfg, [](double t) { return std::sin(9 * t); });
    CHECK(eval_functional(F, x, x) == cplx(1.0, 0.0));
  }
  SUBCASE("constant kernel 4 halves into density 2z") {
    const auto F = build_fresnel(AtomicMeasure::single(cfg, 1.0, w),
                                 KernelOperator::scalar(cfg, 4.0), KernelOperator::zero(cfg));
    CHECK(F.atoms()[0].u1.nodal()[64] == doctest::Approx(2.0 * w.nodal()[64]));
  }
  SUBCASE("negative kernel is rejected") {
    const auto A = KernelOperator::from_kernel(cfg, [](double t) { return t - 0.5; });
    CHECK_THROWS_AS(
        build_fresnel(AtomicMeasure::single(cfg, 1.0, w), A, KernelOperator::zero(cfg)),
        std::domain_error);
  }
}

TEST_CASE("pointwise evaluation of phase functionals") {
  auto cfg = wiener_config(512);
  SUBCASE("single atom picks up both terminal values") {
    const auto F = single_atom(cfg, 1.0, beta(1.0, cfg), beta(1.0, cfg));
    auto x1 = make_path(cfg, [](double t) { return 0.7 * t; });
    auto x2 = make_path(cfg, [](double t) { return -0.2 * t; });
    CHECK(std::abs(eval_functional(F, x1, x2) - std::exp(I * 0.5)) < 1e-14);
  }
  SUBCASE("conjugate atoms produce a real cosine") {
    const auto b1 = beta(1.0, cfg);
    std::vector<PhaseAtom> atoms;
    atoms.emplace_back(cplx(0.5, 0.0), b1, CMElement::zero(cfg));
    atoms.emplace_back(cplx(0.5, 0.0), b1.scaled(-1.0), CMElement::zero(cfg));
    const PhaseFunctional F(cfg, std::move(atoms));
    auto x = make_path(cfg, [](double t) { return 1.3 * t; });
    const cplx v = eval_functional(F, x, x);
    CHECK(std::abs(v.imag()) < 1e-15);
    CHECK(v.real() == doctest::Approx(std::cos(1.3)).epsilon(1e-13));
  }
  SUBCASE("modulus is bounded by the coefficient mass") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<PhaseAtom> atoms;
    for (int k = 0; k < 4; ++k)
      atoms.emplace_back(cplx(coef(gen), coef(gen)), poly_element(cfg, {coef(gen), coef(gen)}),
                         poly_element(cfg, {coef(gen)}));
    const PhaseFunctional F(cfg, std::move(atoms));
    auto x1 = make_path(cfg, [](double t) { return std::sin(20 * t); });
    auto x2 = make_path(cfg, [](double t) { return std::cos(15 * t) - 1; });
    CHECK(std::abs(eval_functional(F, x1, x2)) <= F.norm_bound() + 1e-14);
  }
}

TEST_CASE("gaussian kernel factor") {
  SUBCASE("drifted linear clock at unit parameters") {
    auto cfg = drift_config(512);
    const PhaseAtom atom(1.0, beta(1.0, cfg), beta(1.0, cfg));
    const cplx got = psi(LambdaPair::interior(1.0, 1.0), atom);
    CHECK(std::abs(got - std::exp(cplx(-1.0, 2.0))) < 1e-12);
  }
  SUBCASE("zero phases give 1 at any parameter") {
    auto cfg = drift_config(128);
    const PhaseAtom atom(1.0, CMElement::zero(cfg), CMElement::zero(cfg));
    CHECK(psi(LambdaPair::interior(cplx(0.2, 7.0), cplx(3.0, -4.0)), atom) == cplx(1.0, 0.0));
    CHECK(psi(LambdaPair::boundary(2.0, -3.0), atom) == cplx(1.0, 0.0));
  }
  SUBCASE("opposite boundary parameters cancel the quadratic term") {
    auto cfg = drift_config(512);
    const PhaseAtom atom(1.0, beta(1.0, cfg), beta(1.0, cfg));
    const cplx got = psi(LambdaPair::boundary(1.0, -1.0), atom);
    CHECK(std::abs(got - std::exp(I * std::numbers::sqrt2)) < 1e-12);
  }
  SUBCASE("no drift means modulus at most one for real parameters") {
    auto cfg = wiener_config(256);
    const PhaseAtom atom(1.0, poly_element(cfg, {1.0, 1.0}), poly_element(cfg, {0.5}));
    for (double l1 : {0.5, 1.0, 3.0})
      for (double l2 : {0.25, 2.0})
        CHECK(std::abs(psi(LambdaPair::interior(l1, l2), atom)) <= 1.0 + 1e-15);
  }
}

TEST_CASE("transform closed form") {
  SUBCASE("constant functional transforms to its coefficient") {
    auto cfg = drift_config(256);
    const auto F = PhaseFunctional::constant(cfg, cplx(0.25, -1.5));
    auto y = make_path(cfg, [](double t) { return std::sin(3 * t); });
    CHECK(std::abs(gfft_transform(F, LambdaPair::boundary(1.0, -1.0), 0.5, PathArg::of(y),
                                  PathArg::of(y)) -
                   cplx(0.25, -1.5)) < 1e-15);
    CHECK(std::abs(gfft_transform(F, LambdaPair::interior(cplx(1, 1), cplx(2, -1)), 0.5) -
                   cplx(0.25, -1.5)) < 1e-15);
  }
  SUBCASE("boundary transform of the drifted horizon atom") {
    auto cfg = drift_config(512);
    const auto F = single_atom(cfg, 1.0, beta(1.0, cfg), beta(1.0, cfg));
    const cplx got = gfft_transform(F, LambdaPair::boundary(1.0, -1.0), 0.5);
    CHECK(std::abs(got - std::exp(I * std::numbers::sqrt2)) < 1e-12);
  }
  SUBCASE("no drift, unit norms, equal boundary parameters") {
    auto cfg = wiener_config(512);
    const auto u = poly_element(cfg, {1.0});  // ||u|| = 1 under b(t)=t, T=1
    REQUIRE(inner_cm(u, u) == doctest::Approx(1.0).epsilon(1e-13));
    const auto F = single_atom(cfg, 1.0, u, u);
    const cplx got = feynman_integral(F, 2.0, 2.0, 0.5);
    CHECK(std::abs(got - std::exp(-I * 0.5)) < 1e-12);
  }
  SUBCASE("boundary parameters inside the excluded band are rejected") {
    auto cfg = wiener_config(128);
    const auto F = PhaseFunctional::constant(cfg, 1.0);
    CHECK_THROWS_AS(gfft_transform(F, LambdaPair::boundary(0.4, 1.0), 0.5), std::domain_error);
  }
  SUBCASE("transform of the transform evaluates identically") {
    auto cfg = drift_config(256);
    std::vector<PhaseAtom> atoms;
    atoms.emplace_back(cplx(0.8, 0.1), poly_element(cfg, {1.0, -0.5}),
                       poly_element(cfg, {0.25}));
    atoms.emplace_back(cplx(-0.2, 0.4), poly_element(cfg, {0.0, 1.0}),
                       poly_element(cfg, {1.0, 1.0}));
    const PhaseFunctional F(cfg, std::move(atoms));
    const LambdaPair q = LambdaPair::boundary(1.5, -2.0);
    const PhaseFunctional TF = gfft_functional(F, q, 0.5);
    auto y1 = make_path(cfg, [](double t) { return std::sin(2 * t); });
    auto y2 = make_path(cfg, [](double t) { return t * t; });
    const cplx direct = gfft_transform(F, q, 0.5, PathArg::of(y1), PathArg::of(y2));
    const cplx via_functional = eval_functional(TF, y1, y2);
    CHECK(std::abs(direct - via_functional) <= 1e-12 * (1.0 + std::abs(direct)));
  }
  SUBCASE("no drift keeps the transform bounded by the coefficient mass") {
    auto cfg = wiener_config(256);
    std::vector<PhaseAtom> atoms;
    atoms.emplace_back(cplx(0.3, -0.4), poly_element(cfg, {1.0, 2.0}),
                       poly_element(cfg, {0.5}));
    atoms.emplace_back(cplx(1.0, 0.2), poly_element(cfg, {0.0, 0.5}),
                       poly_element(cfg, {-1.0, 1.0}));
    const PhaseFunctional F(cfg, std::move(atoms));
    auto y = make_path(cfg, [](double t) { return std::sin(7 * t); });
    for (double re : {0.2, 1.0, 4.0}) {
      const cplx v = gfft_transform(F, LambdaPair::interior(cplx(re, 0.7), cplx(re, -0.4)), 0.5,
                                    PathArg::of(y), PathArg::of(y));
      CHECK(std::abs(v) <= F.norm_bound() + 1e-13);
    }
  }
}

TEST_CASE("analyticity probe: Cauchy-Riemann residual of the transform") {
  auto cfg = drift_config(256);
  std::vector<PhaseAtom> atoms;
  atoms.emplace_back(cplx(0.6, 0.2), poly_element(cfg, {0.8, 0.3}), poly_element(cfg, {0.4}));
  atoms.emplace_back(cplx(-0.3, 0.5), poly_element(cfg, {0.2, -0.6}),
                     poly_element(cfg, {0.9, 0.1}));
  const PhaseFunctional F(cfg, std::move(atoms));
  auto y = make_path(cfg, [](double t) { return 0.3 * std::sin(4 * t); });
  const double h = 1e-4;
  const cplx lam2(0.9, -0.5);
  const double q0 = 0.4;
  int tested = 0;
  for (const cplx lam1 : {cplx(0.8, -1.1), cplx(1.2, 0.4), cplx(0.7, 0.0), cplx(1.5, -0.8),
                          cplx(0.9, 0.9), cplx(2.0, -0.2), cplx(1.1, -0.5), cplx(0.85, 0.35),
                          cplx(1.7, 0.6), cplx(1.3, -1.2)}) {
    REQUIRE(in_gamma_region(LambdaPair::interior(lam1, lam2), q0));
    auto eval = [&](cplx l) {
      return gfft_transform(F, LambdaPair::interior(l, lam2), q0, PathArg::of(y), PathArg::of(y));
    };
    const cplx ddre = (eval(lam1 + h) - eval(lam1 - h)) / (2 * h);
    const cplx ddim = (eval(lam1 + I * h) - eval(lam1 - I * h)) / (2 * h);
    CHECK(std::abs(ddim - I * ddre) < 1e-6);
    ++tested;
  }
  CHECK(tested == 10);
}

TEST_CASE("first variation") {
  auto cfg = wiener_config(512);
  SUBCASE("constant functional has zero variation") {
    const auto F = PhaseFunctional::constant(cfg, 1.0);
    const auto dF = first_variation(F, poly_element(cfg, {1.0}), poly_element(cfg, {0.0, 1.0}));
    CHECK(dF.norm_bound() == 0.0);
  }
  SUBCASE("orthogonal directions annihilate") {
    const auto u = poly_element(cfg, {1.0});
    const auto g = poly_element(cfg, {-std::sqrt(3.0), 2.0 * std::sqrt(3.0)});
    const auto F = single_atom(cfg, 1.0, u, CMElement::zero(cfg));
    const auto dF = first_variation(F, g, g);
    CHECK(dF.norm_bound() < 1e-11);
  }
  SUBCASE("horizon atom against its own direction") {
    const auto b1 = beta(1.0, cfg);
    const auto F = single_atom(cfg, 1.0, b1, CMElement::zero(cfg));
    const auto dF = first_variation(F, b1, poly_element(cfg, {0.3, 0.3}));
    REQUIRE(dF.atoms().size() == 1);
    CHECK(std::abs(dF.atoms()[0].coef - I) < 1e-13);
  }
  SUBCASE("finite differences confirm the closed form") {
    auto dcfg = drift_config(256);
    std::vector<PhaseAtom> atoms;
    atoms.emplace_back(cplx(0.5, -0.3), poly_element(dcfg, {1.0, 0.4}),
                       poly_element(dcfg, {0.2, -0.1}));
    atoms.emplace_back(cplx(0.1, 0.8), poly_element(dcfg, {0.0, 1.0}),
                       poly_element(dcfg, {1.0}));
    const PhaseFunctional F(dcfg, std::move(atoms));
    const auto g1 = poly_element(dcfg, {0.7, -0.2});
    const auto g2 = poly_element(dcfg, {0.1, 0.5});
    auto x1 = make_path(dcfg, [](double t) { return std::sin(3 * t) + t; });
    auto x2 = make_path(dcfg, [](double t) { return std::cos(2 * t) - 1; });
    const cplx closed = eval_functional(first_variation(F, g1, g2), x1, x2);
    const cplx fd = first_variation_fd(F, g1, g2, PathArg::of(x1), PathArg::of(x2));
    CHECK(rel_err(fd, closed) < 1e-6);
  }
}

TEST_CASE("linear-weighted boundary integrals") {
  SUBCASE("constant functional reduces to the scaled drift pairing") {
    auto cfg = drift_config(512);
    const auto F = PhaseFunctional::constant(cfg, 1.0);
    const auto g1 = poly_element(cfg, {1.0, 0.5});
    const cplx lam1(1.3, -0.4), lam2(0.7, 0.2);
    const cplx got = feynman_linear_weighted(F, g1, CMElement::zero(cfg), 1.0, 0.0,
                                             LambdaPair::interior(lam1, lam2), 0.5);
    const cplx want = inv_sqrt(lam1) * inner_drift(g1);
    CHECK(std::abs(got - want) < 1e-13);
  }
  SUBCASE("centered case vanishes") {
    auto cfg = wiener_config(256);
    const auto F = PhaseFunctional::constant(cfg, 1.0);
    const cplx got =
        feynman_linear_weighted(F, poly_element(cfg, {1.0}), poly_element(cfg, {0.0, 1.0}), 1.0,
                                2.0, LambdaPair::boundary(1.0, -1.0), 0.5);
    CHECK(std::abs(got) < 1e-14);
  }
  SUBCASE("orthogonal directions with no drift vanish") {
    auto cfg = wiener_config(512);
    const auto u = poly_element(cfg, {1.0});
    const auto g = poly_element(cfg, {-std::sqrt(3.0), 2.0 * std::sqrt(3.0)});
    const auto F = single_atom(cfg, 1.0, u, u);
    const cplx got =
        feynman_linear_weighted(F, g, g, 1.0, 1.0, LambdaPair::boundary(2.0, -2.0), 0.5);
    CHECK(std::abs(got) < 1e-13);
  }
}

TEST_CASE("translation identity for the boundary transform") {
  auto cfg = drift_config(256);
  std::vector<PhaseAtom> atoms;
  atoms.emplace_back(cplx(0.9, -0.1), poly_element(cfg, {1.0, 0.3}),
                     poly_element(cfg, {0.5, -0.2}));
  atoms.emplace_back(cplx(0.2, 0.6), poly_element(cfg, {0.0, 1.0}), poly_element(cfg, {1.0}));
  const PhaseFunctional F(cfg, std::move(atoms));
  auto y1 = make_path(cfg, [](double t) { return 0.4 * std::sin(2 * t); });
  auto y2 = make_path(cfg, [](double t) { return 0.1 * t * t; });

  SUBCASE("zero shifts collapse to an exact identity") {
    const auto chk = translation_check(F, 1.5, -1.2, 0.5, CMElement::zero(cfg),
                                       CMElement::zero(cfg), PathArg::of(y1), PathArg::of(y2));
    CHECK(chk.abs_diff < 1e-14);
  }
  SUBCASE("constant functional") {
    const auto chk =
        translation_check(PhaseFunctional::constant(cfg, 1.0), 1.0, -1.0, 0.5,
                          poly_element(cfg, {0.5, 0.2}), poly_element(cfg, {0.1}),
                          PathArg::of(y1), PathArg::of(y2));
    CHECK(chk.abs_diff <= 1e-10 * (1.0 + std::abs(chk.lhs)));
  }
  SUBCASE("generic shifts agree to closed-form accuracy") {
    const auto chk = translation_check(F, 1.5, -1.2, 0.5, poly_element(cfg, {0.3, 0.4}),
                                       poly_element(cfg, {-0.2, 0.6}), PathArg::of(y1),
                                       PathArg::of(y2));
    CHECK(chk.abs_diff <= 1e-10 * (1.0 + std::abs(chk.lhs)));
  }
  SUBCASE("single-argument reduction") {
    // second component switched off entirely: identity on the first factor
    std::vector<PhaseAtom> single;
    single.emplace_back(cplx(0.7, 0.2), poly_element(cfg, {1.0, -0.4}), CMElement::zero(cfg));
    single.emplace_back(cplx(0.1, -0.5), poly_element(cfg, {0.2, 0.9}), CMElement::zero(cfg));
    const PhaseFunctional F0(cfg, std::move(single));
    const auto chk = translation_check(F0, 1.4, -1.4, 0.5, poly_element(cfg, {0.5, -0.1}),
                                       CMElement::zero(cfg), PathArg::of(y1), PathArg::of(y2));
    CHECK(chk.abs_diff <= 1e-10 * (1.0 + std::abs(chk.lhs)));
  }
}

TEST_CASE("functionals from discrete spectral measures") {
  auto cfg = wiener_config(256);
  const auto g1 = poly_element(cfg, {1.0});
  const auto g2 = poly_element(cfg, {0.0, 1.0});
  const auto A1 = KernelOperator::identity(cfg);
  const auto A2 = KernelOperator::zero(cfg);
  SUBCASE("point mass gives one atom at the direction") {
    const auto F = build_from_theta(cfg, {{cplx(1.0, 0.0), {1.0}}}, {g1}, A1, A2);
    REQUIRE(F.atoms().size() == 1);
    CHECK(F.atoms()[0].norm2[0] == doctest::Approx(inner_cm(g1, g1)).epsilon(1e-13));
  }
  SUBCASE("symmetric two-point measure builds the cosine functional") {
    const auto F = build_from_theta(
        cfg, {{cplx(0.5, 0.0), {1.0}}, {cplx(0.5, 0.0), {-1.0}}}, {g1}, A1, A2);
    REQUIRE(F.atoms().size() == 2);
    auto x = make_path(cfg, [](double t) { return 0.9 * t; });
    const cplx v = eval_functional(F, x, x);
    CHECK(v.real() == doctest::Approx(std::cos(pwz(g1, x))).epsilon(1e-13));
    CHECK(std::abs(v.imag()) < 1e-15);
  }
  SUBCASE("empty measure is the zero functional") {
    const auto F = build_from_theta(cfg, {}, {g1, g2}, A1, A2);
    CHECK(F.norm_bound() == 0.0);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(build_from_theta(cfg, {{cplx(1.0, 0.0), {1.0, 2.0}}}, {g1}, A1, A2),
                    std::invalid_argument);
  }
  SUBCASE("coefficient mass bounds the functional") {
    const auto F = build_from_theta(
        cfg, {{cplx(0.5, 0.0), {1.0, 0.0}}, {cplx(0.0, -0.25), {0.3, 2.0}}}, {g1, g2}, A1, A2);
    CHECK(F.norm_bound() <= 0.75 + 1e-15);
  }
}

TEST_CASE("products of functionals evaluate to pointwise products") {
  auto cfg = drift_config(256);
  std::vector<PhaseAtom> fa, ga;
  fa.emplace_back(cplx(0.5, 0.2), poly_element(cfg, {1.0}), poly_element(cfg, {0.0, 1.0}));
  fa.emplace_back(cplx(-0.1, 0.7), poly_element(cfg, {0.5, 0.5}), poly_element(cfg, {1.0}));
  ga.emplace_back(cplx(0.3, -0.3), poly_element(cfg, {0.2}), poly_element(cfg, {0.4, 0.1}));
  ga.emplace_back(cplx(1.1, 0.0), poly_element(cfg, {0.0, 2.0}), poly_element(cfg, {0.6}));
  const PhaseFunctional F(cfg, std::move(fa)), G(cfg, std::move(ga));
  const auto FG = product(F, G);
  auto x1 = make_path(cfg, [](double t) { return std::sin(6 * t); });
  auto x2 = make_path(cfg, [](double t) { return t - t * t; });
  const cplx lhs = eval_functional(FG, x1, x2);
  const cplx rhs = eval_functional(F, x1, x2) * eval_functional(G, x1, x2);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
}

TEST_CASE("class bound report") {
  SUBCASE("no drift gives unit constants and a modulus bound of one") {
    auto cfg = wiener_config(256);
    const auto F = build_fresnel(
        AtomicMeasure::single(cfg, cplx(2.0, 0.0), poly_element(cfg, {1.0, 1.0})),
        KernelOperator::identity(cfg), KernelOperator::scalar(cfg, 0.5));
    std::vector<LambdaPair> samples;
    samples.push_back(LambdaPair::boundary(1.0, -1.0));
    samples.push_back(LambdaPair::interior(cplx(0.5, 0.5), cplx(1.0, -2.0)));
    const auto rep = class_check(F, 0.5, samples);
    CHECK(rep.k_values[0] == doctest::Approx(1.0));
    CHECK(rep.weighted_sum == doctest::Approx(2.0));
    for (const auto& lambda : samples)
      CHECK(std::abs(psi(lambda, F.atoms()[0])) <= 1.0 + 1e-14);
    CHECK(rep.membership);
  }
  SUBCASE("drifted case keeps a strict margin at interior samples") {
    auto cfg = drift_config(256);
    const auto F = build_fresnel(
        AtomicMeasure::single(cfg, cplx(1.0, 0.0), poly_element(cfg, {0.7, 0.3})),
        KernelOperator::identity(cfg), KernelOperator::scalar(cfg, 2.0));
    std::vector<LambdaPair> samples;
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> re(0.3, 2.0), im(-1.0, 1.0);
    while (samples.size() < 50) {
      const LambdaPair lp = LambdaPair::interior(cplx(re(gen), im(gen)), cplx(re(gen), im(gen)));
      if (in_gamma_region(lp, 0.5)) samples.push_back(lp);
    }
    const auto rep = class_check(F, 0.5, samples);
    CHECK(rep.bound_holds);
    CHECK(rep.min_bound_margin > 0.0);
    CHECK(rep.gamma_margin > 0.0);
  }
  SUBCASE("samples outside the region are rejected") {
    auto cfg = wiener_config(128);
    const auto F = PhaseFunctional::constant(cfg, 1.0);
    CHECK_THROWS_AS(class_check(F, 2.0, {LambdaPair::boundary(1.0, 3.0)}), std::domain_error);
  }
}
