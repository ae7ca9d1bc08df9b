#include <benchmark/benchmark.h>

#include <cmath>

#include "gfft/config.hpp"
#include "gfft/verify.hpp"

namespace {

using namespace gfft;

ConfigPtr bench_config(int n) {
  return SpaceConfig::create({ScalarFunction::linear(1.0)},
                             {ScalarFunction::polynomial({0.0, 0.5, 0.5}), 1.0}, TimeGrid(n, 1.0));
}

void BM_Quadrature(benchmark::State& state) {
  auto cfg = bench_config(static_cast<int>(state.range(0)));
  std::vector<double> f(cfg->n() + 1);
  for (int i = 0; i <= cfg->n(); ++i) f[i] = std::sin(7.0 * cfg->nodes()[i]);
  for (auto _ : state) benchmark::DoNotOptimize(quadrature(std::span<const double>(f), *cfg));
}
BENCHMARK(BM_Quadrature)->Arg(256)->Arg(1024)->Arg(4096);

void BM_InnerProduct(benchmark::State& state) {
  auto cfg = bench_config(static_cast<int>(state.range(0)));
  const auto u = CMElement::from_density(cfg, [](double t) { return 1.0 + 0.3 * t; });
  const auto v = CMElement::from_density(cfg, [](double t) { return std::cos(2.0 * t); });
  for (auto _ : state) benchmark::DoNotOptimize(inner_cm(u, v));
}
BENCHMARK(BM_InnerProduct)->Arg(1024);

void BM_SamplePath(benchmark::State& state) {
  auto cfg = bench_config(static_cast<int>(state.range(0)));
  std::vector<double> path(cfg->n() + 1);
  std::uint64_t idx = 0;
  for (auto _ : state) {
    sample_path_values(*cfg, {7, 0}, idx++, path);
    benchmark::DoNotOptimize(path.data());
  }
  state.SetItemsProcessed(state.iterations() * cfg->n());
}
BENCHMARK(BM_SamplePath)->Arg(1024);

void BM_Pwz(benchmark::State& state) {
  auto cfg = bench_config(1024);
  const auto w = CMElement::from_density(cfg, [](double t) { return 1.0 - 0.5 * t; });
  std::vector<double> path(cfg->n() + 1);
  sample_path_values(*cfg, {7, 0}, 0, path);
  for (auto _ : state) benchmark::DoNotOptimize(pwz(w, std::span<const double>(path)));
}
BENCHMARK(BM_Pwz);

void BM_BoundaryTransform(benchmark::State& state) {
  auto cfg = bench_config(1024);
  std::vector<PhaseAtom> atoms;
  for (int k = 0; k < static_cast<int>(state.range(0)); ++k) {
    atoms.emplace_back(cplx(0.5, -0.2),
                       CMElement::from_density(cfg, [k](double t) { return std::cos(k * t); }),
                       CMElement::from_density(cfg, [k](double t) { return std::sin(k * t); }));
  }
  const PhaseFunctional F(cfg, std::move(atoms));
  const LambdaPair q = LambdaPair::boundary(1.2, -1.7);
  for (auto _ : state) benchmark::DoNotOptimize(gfft_transform(F, q, 0.5));
}
BENCHMARK(BM_BoundaryTransform)->Arg(1)->Arg(8)->Arg(32);

void BM_McExpectation(benchmark::State& state) {
  auto cfg = bench_config(256);
  const auto w = CMElement::from_density(cfg, [](double t) { return 1.0 + t; });
  for (auto _ : state) {
    const auto est = mc_expectation(
        [&](const PathSample& x) { return std::exp(cplx(0.0, pwz(w, x))); }, cfg,
        static_cast<std::size_t>(state.range(0)), {11, 0});
    benchmark::DoNotOptimize(est.mean);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McExpectation)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_FiniteRankMoment(benchmark::State& state) {
  auto cfg = bench_config(512);
  const auto basis = cosine_basis(cfg, 16);
  const auto w = CMElement::from_density(cfg, [](double t) { return 0.8 + 0.4 * t; });
  const cplx lambda(0.9, -0.6);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        gn_normalized_moment(lambda, w, basis, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_FiniteRankMoment)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
