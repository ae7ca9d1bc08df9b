#include "gfft/path_sampler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gfft/parallel.hpp"

namespace gfft {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t s = seed;
  (void)splitmix64(s);
  s ^= 0xD1B54A32D192ED03ULL * (stream + 1);
  (void)splitmix64(s);
  s ^= 0xEB44ACCAB455D165ULL * (index + 1);
  (void)splitmix64(s);
  return s;
}

}  // namespace

KeyedRng::KeyedRng(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index)
    : state_(mix_key(seed, stream_id, index)) {}

std::uint64_t KeyedRng::next_u64() { return splitmix64(state_); }

double KeyedRng::next_uniform() {
  // 53-bit mantissa in (0, 1]
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double KeyedRng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

PathSample PathSample::zeros(ConfigPtr cfg) {
  PathSample p;
  p.values.assign(cfg->n() + 1, 0.0);
  p.cfg = std::move(cfg);
  return p;
}

PathSample PathSample::scaled(double factor) const {
  PathSample p;
  p.cfg = cfg;
  p.values.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) p.values[i] = factor * values[i];
  return p;
}

void sample_path_values(const SpaceConfig& cfg, RngStream rng, std::uint64_t index,
                        std::span<double> values, bool negate) {
  const int n = cfg.n();
  if (static_cast<int>(values.size()) != n + 1)
    throw std::invalid_argument("sample_path_values: size mismatch with grid");
  KeyedRng gen(rng.seed, rng.stream_id, index);
  values[0] = 0.0;
  const double sign = negate ? -1.0 : 1.0;
  for (int j = 0; j < n; ++j) {
    const double db = cfg.db_cells()[j];
    if (!(db > 0.0))
      throw std::domain_error("sample_path_values: b not strictly increasing at cell " +
                              std::to_string(j));
    values[j + 1] = values[j] + cfg.da_cells()[j] + sign * std::sqrt(db) * gen.next_normal();
  }
}

std::vector<PathSample> sample_paths(ConfigPtr cfg, std::size_t count, RngStream rng) {
  if (count < 1) throw std::invalid_argument("sample_paths: count must be >= 1");
  std::vector<PathSample> out(count);
  const SpaceConfig& c = *cfg;
  for (std::size_t i = 0; i < count; ++i) {
    out[i].cfg = cfg;
    out[i].values.resize(c.n() + 1);
  }
  parallel_for(count, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) sample_path_values(c, rng, i, out[i].values);
  });
  return out;
}

double pwz(const CMElement& w, std::span<const double> path_values) {
  const int n = w.config()->n();
  if (static_cast<int>(path_values.size()) != n + 1)
    throw std::invalid_argument("pwz: path size mismatch with grid");
  double acc = 0.0;
  const int cells = w.cutoff();
  for (int j = 0; j < cells; ++j) acc += w.nodal()[j] * (path_values[j + 1] - path_values[j]);
  return acc;
}

double pwz(const CMElement& w, const PathSample& x) {
  if (w.config().get() != x.cfg.get()) throw std::invalid_argument("pwz: config mismatch");
  return pwz(w, std::span<const double>(x.values));
}

PwzMomentReport pwz_moments(const CMElement& w, const CMElement& u, ConfigPtr cfg,
                            std::size_t count, RngStream rng) {
  if (count < 2) throw std::invalid_argument("pwz_moments: count must be >= 2");
  const SpaceConfig& c = *cfg;
  std::vector<double> sw(count), su(count);
  parallel_for(count, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> path(c.n() + 1);
    for (std::size_t i = lo; i < hi; ++i) {
      sample_path_values(c, rng, i, path);
      sw[i] = pwz(w, path);
      su[i] = pwz(u, path);
    }
  });

  PwzMomentReport rep;
  rep.count = count;
  const double n = static_cast<double>(count);
  const double mean_w = pairwise_sum(std::span<const double>(sw)) / n;

  std::vector<double> dev2(count), cross(count);
  for (std::size_t i = 0; i < count; ++i) {
    dev2[i] = (sw[i] - mean_w) * (sw[i] - mean_w);
    cross[i] = sw[i] * su[i];
  }
  const double var_w = pairwise_sum(std::span<const double>(dev2)) / (n - 1.0);
  const double cross_mean = pairwise_sum(std::span<const double>(cross)) / n;
  double cross_var = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    cross_var += (cross[i] - cross_mean) * (cross[i] - cross_mean);
  cross_var /= (n - 1.0);

  rep.mean_mc = mean_w;
  rep.mean_target = inner_drift(w);
  rep.mean_stderr = std::sqrt(var_w / n);
  rep.mean_z = rep.mean_stderr > 0 ? (rep.mean_mc - rep.mean_target) / rep.mean_stderr : 0.0;

  rep.var_mc = var_w;
  rep.var_target = inner_cm(w, w);
  rep.var_stderr = var_w * std::sqrt(2.0 / (n - 1.0));
  rep.var_z = rep.var_stderr > 0 ? (rep.var_mc - rep.var_target) / rep.var_stderr : 0.0;

  rep.cross_mc = cross_mean;
  rep.cross_target = inner_cm(w, u) + inner_drift(w) * inner_drift(u);
  rep.cross_stderr = std::sqrt(cross_var / n);
  rep.cross_z = rep.cross_stderr > 0 ? (rep.cross_mc - rep.cross_target) / rep.cross_stderr : 0.0;
  return rep;
}

}  // namespace gfft
