#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gfft/cm_space.hpp"
#include "gfft/time_functions.hpp"

namespace gfft {

/// Stream handle for reproducible sampling. Identical (seed, stream_id)
/// reproduce identical paths bit-for-bit; randomness is keyed by
/// (seed, stream_id, path index), never by execution order.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// Counter-keyed uniform/normal generator (splitmix64 core, Box-Muller
/// normals). Self-contained so draws do not depend on the standard library's
/// distribution internals.
class KeyedRng {
 public:
  KeyedRng(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index);
  std::uint64_t next_u64();
  double next_uniform();  // (0, 1]
  double next_normal();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// One sampled path at the grid nodes, x(t_0) = 0.
struct PathSample {
  ConfigPtr cfg;
  std::vector<double> values;

  static PathSample zeros(ConfigPtr cfg);
  double at(int node) const { return values[node]; }
  PathSample scaled(double factor) const;
};

/// Fills values[0..N] with one path of the process: independent increments
///   x(t_{j+1}) - x(t_j) ~ Normal(a(t_{j+1})-a(t_j), b(t_{j+1})-b(t_j)).
/// With negate=true the normal draws are negated (antithetic partner).
void sample_path_values(const SpaceConfig& cfg, RngStream rng, std::uint64_t index,
                        std::span<double> values, bool negate = false);

/// count independent paths; throws if b is not strictly increasing on the grid.
std::vector<PathSample> sample_paths(ConfigPtr cfg, std::size_t count, RngStream rng);

/// Paley-Wiener-Zygmund pairing realized as the left-endpoint Stieltjes sum
///   sum_j z(t_j) (x(t_{j+1}) - x(t_j))
/// over the cells below the density's support cutoff.
double pwz(const CMElement& w, const PathSample& x);
double pwz(const CMElement& w, std::span<const double> path_values);

struct PwzMomentReport {
  std::size_t count = 0;
  double mean_mc = 0, mean_target = 0, mean_stderr = 0, mean_z = 0;
  double var_mc = 0, var_target = 0, var_stderr = 0, var_z = 0;
  double cross_mc = 0, cross_target = 0, cross_stderr = 0, cross_z = 0;
};

/// Monte-Carlo moments of the pairings (w,x)~ and (u,x)~ against the closed
/// forms: mean (w,a), variance ||w||^2, raw cross moment
/// int z_w z_u db + int z_w da * int z_u da. Variance stderr uses the
/// Gaussian approximation var*sqrt(2/(n-1)).
PwzMomentReport pwz_moments(const CMElement& w, const CMElement& u, ConfigPtr cfg,
                            std::size_t count, RngStream rng);

}  // namespace gfft
