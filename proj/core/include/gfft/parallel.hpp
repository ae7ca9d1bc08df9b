#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gfft {

/// Worker count used by batch loops. Reads GFFT_THREADS once per call;
/// falls back to the hardware concurrency, capped at 16.
std::size_t worker_count();

/// Runs fn(begin, end) on disjoint index ranges covering [0, n).
/// Results must be written to per-index slots; the split is deterministic
/// but the scheduling is not, so fn must not reduce across ranges itself.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

/// Fixed-order pairwise summation. Independent of worker count.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

}  // namespace gfft
