#pragma once

#include <cstdint>

namespace xva::rng {

// splitmix64 finalizer; statistically strong mixing of a 64-bit counter.
std::uint64_t splitmix64(std::uint64_t x);

// Counter-based draws: a pure function of (seed, path, step, channel).
// There is no generator state, so path-parallel generation is
// order-independent and any single draw can be replayed exactly.
double uniform(std::uint64_t seed, std::uint64_t path, std::uint64_t step, std::uint64_t channel);
double normal(std::uint64_t seed, std::uint64_t path, std::uint64_t step, std::uint64_t channel);

// Inverse standard-normal CDF (Acklam rational approximation plus one
// Halley refinement; absolute error below 1e-13 on (0,1)).
double inverse_normal_cdf(double u);

// Standard normal CDF via erfc.
double normal_cdf(double x);

} // namespace xva::rng
