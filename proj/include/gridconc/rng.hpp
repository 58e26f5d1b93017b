#pragma once

#include <cstdint>
#include <random>

namespace gridconc {

using Rng = std::mt19937_64;

/// Derives an independent child seed from a master seed and two stream
/// indices (e.g. sweep index, sample index) with the splitmix64 finalizer.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Uniform variate on [0, 1) built from the top 53 bits of one draw, so the
/// stream is identical on every standard library.
double uniform01(Rng& rng);

double standard_normal(Rng& rng);

}  // namespace gridconc
