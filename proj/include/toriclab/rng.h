#pragma once

#include <cstdint>
#include <random>

namespace toriclab {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Independent generator for (seed, stream); used per chunk so results do not depend
// on how chunks are spread over workers.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

// Uniform on [0, 1) with 53 random bits; portable across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, bound) by rejection.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

}  // namespace toriclab
