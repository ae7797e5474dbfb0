#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hyperfa {

/// Caller-owned random stream. Every sampler takes one by reference; nothing
/// in the library owns global random state.
using RandomStream = std::mt19937_64;

/// Derives an independent stream from a run seed, a named purpose
/// ("init", "starts", "holdout", "simulate", ...) and an index, so that
/// e.g. start 7 of a fit sees the same draws regardless of thread count.
RandomStream make_stream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

/// Uniform on the open interval (0, 1).
double uniform_open(RandomStream& rng);

double standard_normal(RandomStream& rng);

}  // namespace hyperfa
