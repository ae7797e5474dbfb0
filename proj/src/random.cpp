#include "hyperfa/random.hpp"

#include <cmath>

namespace hyperfa {
namespace {

// FNV-1a; only needs to be stable across platforms, not cryptographic.
std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RandomStream make_stream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  const std::uint64_t h = hash_name(name);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return RandomStream(seq);
}

double uniform_open(RandomStream& rng) {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(RandomStream& rng) {
  // Box-Muller on our own uniforms keeps draws identical across standard
  // library implementations.
  const double u1 = uniform_open(rng);
  const double u2 = uniform_open(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace hyperfa
