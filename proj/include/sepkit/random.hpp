#pragma once

#include <cstdint>
#include <random>

namespace sepkit {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent child seeds from a
// master seed and a counter so that every task owns its own stream.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  return mix_seed(mix_seed(master) ^ (counter * 0xD1B54A32D192ED03ULL + 1));
}

}  // namespace sepkit
