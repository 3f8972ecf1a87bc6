// Pinned randomness: mt19937_64 streams plus a fixed 64-bit mixing function
// for deriving per-batch seeds. Both are fully specified, so runs reproduce
// bit-for-bit across platforms and worker counts.
#pragma once

#include <cstdint>
#include <random>

namespace tourcount {

// PRNG identifier recorded in run manifests.
inline constexpr const char* kRngAlgorithm = "std::mt19937_64";

// Finalizer of the splitmix64 generator: a fixed, well-mixed 64-bit bijection.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for the stream owned by (start class, replication). Chained mixing
// keeps distinct (base, class, replication) triples on distinct streams; the
// +1 offsets keep index 0 from vanishing under multiplication.
constexpr std::uint64_t derive_stream_seed(std::uint64_t base_seed, int class_index,
                                           int replication_index) {
  std::uint64_t s = mix64(base_seed);
  s = mix64(s ^ (0x517CC1B727220A95ULL * (static_cast<std::uint64_t>(class_index) + 1)));
  s = mix64(s ^ (0x2545F4914F6CDD1DULL * (static_cast<std::uint64_t>(replication_index) + 1)));
  return s;
}

// Uniform double in [0, 1) from the top 53 bits of one draw. Used instead of
// std::uniform_real_distribution, whose output is not pinned by the standard.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace tourcount
