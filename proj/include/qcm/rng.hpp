#pragma once

#include <cstdint>
#include <string_view>

namespace qcm::rng {

// splitmix64 step (Steele, Lea, Flood 2014). Used both as a stream derivation
// mix and as the per-shot generator; period/quality are ample for the
// few-thousand draws any single stream performs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic key combination: feeds `key` into the state and advances.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t key) {
  std::uint64_t s = seed ^ (key * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(s);
}

// FNV-1a 64-bit hash; stable tag/basis identifiers and file provenance hashes.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based per-shot stream: all randomness of one shot derives from
// (master seed, stream id, shot index) so shot generation order is free.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter)
      : state_(mix(mix(seed, stream_id), counter)) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace qcm::rng
