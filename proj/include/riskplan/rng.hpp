#pragma once

#include <cstdint>
#include <random>

namespace riskplan {

// SplitMix64 step; used to derive independent substream seeds from a master seed.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream_id) {
  uint64_t s = master;
  uint64_t a = splitmix64(s);
  s = a ^ (stream_id * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(s);
}

using Rng = std::mt19937_64;

// Chunked streams: results are independent of how work is split across threads
// as long as chunk indices are stable.
inline Rng make_stream(uint64_t master, uint64_t stream_id) {
  return Rng(derive_seed(master, stream_id));
}

}  // namespace riskplan
