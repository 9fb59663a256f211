#pragma once

#include <cstdint>
#include <random>

namespace rdmusic {

/// SplitMix64 finalizer. Used as a counter-based mixer for deriving streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Stream : std::uint64_t { scenario = 0, frame = 1, noise = 2 };

/// Seed for trial `trial_index`: splitmix64(seed ^ trial_index).
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_index) {
  return splitmix64(seed ^ trial_index);
}

/// Independent sub-stream of a trial: splitmix64(trial_seed + stream + 1).
constexpr std::uint64_t stream_seed(std::uint64_t trial, Stream stream) {
  return splitmix64(trial + static_cast<std::uint64_t>(stream) + 1);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace rdmusic
