#pragma once

// Deterministic per-stream random engines. Every independent unit of work
// (tomography setting, bootstrap resample, sweep cell) owns an engine derived
// from (seed, stream index), so results are bit-identical regardless of how
// the work is scheduled across threads.

#include <cstdint>
#include <random>

namespace qrealism {

namespace detail {

// splitmix64 finalizer; good avalanche, cheap, and stable across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return detail::mix64(detail::mix64(seed) ^ detail::mix64(stream + 0x632be59bd9b4e019ull));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(derive_seed(seed, stream));
}

}  // namespace qrealism
