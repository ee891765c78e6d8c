#pragma once

#include <cstdint>
#include <random>

namespace speclab {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer; bijective avalanche on 64 bits.
constexpr std::uint64_t avalanche64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// Decorrelated per-stream seed. Stream 0 with index shift keeps the master
// seed itself usable as a stream too.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
    return avalanche64(master_seed ^ (kGoldenGamma * (stream_index + 1)));
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

// Uniform on [0,1). One engine call.
inline double uniform01(Rng& rng) {
    return (rng() >> 11) * 0x1.0p-53;
}

// Uniform on (0,1]; safe under negative powers.
inline double uniform01_open_left(Rng& rng) {
    return ((rng() >> 11) + 1) * 0x1.0p-53;
}

inline double random_sign(Rng& rng) {
    return (rng() >> 63) ? 1.0 : -1.0;
}

}  // namespace speclab
