#pragma once

#include <cstdint>

namespace skewdyn {

// splitmix64: the usual 64-bit finalizer. Used to derive independent,
// platform-stable random streams from (seed, position) keys so that parallel
// and serial runs of the stochastic samplers agree bit for bit.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t a) {
    return splitmix64(seed ^ splitmix64(a));
}

inline std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(hash_mix(seed, a) ^ splitmix64(b + 0x51ed2701ab2c0b1fULL));
}

inline std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
    return splitmix64(hash_mix(seed, a, b) ^ splitmix64(c + 0x63d2fa1f3c0e9d47ULL));
}

// Uniform draw in [0, 1) from a hashed key.
inline double u01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace skewdyn
