#pragma once

#include <cstdint>

namespace stripent {

// splitmix64 finalizer; the fixed generator documented for reproducibility.
// Every randomized experiment derives its variates as hash(seed, stream, i),
// so identical (config, seed) gives identical output on any platform.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_u64(uint64_t seed, uint64_t stream, uint64_t i) {
    return mix64(seed ^ mix64(stream ^ mix64(i)));
}

inline double uniform01(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace stripent
