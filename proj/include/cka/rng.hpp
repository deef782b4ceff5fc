#pragma once
#include <cstdint>

namespace cka {

// Stateless counter-based generator: hashes (seed, counter) to a uniform
// 64-bit word. Every randomized path in the library derives its draws from
// an explicit (seed, index) pair so results are reproducible regardless of
// evaluation order or thread count.
inline std::uint64_t hash_counter(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Map a 64-bit word to [0, 1) with 53-bit resolution.
inline double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace cka
