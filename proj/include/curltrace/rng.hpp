#pragma once

#include <cstdint>

namespace curltrace {

/// Counter-based deterministic RNG (splitmix64 core). No wall-clock entropy
/// anywhere in the library; every stream is derived from explicit seeds so
/// results are reproducible and independent of evaluation order.
struct Rng {
    std::uint64_t state = 0;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

/// Derive a child seed from (seed, tag); used to give each call site and each
/// work item its own independent stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Compile-time FNV-1a of a short string, for stable call-site tags.
constexpr std::uint64_t tag(const char* s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    while (*s != '\0') {
        h ^= static_cast<std::uint64_t>(*s++);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace curltrace
