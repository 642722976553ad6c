#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace crip {

// splitmix64 finalizer; used to mix seeds deterministically.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent sub-seed from (seed, stream). All stochastic steps
// in the library route through this so that a single top-level seed pins the
// whole run.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

// Fisher-Yates with an explicit index draw. std::shuffle leaves the result
// implementation-defined; this one is pinned by the mt19937_64 stream.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace crip
