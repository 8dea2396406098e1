#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace sri::detail {

// Unbiased [0, n) draw via rejection. mt19937_64 output is standardized, so
// this stays reproducible across standard libraries, which
// std::uniform_int_distribution does not promise.
inline std::uint64_t bounded_random(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t accept = max - max % n;
    std::uint64_t x = rng();
    while (x >= accept) x = rng();
    return x % n;
}

// Fisher-Yates over [first, last) driven by bounded_random, for the same
// reproducibility reason std::shuffle cannot give.
template <typename It>
inline void shuffle(It first, It last, std::mt19937_64& rng) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i)
        std::swap(first[i - 1], first[bounded_random(rng, i)]);
}

}  // namespace sri::detail
