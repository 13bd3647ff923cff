#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace tfs {

// mt19937_64 output is fixed by the standard, unlike the std distributions,
// so everything seeded goes through these helpers to stay reproducible
// across standard libraries.
using Rng = std::mt19937_64;

// Uniform integer in [0, bound). Rejection sampling removes modulo bias.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = Rng::max() - (Rng::max() % bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

// Fisher-Yates.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace tfs
