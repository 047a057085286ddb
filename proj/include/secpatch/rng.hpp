#pragma once

#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

namespace secpatch {

// Deterministic 64-bit linear congruential generator with Knuth's MMIX
// constants: state' = state * 6364136223846793005 + 1442695040888963407
// (mod 2^64). Every random choice in the library flows through this
// generator so results reproduce across platforms and implementations.
class Lcg64 {
public:
    explicit Lcg64(std::uint64_t seed) : state_(seed) {}

    // Advances the state and returns it.
    std::uint64_t next() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    // Uniform integer in [0, bound). Rejection-sampled: draws below
    // 2^64 mod bound are discarded, the survivor is reduced mod bound.
    std::uint64_t next_below(std::uint64_t bound) {
        assert(bound > 0);
        const std::uint64_t reject = (0ULL - bound) % bound;
        std::uint64_t x = next();
        while (x < reject)
            x = next();
        return x % bound;
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Uniform sample of k items without replacement via a partial Fisher-Yates
// pass: for i in [0, k), swap items[i] with items[i + next_below(n - i)].
// Returns (sample in draw order, remainder in post-shuffle order).
template <typename T>
std::pair<std::vector<T>, std::vector<T>>
sample_without_replacement(std::vector<T> items, std::size_t k, Lcg64& rng) {
    if (k > items.size())
        k = items.size();
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next_below(items.size() - i));
        std::swap(items[i], items[j]);
    }
    auto cut = items.begin() + static_cast<std::ptrdiff_t>(k);
    std::vector<T> sample(items.begin(), cut);
    items.erase(items.begin(), cut);
    return {std::move(sample), std::move(items)};
}

// Full Fisher-Yates shuffle with the same index rule as above.
template <typename T>
void shuffle(std::vector<T>& items, Lcg64& rng) {
    for (std::size_t i = 0; i + 1 < items.size(); ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next_below(items.size() - i));
        std::swap(items[i], items[j]);
    }
}

}  // namespace secpatch
