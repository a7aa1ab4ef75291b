#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace srdcnn {

// Deterministic helpers on top of mt19937_64. std::uniform_real_distribution
// and std::shuffle are implementation-defined, so seeded results would not be
// portable across standard libraries; these are, bit for bit.

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(gen);
}

// Unbiased integer in [0, bound) via Lemire's multiply-shift with rejection.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
    while (true) {
        const std::uint64_t x = gen();
        const __uint128_t m = static_cast<__uint128_t>(x) * bound;
        const std::uint64_t lo = static_cast<std::uint64_t>(m);
        if (lo >= bound || lo >= static_cast<std::uint64_t>(-bound) % bound) {
            return static_cast<std::uint64_t>(m >> 64);
        }
    }
}

// In-place Fisher-Yates.
template <typename T>
void shuffle_indices(std::vector<T>& v, std::mt19937_64& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(gen, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace srdcnn
