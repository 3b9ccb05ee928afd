#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., Random123). A draw is
// a pure function of (counter, key), so trial t of a seeded experiment can be
// regenerated in any order and on any number of threads.

#include <array>
#include <cstdint>

namespace adsbauth {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
}

constexpr PhiloxKey philox_key(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Maps a 32-bit draw to the open interval (0, 1); exact in double precision.
constexpr double uniform_open01(std::uint32_t word) { return (static_cast<double>(word) + 0.5) * 0x1p-32; }

/// Sequential stream over successive Philox blocks, for code that just needs
/// "the next random number" (simulation harnesses, adversary choices).
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream) : key_(philox_key(seed)), stream_(stream) {}

    std::uint32_t next_u32() {
        if (used_ == 4) {
            block_ = philox4x32_10({static_cast<std::uint32_t>(block_index_), static_cast<std::uint32_t>(block_index_ >> 32),
                                    static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                                   key_);
            ++block_index_;
            used_ = 0;
        }
        return block_[used_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % bound;
    }

private:
    PhiloxKey key_;
    std::uint64_t stream_;
    std::uint64_t block_index_ = 0;
    PhiloxCounter block_{};
    int used_ = 4;
};

}  // namespace adsbauth
