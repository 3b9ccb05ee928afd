#include <stdexcept>

#include "adsbauth/philox.hpp"
#include "adsbauth/sha256.hpp"
#include "kernels_impl.hpp"

namespace adsbauth::simd::detail {

void crc24_syndromes_scalar(std::span<const codec::FrameBits> frames, std::span<std::uint32_t> out) {
    if (out.size() < frames.size()) throw std::length_error("syndrome output too small");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const auto& f = frames[i];
        std::uint32_t crc = 0;
        for (std::size_t j = 0; j < codec::kPayloadBytes; ++j) {
            crc = ((crc << 8) & 0xFFFFFF) ^ kCrc24Table.entries[((crc >> 16) ^ f[j]) & 0xFF];
        }
        const std::uint32_t parity = (std::uint32_t{f[11]} << 16) | (std::uint32_t{f[12]} << 8) | f[13];
        out[i] = crc ^ parity;
    }
}

void derive50_scalar(std::span<const std::uint64_t> keys, std::uint8_t domain, std::span<std::uint64_t> out) {
    if (out.size() < keys.size()) throw std::length_error("derive50 output too small");
    // bytes7(key) || domain fits one padded block: 8 message bytes, 0x80, zeros, bit length 64.
    std::array<std::uint8_t, crypto::kSha256BlockBytes> block{};
    block[8] = 0x80;
    block[63] = 64;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const std::uint64_t packed = keys[i] << 14;
        for (int b = 0; b < 7; ++b) block[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(packed >> (56 - 8 * b));
        block[7] = domain;
        crypto::Sha256State state = crypto::kSha256Init;
        crypto::sha256_compress(state, block);
        out[i] = ((std::uint64_t{state[0]} << 32) | state[1]) >> 14;
    }
}

std::uint64_t count_collisions_scalar(const CollisionBatch& batch, std::uint64_t first_trial, std::uint64_t trials) {
    const PhiloxKey key = philox_key(batch.seed);
    std::uint64_t hits = 0;
    for (std::uint64_t t = first_trial; t < first_trial + trials; ++t) {
        const PhiloxCounter w =
            philox4x32_10({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32), 0, 0}, key);
        const double a1 = uniform_open01(w[0]);
        const double a12 = a1 * uniform_open01(w[1]);
        const double b1 = uniform_open01(w[2]);
        const double b12 = b1 * uniform_open01(w[3]);
        // Arrivals so far exceed k while the running product stays above exp(-lambda).
        const bool a_one = a1 > batch.threshold_a;
        const bool a_two = a12 > batch.threshold_a;
        const bool b_one = b1 > batch.threshold_b;
        const bool b_two = b12 > batch.threshold_b;
        hits += (a_two || b_two || (a_one && b_one)) ? 1 : 0;
    }
    return hits;
}

const KernelTable kScalarKernels{Isa::Scalar, crc24_syndromes_scalar, derive50_scalar, count_collisions_scalar};

}  // namespace adsbauth::simd::detail
