#pragma once

#include <array>
#include <cstdint>

#include "adsbauth/simd/kernels.hpp"

namespace adsbauth::simd::detail {

/// Byte-at-a-time CRC-24 table for the Mode-S generator.
struct Crc24Table {
    std::array<std::uint32_t, 256> entries{};

    constexpr Crc24Table() {
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t r = i << 16;
            for (int b = 0; b < 8; ++b) {
                r <<= 1;
                if (r & 0x1000000u) r ^= 0x1000000u | codec::kGenerator;
            }
            entries[i] = r & 0xFFFFFF;
        }
    }
};

inline constexpr Crc24Table kCrc24Table{};

extern const KernelTable kScalarKernels;
#if defined(ADSBAUTH_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif

// Scalar bodies, also used for the tails the wide kernels leave over.
void crc24_syndromes_scalar(std::span<const codec::FrameBits> frames, std::span<std::uint32_t> out);
void derive50_scalar(std::span<const std::uint64_t> keys, std::uint8_t domain, std::span<std::uint64_t> out);
std::uint64_t count_collisions_scalar(const CollisionBatch& batch, std::uint64_t first_trial, std::uint64_t trials);

}  // namespace adsbauth::simd::detail
