#pragma once

// Data-parallel inner loops with a portable scalar reference and ISA-specific
// variants. Every variant of a kernel produces bit-identical output; the
// dispatcher picks the widest one the running CPU supports.

#include <cstdint>
#include <span>
#include <string_view>

#include "adsbauth/frame_codec.hpp"

namespace adsbauth::simd {

enum class Isa : std::uint8_t { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Domain-separation suffixes of the two one-way functions.
inline constexpr std::uint8_t kDomainF = 0x00;
inline constexpr std::uint8_t kDomainG = 0x01;

/// One Monte Carlo batch of the capped-Poisson collision test. Each trial t
/// draws four uniforms from Philox4x32-10 (counter = t, key = seed) and counts
/// arrivals of each class up to two by multiplying uniforms until the product
/// drops to exp(-lambda).
struct CollisionBatch {
    std::uint64_t seed = 0;
    double threshold_a = 1.0;  ///< exp(-lambda_a)
    double threshold_b = 1.0;  ///< exp(-lambda_b); 1.0 silences the class
};

struct KernelTable {
    Isa isa;

    /// out[i] = codeword remainder of frames[i].
    void (*crc24_syndromes)(std::span<const codec::FrameBits> frames, std::span<std::uint32_t> out);

    /// out[i] = leftmost 50 bits of SHA-256(bytes7(keys[i]) || domain).
    void (*derive50)(std::span<const std::uint64_t> keys, std::uint8_t domain, std::span<std::uint64_t> out);

    /// Number of colliding trials among [first_trial, first_trial + trials).
    std::uint64_t (*count_collisions)(const CollisionBatch& batch, std::uint64_t first_trial, std::uint64_t trials);
};

bool isa_supported(Isa isa);

/// Throws ConfigError when the ISA was not compiled in or the CPU lacks it.
const KernelTable& kernels_for(Isa isa);

/// Widest supported table; ADSBAUTH_ISA=scalar in the environment forces the
/// reference path.
const KernelTable& active_kernels();

}  // namespace adsbauth::simd
