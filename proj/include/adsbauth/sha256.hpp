#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace adsbauth::crypto {

using Digest = std::array<std::uint8_t, 32>;
using Sha256State = std::array<std::uint32_t, 8>;

inline constexpr std::size_t kSha256BlockBytes = 64;

inline constexpr Sha256State kSha256Init = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                            0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

/// One SHA-256 compression of a 64-byte block into `state`.
void sha256_compress(Sha256State& state, std::span<const std::uint8_t, kSha256BlockBytes> block);

/// Streaming SHA-256. A hasher may also be resumed from a saved midstate,
/// which is how HMAC keys are precomputed.
class Sha256 {
public:
    Sha256() = default;

    /// Resumes after `blocks_done` full blocks have been absorbed into `state`.
    Sha256(const Sha256State& state, std::uint64_t blocks_done);

    Sha256& update(std::span<const std::uint8_t> data);
    Digest finish();

    static Digest digest(std::span<const std::uint8_t> data);

private:
    Sha256State state_ = kSha256Init;
    std::array<std::uint8_t, kSha256BlockBytes> buffer_{};
    std::size_t buffered_ = 0;
    std::uint64_t total_bytes_ = 0;
};

}  // namespace adsbauth::crypto
