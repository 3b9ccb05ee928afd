#pragma once

// Key chain and MAC primitives.
//
// Chain keys are 50 bits, packed MSB-first into 7 bytes with the low 6 bits of
// the last byte zero whenever they are hashed. Two domain-separated one-way
// functions derive from SHA-256:
//
//   F(k) = trunc50(SHA-256(bytes7(k) || 0x00))   chain step, K_{i-1} = F(K_i)
//   G(k) = trunc50(SHA-256(bytes7(k) || 0x01))   MAC key,   J_i = G(K_i)
//
// MACs are HMAC-SHA-256 truncated to the leftmost 50 bits.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "adsbauth/bits.hpp"
#include "adsbauth/sha256.hpp"

namespace adsbauth::crypto {

inline constexpr std::uint64_t kDefaultMaxChainDepth = 64;

/// A chain key together with its position; index 0 is the committed anchor.
struct ChainKey {
    Key50 bits;
    std::uint64_t index = 0;

    friend bool operator==(const ChainKey&, const ChainKey&) = default;
};

/// Key for MAC computation. Only G can produce one, so a chain key can never
/// be used as a MAC key by accident.
class MacKey {
public:
    Key50 bits() const { return bits_; }

    friend bool operator==(const MacKey&, const MacKey&) = default;

private:
    explicit MacKey(Key50 bits) : bits_(bits) {}
    Key50 bits_;

    friend MacKey G(Key50 key);
    friend std::vector<MacKey> G_batch(std::span<const Key50> keys);
};

std::array<std::uint8_t, 7> key_bytes(Key50 key);
std::array<std::uint8_t, 7> message_bytes(Message51 message);

/// Leftmost 50 bits of a digest.
std::uint64_t truncate50(const Digest& digest);

Key50 F(Key50 key);
MacKey G(Key50 key);

/// F applied `times` times.
Key50 apply_F(Key50 key, std::uint64_t times);

/// Batched F^times over many keys on the active SIMD kernel.
std::vector<Key50> apply_F_batch(std::span<const Key50> keys, std::uint64_t times);
std::vector<MacKey> G_batch(std::span<const Key50> keys);

class KeyChain {
public:
    /// K_n = trunc50(SHA-256(seed)), then K_{i-1} = F(K_i) down to K_0.
    /// Throws DegenerateChainError for n = 0.
    static KeyChain generate(const Seed& seed, std::uint64_t n);

    const Seed& seed() const { return seed_; }

    /// Number of keys, n + 1.
    std::size_t length() const { return keys_.size(); }
    std::uint64_t last_index() const { return keys_.size() - 1; }

    ChainKey at(std::uint64_t index) const;
    ChainKey anchor() const { return at(0); }
    std::span<const Key50> keys() const { return keys_; }

private:
    KeyChain(const Seed& seed, std::vector<Key50> keys) : seed_(seed), keys_(std::move(keys)) {}

    Seed seed_{};
    std::vector<Key50> keys_;
};

/// True iff F^v(candidate) == trusted.bits. Requires 1 <= v <= max_depth;
/// throws DepthExceededError above the bound.
bool verify_chain_link(Key50 candidate, const ChainKey& trusted, std::uint64_t v,
                       std::uint64_t max_depth = kDefaultMaxChainDepth);

/// Bulk form of verify_chain_link through the SIMD kernel.
std::vector<bool> verify_chain_links(std::span<const Key50> candidates, const ChainKey& trusted, std::uint64_t v,
                                     std::uint64_t max_depth = kDefaultMaxChainDepth);

/// HMAC-SHA-256 with a precomputed key schedule. The 7-byte key is zero-padded
/// to the 64-byte block, XORed with the inner (0x36) and outer (0x5c) pads, and
/// both padded blocks are absorbed once up front.
class HmacSha256 {
public:
    explicit HmacSha256(std::span<const std::uint8_t> key);
    explicit HmacSha256(const MacKey& key);

    Digest compute(std::span<const std::uint8_t> message) const;

private:
    Sha256State inner_{};
    Sha256State outer_{};
};

Digest hmac_sha256(const MacKey& key, std::span<const std::uint8_t> message);

Tag50 hmac50(const MacKey& key, std::span<const std::uint8_t> message);
Tag50 hmac50(const MacKey& key, Message51 message);
Tag50 hmac50(const HmacSha256& key, Message51 message);

/// Comparison whose running time does not depend on where the tags differ.
bool tags_equal(Tag50 a, Tag50 b);

}  // namespace adsbauth::crypto
