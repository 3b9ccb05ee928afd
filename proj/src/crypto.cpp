#include "adsbauth/crypto.hpp"

#include <algorithm>
#include <string>

#include "adsbauth/simd/kernels.hpp"

namespace adsbauth::crypto {

namespace {

std::array<std::uint8_t, 7> pack7(std::uint64_t left_aligned) {
    std::array<std::uint8_t, 7> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint8_t>(left_aligned >> (56 - 8 * i));
    return out;
}

std::uint64_t derive(Key50 key, std::uint8_t domain) {
    std::array<std::uint8_t, 8> input{};
    const auto kb = key_bytes(key);
    std::copy(kb.begin(), kb.end(), input.begin());
    input[7] = domain;
    return truncate50(Sha256::digest(input));
}

/// F^times over raw words, in place.
void walk_F(std::span<std::uint64_t> words, std::uint64_t times) {
    const auto& kernel = simd::active_kernels();
    for (std::uint64_t t = 0; t < times; ++t) kernel.derive50(words, simd::kDomainF, words);
}

}  // namespace

std::array<std::uint8_t, 7> key_bytes(Key50 key) { return pack7(key.value() << 14); }

std::array<std::uint8_t, 7> message_bytes(Message51 message) { return pack7(message.value() << 13); }

std::uint64_t truncate50(const Digest& digest) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | digest[i];
    return v >> 14;
}

Key50 F(Key50 key) { return Key50(derive(key, simd::kDomainF)); }

MacKey G(Key50 key) { return MacKey(Key50(derive(key, simd::kDomainG))); }

Key50 apply_F(Key50 key, std::uint64_t times) {
    for (std::uint64_t i = 0; i < times; ++i) key = F(key);
    return key;
}

std::vector<Key50> apply_F_batch(std::span<const Key50> keys, std::uint64_t times) {
    std::vector<std::uint64_t> words(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) words[i] = keys[i].value();
    walk_F(words, times);
    std::vector<Key50> out;
    out.reserve(words.size());
    for (std::uint64_t w : words) out.emplace_back(w);
    return out;
}

std::vector<MacKey> G_batch(std::span<const Key50> keys) {
    std::vector<std::uint64_t> words(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) words[i] = keys[i].value();
    simd::active_kernels().derive50(words, simd::kDomainG, words);
    std::vector<MacKey> out;
    out.reserve(words.size());
    for (std::uint64_t w : words) out.push_back(MacKey(Key50(w)));
    return out;
}

KeyChain KeyChain::generate(const Seed& seed, std::uint64_t n) {
    if (n == 0) throw DegenerateChainError("a key chain needs at least one key beyond the anchor");
    std::vector<Key50> keys(n + 1);
    keys[n] = Key50(truncate50(Sha256::digest(seed)));
    for (std::uint64_t i = n; i > 0; --i) keys[i - 1] = F(keys[i]);
    return KeyChain(seed, std::move(keys));
}

ChainKey KeyChain::at(std::uint64_t index) const {
    if (index >= keys_.size()) {
        throw ChainExhaustedError("chain has no key at index " + std::to_string(index));
    }
    return {keys_[index], index};
}

bool verify_chain_link(Key50 candidate, const ChainKey& trusted, std::uint64_t v, std::uint64_t max_depth) {
    if (v == 0) throw DepthExceededError("chain link distance must be at least 1");
    if (v > max_depth) throw DepthExceededError("chain link distance exceeds the configured maximum");
    return apply_F(candidate, v) == trusted.bits;
}

std::vector<bool> verify_chain_links(std::span<const Key50> candidates, const ChainKey& trusted, std::uint64_t v,
                                     std::uint64_t max_depth) {
    if (v == 0) throw DepthExceededError("chain link distance must be at least 1");
    if (v > max_depth) throw DepthExceededError("chain link distance exceeds the configured maximum");
    std::vector<std::uint64_t> words(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) words[i] = candidates[i].value();
    walk_F(words, v);
    std::vector<bool> out(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) out[i] = words[i] == trusted.bits.value();
    return out;
}

}  // namespace adsbauth::crypto
