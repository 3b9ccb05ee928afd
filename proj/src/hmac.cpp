#include <algorithm>

#include "adsbauth/crypto.hpp"

namespace adsbauth::crypto {

namespace {

constexpr std::uint8_t kInnerPad = 0x36;
constexpr std::uint8_t kOuterPad = 0x5c;

}  // namespace

HmacSha256::HmacSha256(std::span<const std::uint8_t> key) {
    std::array<std::uint8_t, kSha256BlockBytes> block{};
    if (key.size() > kSha256BlockBytes) {
        const Digest hashed = Sha256::digest(key);
        std::copy(hashed.begin(), hashed.end(), block.begin());
    } else {
        std::copy(key.begin(), key.end(), block.begin());
    }

    std::array<std::uint8_t, kSha256BlockBytes> padded{};
    std::transform(block.begin(), block.end(), padded.begin(), [](std::uint8_t b) { return b ^ kInnerPad; });
    inner_ = kSha256Init;
    sha256_compress(inner_, padded);
    std::transform(block.begin(), block.end(), padded.begin(), [](std::uint8_t b) { return b ^ kOuterPad; });
    outer_ = kSha256Init;
    sha256_compress(outer_, padded);
}

HmacSha256::HmacSha256(const MacKey& key) : HmacSha256(std::span<const std::uint8_t>(key_bytes(key.bits()))) {}

Digest HmacSha256::compute(std::span<const std::uint8_t> message) const {
    const Digest inner = Sha256(inner_, 1).update(message).finish();
    return Sha256(outer_, 1).update(inner).finish();
}

Digest hmac_sha256(const MacKey& key, std::span<const std::uint8_t> message) {
    return HmacSha256(key).compute(message);
}

Tag50 hmac50(const MacKey& key, std::span<const std::uint8_t> message) {
    return Tag50(truncate50(hmac_sha256(key, message)));
}

Tag50 hmac50(const MacKey& key, Message51 message) { return hmac50(HmacSha256(key), message); }

Tag50 hmac50(const HmacSha256& key, Message51 message) {
    return Tag50(truncate50(key.compute(message_bytes(message))));
}

bool tags_equal(Tag50 a, Tag50 b) {
    volatile std::uint64_t diff = a.value() ^ b.value();
    std::uint64_t d = diff;
    d |= d >> 32;
    d |= d >> 16;
    d |= d >> 8;
    d |= d >> 4;
    d |= d >> 2;
    d |= d >> 1;
    return (d & 1u) == 0;
}

}  // namespace adsbauth::crypto
