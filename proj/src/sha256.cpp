#include "adsbauth/sha256.hpp"

#include <algorithm>
#include <bit>

#include "sha256_constants.hpp"

namespace adsbauth::crypto {

using detail::kRound;

void sha256_compress(Sha256State& state, std::span<const std::uint8_t, kSha256BlockBytes> block) {
    std::array<std::uint32_t, 64> w{};
    for (std::size_t i = 0; i < 16; ++i) {
        w[i] = (std::uint32_t{block[4 * i]} << 24) | (std::uint32_t{block[4 * i + 1]} << 16) |
               (std::uint32_t{block[4 * i + 2]} << 8) | std::uint32_t{block[4 * i + 3]};
    }
    for (std::size_t i = 16; i < 64; ++i) {
        const std::uint32_t s0 = std::rotr(w[i - 15], 7) ^ std::rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        const std::uint32_t s1 = std::rotr(w[i - 2], 17) ^ std::rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }

    auto [a, b, c, d, e, f, g, h] = state;
    for (std::size_t i = 0; i < 64; ++i) {
        const std::uint32_t s1 = std::rotr(e, 6) ^ std::rotr(e, 11) ^ std::rotr(e, 25);
        const std::uint32_t ch = (e & f) ^ (~e & g);
        const std::uint32_t t1 = h + s1 + ch + kRound[i] + w[i];
        const std::uint32_t s0 = std::rotr(a, 2) ^ std::rotr(a, 13) ^ std::rotr(a, 22);
        const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        const std::uint32_t t2 = s0 + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    state[0] += a;
    state[1] += b;
    state[2] += c;
    state[3] += d;
    state[4] += e;
    state[5] += f;
    state[6] += g;
    state[7] += h;
}

Sha256::Sha256(const Sha256State& state, std::uint64_t blocks_done)
    : state_(state), total_bytes_(blocks_done * kSha256BlockBytes) {}

Sha256& Sha256::update(std::span<const std::uint8_t> data) {
    total_bytes_ += data.size();
    while (!data.empty()) {
        const std::size_t take = std::min(data.size(), kSha256BlockBytes - buffered_);
        std::copy_n(data.begin(), take, buffer_.begin() + static_cast<std::ptrdiff_t>(buffered_));
        buffered_ += take;
        data = data.subspan(take);
        if (buffered_ == kSha256BlockBytes) {
            sha256_compress(state_, buffer_);
            buffered_ = 0;
        }
    }
    return *this;
}

Digest Sha256::finish() {
    const std::uint64_t bit_len = total_bytes_ * 8;
    buffer_[buffered_++] = 0x80;
    if (buffered_ > kSha256BlockBytes - 8) {
        std::fill(buffer_.begin() + static_cast<std::ptrdiff_t>(buffered_), buffer_.end(), 0);
        sha256_compress(state_, buffer_);
        buffered_ = 0;
    }
    std::fill(buffer_.begin() + static_cast<std::ptrdiff_t>(buffered_), buffer_.end() - 8, 0);
    for (int i = 0; i < 8; ++i) {
        buffer_[kSha256BlockBytes - 1 - static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(bit_len >> (8 * i));
    }
    sha256_compress(state_, buffer_);
    buffered_ = 0;

    Digest out{};
    for (std::size_t i = 0; i < 8; ++i) {
        out[4 * i] = static_cast<std::uint8_t>(state_[i] >> 24);
        out[4 * i + 1] = static_cast<std::uint8_t>(state_[i] >> 16);
        out[4 * i + 2] = static_cast<std::uint8_t>(state_[i] >> 8);
        out[4 * i + 3] = static_cast<std::uint8_t>(state_[i]);
    }
    return out;
}

Digest Sha256::digest(std::span<const std::uint8_t> data) { return Sha256{}.update(data).finish(); }

}  // namespace adsbauth::crypto
