// AVX2 variants. Functions carry a target attribute instead of compiling the
// whole file with -mavx2, so nothing here leaks VEX code into shared inline
// functions that the rest of the library links against.

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "../sha256_constants.hpp"
#include "adsbauth/philox.hpp"
#include "adsbauth/sha256.hpp"
#include "kernels_impl.hpp"

#define ADSBAUTH_AVX2 __attribute__((target("avx2")))

namespace adsbauth::simd::detail {

namespace {

// ---------------------------------------------------------------- CRC-24

ADSBAUTH_AVX2 void crc24_syndromes_avx2(std::span<const codec::FrameBits> frames, std::span<std::uint32_t> out) {
    if (out.size() < frames.size()) throw std::length_error("syndrome output too small");
    const std::size_t n = frames.size();
    const auto* base = reinterpret_cast<const int*>(frames.data());
    const auto* table = reinterpret_cast<const int*>(kCrc24Table.entries.data());
    const __m256i stride = _mm256_setr_epi32(0, 14, 28, 42, 56, 70, 84, 98);
    const __m256i byte_mask = _mm256_set1_epi32(0xFF);
    const __m256i mask24 = _mm256_set1_epi32(0xFFFFFF);

    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i frame_offsets = _mm256_add_epi32(stride, _mm256_set1_epi32(static_cast<int>(i * 14)));
        __m256i crc = _mm256_setzero_si256();
        for (int j = 0; j < static_cast<int>(codec::kPayloadBytes); ++j) {
            // A 4-byte gather at offset j <= 10 stays inside the 14-byte frame.
            const __m256i word = _mm256_i32gather_epi32(base, _mm256_add_epi32(frame_offsets, _mm256_set1_epi32(j)), 1);
            const __m256i byte = _mm256_and_si256(word, byte_mask);
            const __m256i idx = _mm256_and_si256(_mm256_xor_si256(_mm256_srli_epi32(crc, 16), byte), byte_mask);
            const __m256i t = _mm256_i32gather_epi32(table, idx, 4);
            crc = _mm256_xor_si256(_mm256_and_si256(_mm256_slli_epi32(crc, 8), mask24), t);
        }
        // Bytes 10..13 little-endian in each lane; parity is bytes 11..13 big-endian.
        const __m256i tail = _mm256_i32gather_epi32(base, _mm256_add_epi32(frame_offsets, _mm256_set1_epi32(10)), 1);
        const __m256i b11 = _mm256_and_si256(_mm256_srli_epi32(tail, 8), byte_mask);
        const __m256i b12 = _mm256_and_si256(_mm256_srli_epi32(tail, 16), byte_mask);
        const __m256i b13 = _mm256_srli_epi32(tail, 24);
        const __m256i parity =
            _mm256_or_si256(_mm256_or_si256(_mm256_slli_epi32(b11, 16), _mm256_slli_epi32(b12, 8)), b13);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), _mm256_xor_si256(crc, parity));
    }
    if (i < n) crc24_syndromes_scalar(frames.subspan(i), out.subspan(i));
}

// ---------------------------------------------------------------- SHA-256 x8

ADSBAUTH_AVX2 inline __m256i rotr(__m256i x, int n) {
    return _mm256_or_si256(_mm256_srli_epi32(x, n), _mm256_slli_epi32(x, 32 - n));
}

ADSBAUTH_AVX2 void derive50_avx2(std::span<const std::uint64_t> keys, std::uint8_t domain,
                                 std::span<std::uint64_t> out) {
    if (out.size() < keys.size()) throw std::length_error("derive50 output too small");
    const std::size_t n = keys.size();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        alignas(32) std::uint32_t w0[8];
        alignas(32) std::uint32_t w1[8];
        for (int l = 0; l < 8; ++l) {
            const std::uint64_t packed = keys[i + static_cast<std::size_t>(l)] << 14;
            w0[l] = static_cast<std::uint32_t>(packed >> 32);
            w1[l] = static_cast<std::uint32_t>(packed) | domain;
        }

        __m256i w[16];
        w[0] = _mm256_load_si256(reinterpret_cast<const __m256i*>(w0));
        w[1] = _mm256_load_si256(reinterpret_cast<const __m256i*>(w1));
        w[2] = _mm256_set1_epi32(static_cast<int>(0x80000000u));
        for (int k = 3; k < 15; ++k) w[k] = _mm256_setzero_si256();
        w[15] = _mm256_set1_epi32(64);

        __m256i s[8];
        for (int k = 0; k < 8; ++k) s[k] = _mm256_set1_epi32(static_cast<int>(crypto::kSha256Init[static_cast<std::size_t>(k)]));
        __m256i a = s[0], b = s[1], c = s[2], d = s[3], e = s[4], f = s[5], g = s[6], h = s[7];

        for (int r = 0; r < 64; ++r) {
            __m256i wr;
            if (r < 16) {
                wr = w[r];
            } else {
                const __m256i w15 = w[(r - 15) & 15];
                const __m256i w2 = w[(r - 2) & 15];
                const __m256i s0 = _mm256_xor_si256(_mm256_xor_si256(rotr(w15, 7), rotr(w15, 18)), _mm256_srli_epi32(w15, 3));
                const __m256i s1 = _mm256_xor_si256(_mm256_xor_si256(rotr(w2, 17), rotr(w2, 19)), _mm256_srli_epi32(w2, 10));
                wr = _mm256_add_epi32(_mm256_add_epi32(w[r & 15], s0), _mm256_add_epi32(w[(r - 7) & 15], s1));
                w[r & 15] = wr;
            }
            const __m256i S1 = _mm256_xor_si256(_mm256_xor_si256(rotr(e, 6), rotr(e, 11)), rotr(e, 25));
            const __m256i ch = _mm256_xor_si256(_mm256_and_si256(e, f), _mm256_andnot_si256(e, g));
            const __m256i k = _mm256_set1_epi32(static_cast<int>(crypto::detail::kRound[static_cast<std::size_t>(r)]));
            const __m256i t1 =
                _mm256_add_epi32(_mm256_add_epi32(_mm256_add_epi32(h, S1), _mm256_add_epi32(ch, k)), wr);
            const __m256i S0 = _mm256_xor_si256(_mm256_xor_si256(rotr(a, 2), rotr(a, 13)), rotr(a, 22));
            const __m256i maj =
                _mm256_xor_si256(_mm256_xor_si256(_mm256_and_si256(a, b), _mm256_and_si256(a, c)), _mm256_and_si256(b, c));
            const __m256i t2 = _mm256_add_epi32(S0, maj);
            h = g;
            g = f;
            f = e;
            e = _mm256_add_epi32(d, t1);
            d = c;
            c = b;
            b = a;
            a = _mm256_add_epi32(t1, t2);
        }

        alignas(32) std::uint32_t h0[8];
        alignas(32) std::uint32_t h1[8];
        _mm256_store_si256(reinterpret_cast<__m256i*>(h0), _mm256_add_epi32(a, s[0]));
        _mm256_store_si256(reinterpret_cast<__m256i*>(h1), _mm256_add_epi32(b, s[1]));
        for (int l = 0; l < 8; ++l) {
            out[i + static_cast<std::size_t>(l)] = ((std::uint64_t{h0[l]} << 32) | h1[l]) >> 14;
        }
    }
    if (i < n) derive50_scalar(keys.subspan(i), domain, out.subspan(i));
}

// ---------------------------------------------------------------- Poisson collisions

struct MulHiLo {
    __m256i hi;
    __m256i lo;
};

ADSBAUTH_AVX2 inline MulHiLo mulhilo32(__m256i a, __m256i m) {
    const __m256i even = _mm256_mul_epu32(a, m);
    const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
    return {_mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA),
            _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA)};
}

ADSBAUTH_AVX2 inline __m256d to_uniform(__m128i words) {
    const __m128i flipped = _mm_xor_si128(words, _mm_set1_epi32(static_cast<int>(0x80000000u)));
    const __m256d as_double = _mm256_add_pd(_mm256_cvtepi32_pd(flipped), _mm256_set1_pd(2147483648.0));
    return _mm256_mul_pd(_mm256_add_pd(as_double, _mm256_set1_pd(0.5)), _mm256_set1_pd(0x1p-32));
}

ADSBAUTH_AVX2 inline int collisions4(__m256d a1, __m256d a2, __m256d b1, __m256d b2, __m256d ta, __m256d tb) {
    const __m256d a12 = _mm256_mul_pd(a1, a2);
    const __m256d b12 = _mm256_mul_pd(b1, b2);
    const __m256d a_one = _mm256_cmp_pd(a1, ta, _CMP_GT_OQ);
    const __m256d a_two = _mm256_cmp_pd(a12, ta, _CMP_GT_OQ);
    const __m256d b_one = _mm256_cmp_pd(b1, tb, _CMP_GT_OQ);
    const __m256d b_two = _mm256_cmp_pd(b12, tb, _CMP_GT_OQ);
    const __m256d hit = _mm256_or_pd(_mm256_or_pd(a_two, b_two), _mm256_and_pd(a_one, b_one));
    return std::popcount(static_cast<unsigned>(_mm256_movemask_pd(hit)));
}

ADSBAUTH_AVX2 std::uint64_t count_collisions_avx2(const CollisionBatch& batch, std::uint64_t first_trial,
                                                  std::uint64_t trials) {
    const PhiloxKey key = philox_key(batch.seed);
    __m256i round_k0[10];
    __m256i round_k1[10];
    {
        std::uint32_t k0 = key[0];
        std::uint32_t k1 = key[1];
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                k0 += kPhiloxW0;
                k1 += kPhiloxW1;
            }
            round_k0[r] = _mm256_set1_epi32(static_cast<int>(k0));
            round_k1[r] = _mm256_set1_epi32(static_cast<int>(k1));
        }
    }
    const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kPhiloxM0));
    const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kPhiloxM1));
    const __m256i lane_offsets = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    const __m256d ta = _mm256_set1_pd(batch.threshold_a);
    const __m256d tb = _mm256_set1_pd(batch.threshold_b);

    std::uint64_t hits = 0;
    std::uint64_t t = first_trial;
    const std::uint64_t end = first_trial + trials;
    while (t < end) {
        const auto low = static_cast<std::uint32_t>(t);
        if (end - t < 8 || low > 0xFFFFFFFFu - 7) {
            // Tail, or a block whose counters would carry into the high word.
            const std::uint64_t span_len = std::min<std::uint64_t>(end - t, 8);
            hits += count_collisions_scalar(batch, t, span_len);
            t += span_len;
            continue;
        }
        __m256i c0 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(low)), lane_offsets);
        __m256i c1 = _mm256_set1_epi32(static_cast<int>(t >> 32));
        __m256i c2 = _mm256_setzero_si256();
        __m256i c3 = _mm256_setzero_si256();
        for (int r = 0; r < 10; ++r) {
            const MulHiLo p0 = mulhilo32(c0, m0);
            const MulHiLo p1 = mulhilo32(c2, m1);
            const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(p1.hi, c1), round_k0[r]);
            const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(p0.hi, c3), round_k1[r]);
            c0 = n0;
            c1 = p1.lo;
            c2 = n2;
            c3 = p0.lo;
        }
        hits += static_cast<std::uint64_t>(collisions4(
            to_uniform(_mm256_castsi256_si128(c0)), to_uniform(_mm256_castsi256_si128(c1)),
            to_uniform(_mm256_castsi256_si128(c2)), to_uniform(_mm256_castsi256_si128(c3)), ta, tb));
        hits += static_cast<std::uint64_t>(collisions4(
            to_uniform(_mm256_extracti128_si256(c0, 1)), to_uniform(_mm256_extracti128_si256(c1, 1)),
            to_uniform(_mm256_extracti128_si256(c2, 1)), to_uniform(_mm256_extracti128_si256(c3, 1)), ta, tb));
        t += 8;
    }
    return hits;
}

}  // namespace

const KernelTable kAvx2Kernels{Isa::Avx2, crc24_syndromes_avx2, derive50_avx2, count_collisions_avx2};

}  // namespace adsbauth::simd::detail
