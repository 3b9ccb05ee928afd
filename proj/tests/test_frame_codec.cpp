#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "adsbauth/capture.hpp"
#include "adsbauth/frame_codec.hpp"

using namespace adsbauth;
using namespace adsbauth::codec;

namespace {

// Polynomial long division one bit at a time over the 88 data bits followed
// by 24 zero bits, against the full 25-bit generator.
std::uint32_t crc_oracle(const std::uint8_t* payload) {
    std::vector<int> bits;
    for (int i = 0; i < 88; ++i) bits.push_back((payload[i / 8] >> (7 - i % 8)) & 1);
    bits.resize(112, 0);
    const std::uint32_t gen = 0x1FFF409;
    for (int i = 0; i < 88; ++i) {
        if (!bits[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j < 25; ++j) bits[static_cast<std::size_t>(i + j)] ^= (gen >> (24 - j)) & 1;
    }
    std::uint32_t rem = 0;
    for (int i = 88; i < 112; ++i) rem = (rem << 1) | static_cast<std::uint32_t>(bits[static_cast<std::size_t>(i)]);
    return rem;
}

FrameBits random_frame(std::mt19937_64& rng) {
    const auto df = static_cast<std::uint32_t>(rng() & 31);
    const auto ca = static_cast<std::uint32_t>(rng() & 7);
    const auto icao = static_cast<std::uint32_t>(rng() & 0xFFFFFF);
    const std::uint64_t me = rng() >> 8;
    return encode_frame(df, ca, icao, me);
}

void flip(FrameBits& f, unsigned pos) { f[pos / 8] ^= static_cast<std::uint8_t>(0x80u >> (pos % 8)); }

}  // namespace

TEST(FrameCodec, KnownAdsbFrameHasZeroSyndrome) {
    // Widely published airborne-position squitter.
    const FrameBits f = capture::parse_line("8d40621d58c382d690c8ac2863a7").bits;
    EXPECT_EQ(syndrome(f), 0u);
    const Frame fields = decode_frame(f).frame;
    EXPECT_EQ(fields.df, 17);
    EXPECT_EQ(fields.capability, 5);
    EXPECT_EQ(fields.icao, 0x40621Du);
    EXPECT_EQ(fields.parity, 0x2863A7u);
}

TEST(FrameCodec, FieldLayoutIsMsbFirst) {
    const FrameBits f = encode_frame(17, 5, 0xABC123, 0x00112233445566);
    EXPECT_EQ(f[0], 0x8D);
    EXPECT_EQ(f[1], 0xAB);
    EXPECT_EQ(f[3], 0x23);
    EXPECT_EQ(f[4], 0x00);
    EXPECT_EQ(f[10], 0x66);
}

TEST(FrameCodec, EncodeRejectsOversizedFields) {
    EXPECT_THROW(encode_frame(32, 0, 0, 0), WidthError);
    EXPECT_THROW(encode_frame(17, 8, 0, 0), WidthError);
    EXPECT_THROW(encode_frame(17, 0, 0x1000000, 0), WidthError);
    EXPECT_THROW(encode_frame(17, 0, 0, std::uint64_t{1} << 56), WidthError);
}

TEST(FrameCodec, CrcMatchesLongDivisionOracle) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        std::array<std::uint8_t, 11> p{};
        for (auto& b : p) b = static_cast<std::uint8_t>(rng());
        ASSERT_EQ(crc24(p), crc_oracle(p.data()));
    }
    std::array<std::uint8_t, 10> short_payload{};
    EXPECT_THROW(crc24(short_payload), WidthError);
}

TEST(FrameCodec, CrcIsLinear) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
        std::array<std::uint8_t, 11> a{}, b{}, x{};
        for (std::size_t j = 0; j < 11; ++j) {
            a[j] = static_cast<std::uint8_t>(rng());
            b[j] = static_cast<std::uint8_t>(rng());
            x[j] = a[j] ^ b[j];
        }
        ASSERT_EQ(crc24(x), crc24(a) ^ crc24(b));
    }
}

TEST(FrameCodec, RoundTripRandomFrames) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 10000; ++i) {
        const FrameBits f = random_frame(rng);
        const DecodeResult r = decode_frame(f);
        ASSERT_EQ(r.corrected_bits, 0u);
        ASSERT_EQ(serialize(r.frame), f);
        ASSERT_EQ(encode_frame(r.frame.df, r.frame.capability, r.frame.icao, r.frame.me), f);
    }
}

TEST(FrameCodec, EverySingleBitErrorIsCorrected) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const FrameBits f = random_frame(rng);
        for (unsigned pos = 0; pos < kFrameBits; ++pos) {
            FrameBits bad = f;
            flip(bad, pos);
            ASSERT_NE(syndrome(bad), 0u);
            const DecodeResult r = decode_frame(bad, 1);
            ASSERT_EQ(r.corrected_bits, 1u) << pos;
            ASSERT_EQ(serialize(r.frame), f) << pos;
        }
    }
}

TEST(FrameCodec, ZeroCorrectionRejectsAnyError) {
    std::mt19937_64 rng(15);
    FrameBits f = random_frame(rng);
    flip(f, 40);
    EXPECT_THROW(decode_frame(f, 0), IntegrityError);
    EXPECT_THROW(decode_frame(f, 6), WidthError);
}

TEST(FrameCodec, BurstErrorsInsideOneWindowAreCorrected) {
    std::mt19937_64 rng(16);
    for (unsigned weight = 2; weight <= 5; ++weight) {
        int corrected = 0, wrong = 0, refused = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const FrameBits f = random_frame(rng);
            FrameBits bad = f;
            const unsigned start = static_cast<unsigned>(rng() % (kFrameBits - 23));
            std::vector<unsigned> offsets;
            while (offsets.size() < weight) {
                const unsigned o = static_cast<unsigned>(rng() % 24);
                if (std::find(offsets.begin(), offsets.end(), o) == offsets.end()) offsets.push_back(o);
            }
            for (unsigned o : offsets) flip(bad, start + o);
            try {
                const DecodeResult r = decode_frame(bad, weight);
                const FrameBits out = serialize(r.frame);
                // Whatever comes back is a codeword no heavier than the burst.
                ASSERT_EQ(syndrome(out), 0u);
                ASSERT_LE(r.corrected_bits, weight);
                if (out == f) ++corrected;
                else ++wrong;
            } catch (const IntegrityError&) {
                ++refused;
            }
        }
        if (weight <= 2) {
            // Within the code's guaranteed correction radius.
            EXPECT_EQ(corrected, 1000);
        } else {
            // Heavier bursts are sometimes ambiguous; the decoder mostly
            // refuses those rather than guessing.
            EXPECT_GT(corrected, 800) << weight;
            EXPECT_LT(wrong, 20) << weight;
            EXPECT_GT(corrected + refused, 980) << weight;
        }
    }
}

TEST(FrameCodec, SixScatteredFlipsAreNeverSilentlyAccepted) {
    std::mt19937_64 rng(17);
    int wrong = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const FrameBits f = random_frame(rng);
        FrameBits bad = f;
        for (int k = 0; k < 6; ++k) flip(bad, static_cast<unsigned>(rng() % kFrameBits));
        if (bad == f) continue;
        try {
            const DecodeResult r = decode_frame(bad, 1);
            if (serialize(r.frame) != f) ++wrong;
        } catch (const IntegrityError&) {
        }
    }
    // Single-bit mode maps 112 of 2^24 syndromes to a fix, so a miscorrection
    // is rare but possible; it must stay near 112 / 2^24 per frame.
    EXPECT_LE(wrong, 2);
}

TEST(FrameCodec, BatchSyndromesMatchScalar) {
    std::mt19937_64 rng(18);
    std::vector<FrameBits> frames;
    for (int i = 0; i < 1001; ++i) {
        FrameBits f = random_frame(rng);
        if (i % 3 == 0) flip(f, static_cast<unsigned>(rng() % kFrameBits));
        frames.push_back(f);
    }
    const auto batch = syndromes(frames);
    for (std::size_t i = 0; i < frames.size(); ++i) ASSERT_EQ(batch[i], syndrome(frames[i]));
}

TEST(Payload, RoundTripAndTypeCodes) {
    const AuthPayload d = AuthPayload::data(Message51((std::uint64_t{1} << 51) - 1));
    const AuthPayload m = AuthPayload::mac(Tag50(0x123456789abcd));
    const AuthPayload k = AuthPayload::key(Key50(1));
    EXPECT_EQ(pack_payload(d) >> 51, kTypeCodeData);
    EXPECT_EQ(pack_payload(m) >> 51, kTypeCodeMac);
    EXPECT_EQ(pack_payload(k) >> 51, kTypeCodeKey);
    EXPECT_EQ(unpack_payload(pack_payload(d)), d);
    EXPECT_EQ(unpack_payload(pack_payload(m)), m);
    EXPECT_EQ(unpack_payload(pack_payload(k)), k);
    // 50-bit bodies are left-aligned with the spare bit last.
    EXPECT_EQ(pack_payload(k) & 3u, 2u);
}

TEST(Payload, ForeignTypeCodesAndSpareBitsAreRejected) {
    EXPECT_THROW(unpack_payload(std::uint64_t{11} << 51), UnknownPayloadError);
    EXPECT_THROW(unpack_payload((std::uint64_t{kTypeCodeMac} << 51) | 1u), UnknownPayloadError);
    EXPECT_THROW(unpack_payload(std::uint64_t{1} << 56), WidthError);
    EXPECT_THROW(pack_payload({PayloadKind::Key, std::uint64_t{1} << 50}), WidthError);
}

TEST(Capture, ParseAndFormat) {
    const auto line = capture::parse_line("8d40621d58c382d690c8ac2863a7;1234\r");
    EXPECT_EQ(line.timestamp_us, 1234u);
    EXPECT_EQ(capture::format_line(line.bits, line.timestamp_us), "8d40621d58c382d690c8ac2863a7;1234");
    EXPECT_EQ(capture::format_line(line.bits), "8d40621d58c382d690c8ac2863a7");
    EXPECT_THROW(capture::parse_line("8D40621D58C382D690C8AC2863A7"), FormatError);
    EXPECT_THROW(capture::parse_line("8d40621d58c382d690c8ac2863a"), FormatError);
    EXPECT_THROW(capture::parse_line("8d40621d58c382d690c8ac2863a7;"), FormatError);
    EXPECT_THROW(capture::parse_line("8d40621d58c382d690c8ac2863a7;12x"), FormatError);
}
