#include "adsbauth/frame_codec.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "adsbauth/simd/kernels.hpp"

namespace adsbauth::codec {

namespace {

constexpr std::uint32_t kGeneratorFull = 0x1000000u | kGenerator;
constexpr std::uint32_t kMask24 = 0xFFFFFF;

std::uint64_t load_be(const std::uint8_t* p, std::size_t n) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v = (v << 8) | p[i];
    return v;
}

void store_be(std::uint8_t* p, std::size_t n, std::uint64_t v) {
    for (std::size_t i = 0; i < n; ++i) p[n - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
}

void check_width(std::uint64_t value, unsigned width, const char* field) {
    if (width < 64 && (value >> width) != 0) {
        throw WidthError(std::string(field) + " exceeds " + std::to_string(width) + " bits");
    }
}

/// Syndrome of a single flipped bit at each frame position (bit 0 = first on air).
struct SingleBitTable {
    std::array<std::pair<std::uint32_t, std::uint8_t>, kFrameBits> entries{};

    SingleBitTable() {
        // Position 111 is x^0; each earlier position multiplies by x.
        std::uint32_t s = 1;
        for (int pos = static_cast<int>(kFrameBits) - 1; pos >= 0; --pos) {
            entries[static_cast<std::size_t>(pos)] = {s, static_cast<std::uint8_t>(pos)};
            s <<= 1;
            if (s & 0x1000000u) s ^= kGeneratorFull;
        }
        std::sort(entries.begin(), entries.end());
    }

    int lookup(std::uint32_t syn) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), std::pair<std::uint32_t, std::uint8_t>{syn, 0});
        if (it == entries.end() || it->first != syn) return -1;
        return it->second;
    }
};

const SingleBitTable& single_bit_table() {
    static const SingleBitTable table;
    return table;
}

/// 112-bit error vector as (bits 0..63, bits 64..111), bit 0 = MSB of the frame.
using ErrorVector = std::pair<std::uint64_t, std::uint64_t>;

ErrorVector place_pattern(unsigned start, std::uint32_t pattern) {
    ErrorVector v{0, 0};
    for (unsigned j = 0; j < 24; ++j) {
        if ((pattern >> (23 - j)) & 1u) {
            const unsigned pos = start + j;
            if (pos < 64) {
                v.first |= std::uint64_t{1} << (63 - pos);
            } else {
                v.second |= std::uint64_t{1} << (63 - (pos - 64));
            }
        }
    }
    return v;
}

void apply_error(FrameBits& bits, const ErrorVector& err) {
    for (unsigned pos = 0; pos < kFrameBits; ++pos) {
        const bool set = pos < 64 ? ((err.first >> (63 - pos)) & 1u) : ((err.second >> (63 - (pos - 64))) & 1u);
        if (set) bits[pos / 8] ^= static_cast<std::uint8_t>(0x80u >> (pos % 8));
    }
}

}  // namespace

FrameBits encode_frame(std::uint32_t df, std::uint32_t capability, std::uint32_t icao, std::uint64_t me) {
    check_width(df, 5, "downlink format");
    check_width(capability, 3, "capability");
    check_width(icao, 24, "ICAO address");
    check_width(me, 56, "ME field");
    Frame f;
    f.df = static_cast<std::uint8_t>(df);
    f.capability = static_cast<std::uint8_t>(capability);
    f.icao = icao;
    f.me = me;
    FrameBits bits = serialize(f);
    const std::uint32_t parity = crc24(std::span<const std::uint8_t>(bits.data(), kPayloadBytes));
    store_be(bits.data() + kPayloadBytes, 3, parity);
    return bits;
}

FrameBits serialize(const Frame& frame) {
    check_width(frame.df, 5, "downlink format");
    check_width(frame.capability, 3, "capability");
    check_width(frame.icao, 24, "ICAO address");
    check_width(frame.me, 56, "ME field");
    check_width(frame.parity, 24, "parity");
    const std::uint64_t hi = (std::uint64_t{frame.df} << 59) | (std::uint64_t{frame.capability} << 56) |
                             (std::uint64_t{frame.icao} << 32) | (frame.me >> 24);
    const std::uint64_t lo = ((frame.me & kMask24) << 24) | frame.parity;
    FrameBits bits{};
    store_be(bits.data(), 8, hi);
    store_be(bits.data() + 8, 6, lo);
    return bits;
}

Frame parse_fields(const FrameBits& bits) {
    const std::uint64_t hi = load_be(bits.data(), 8);
    const std::uint64_t lo = load_be(bits.data() + 8, 6);
    Frame f;
    f.df = static_cast<std::uint8_t>(hi >> 59);
    f.capability = static_cast<std::uint8_t>((hi >> 56) & 0x7);
    f.icao = static_cast<std::uint32_t>((hi >> 32) & kMask24);
    f.me = ((hi & 0xFFFFFFFFu) << 24) | (lo >> 24);
    f.parity = static_cast<std::uint32_t>(lo & kMask24);
    return f;
}

std::uint32_t crc24(std::span<const std::uint8_t> payload) {
    if (payload.size() != kPayloadBytes) {
        throw WidthError("crc24 payload must be exactly 88 bits");
    }
    std::uint32_t crc = 0;
    for (std::uint8_t byte : payload) {
        crc ^= std::uint32_t{byte} << 16;
        for (int i = 0; i < 8; ++i) {
            crc <<= 1;
            if (crc & 0x1000000u) crc ^= kGeneratorFull;
        }
    }
    return crc & kMask24;
}

std::uint32_t syndrome(const FrameBits& bits) {
    const std::uint32_t parity = static_cast<std::uint32_t>(load_be(bits.data() + kPayloadBytes, 3));
    return crc24(std::span<const std::uint8_t>(bits.data(), kPayloadBytes)) ^ parity;
}

std::vector<std::uint32_t> syndromes(std::span<const FrameBits> frames) {
    std::vector<std::uint32_t> out(frames.size());
    simd::active_kernels().crc24_syndromes(frames, out);
    return out;
}

DecodeResult decode_frame(const FrameBits& bits, unsigned max_correctable) {
    return decode_frame_with_syndrome(bits, syndrome(bits), max_correctable);
}

DecodeResult decode_frame_with_syndrome(const FrameBits& bits, std::uint32_t syn, unsigned max_correctable) {
    if (max_correctable > kMaxCorrectableBits) {
        throw WidthError("at most 5 bits can be corrected");
    }
    if (syn == 0) return {parse_fields(bits), 0};
    if (max_correctable == 0) throw IntegrityError("parity mismatch");

    if (max_correctable == 1) {
        const int pos = single_bit_table().lookup(syn);
        if (pos < 0) throw IntegrityError("parity mismatch not explained by a single-bit error");
        FrameBits fixed = bits;
        fixed[static_cast<std::size_t>(pos) / 8] ^= static_cast<std::uint8_t>(0x80u >> (pos % 8));
        return {parse_fields(fixed), 1};
    }

    // Burst-window search. A pattern e confined to bits [s, s+24) has syndrome
    // e * x^(88-s) mod g, so the candidate for each window is
    // syndrome * x^-(88-s) mod g; g has a constant term, so x is invertible.
    std::vector<ErrorVector> best;
    unsigned best_weight = max_correctable + 1;
    std::uint32_t pattern = syn;
    for (int start = static_cast<int>(kFrameBits - 24); start >= 0; --start) {
        const auto weight = static_cast<unsigned>(std::popcount(pattern));
        if (weight <= max_correctable && weight <= best_weight) {
            const ErrorVector v = place_pattern(static_cast<unsigned>(start), pattern);
            if (weight < best_weight) {
                best.clear();
                best_weight = weight;
            }
            if (std::find(best.begin(), best.end(), v) == best.end()) best.push_back(v);
        }
        if (pattern & 1u) pattern ^= kGeneratorFull;
        pattern >>= 1;
    }
    if (best.empty()) throw IntegrityError("parity mismatch not explained by a correctable burst");
    if (best.size() > 1) throw IntegrityError("ambiguous error pattern");

    FrameBits fixed = bits;
    apply_error(fixed, best.front());
    return {parse_fields(fixed), best_weight};
}

unsigned body_width(PayloadKind kind) { return kind == PayloadKind::Data ? 51 : 50; }

std::uint8_t type_code(PayloadKind kind) {
    switch (kind) {
        case PayloadKind::Data: return kTypeCodeData;
        case PayloadKind::Mac: return kTypeCodeMac;
        case PayloadKind::Key: return kTypeCodeKey;
    }
    return 0;
}

std::uint64_t pack_payload(const AuthPayload& payload) {
    const unsigned width = body_width(payload.kind);
    if ((payload.body >> width) != 0) {
        throw WidthError("payload body exceeds " + std::to_string(width) + " bits");
    }
    return (std::uint64_t{type_code(payload.kind)} << 51) | (payload.body << (51 - width));
}

AuthPayload unpack_payload(std::uint64_t me) {
    check_width(me, 56, "ME field");
    const auto tc = static_cast<std::uint8_t>(me >> 51);
    const std::uint64_t rest = me & ((std::uint64_t{1} << 51) - 1);
    switch (tc) {
        case kTypeCodeData: return {PayloadKind::Data, rest};
        case kTypeCodeMac:
        case kTypeCodeKey:
            if (rest & 1u) throw UnknownPayloadError("spare bit set in a 50-bit payload");
            return {tc == kTypeCodeMac ? PayloadKind::Mac : PayloadKind::Key, rest >> 1};
        default: throw UnknownPayloadError("Type Code " + std::to_string(tc) + " is not a protocol payload");
    }
}

}  // namespace adsbauth::codec
