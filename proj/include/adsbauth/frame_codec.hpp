#pragma once

// Bit-exact codec for 112-bit Extended Squitter frames:
//
//   | DF (5) | CA (3) | ICAO (24) | ME (56) | parity (24) |
//
// Every field and the frame as a whole are serialized MSB-first. Parity is the
// Mode-S CRC-24 remainder over the first 88 bits.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "adsbauth/bits.hpp"

namespace adsbauth::codec {

inline constexpr std::size_t kFrameBits = 112;
inline constexpr std::size_t kFrameBytes = 14;
inline constexpr std::size_t kPayloadBits = 88;
inline constexpr std::size_t kPayloadBytes = 11;

/// Mode-S generator polynomial without its implicit x^24 term.
inline constexpr std::uint32_t kGenerator = 0xFFF409;

/// Deployed DF value for ADS-B Extended Squitter.
inline constexpr std::uint8_t kExtendedSquitterDf = 17;
/// The literal 0x17 some descriptions give for the same field.
inline constexpr std::uint8_t kLiteralHexDf = 0x17;

inline constexpr unsigned kMaxCorrectableBits = 5;

using FrameBits = std::array<std::uint8_t, kFrameBytes>;

struct Frame {
    std::uint8_t df = kExtendedSquitterDf;
    std::uint8_t capability = 0;
    std::uint32_t icao = 0;
    std::uint64_t me = 0;
    std::uint32_t parity = 0;

    friend bool operator==(const Frame&, const Frame&) = default;
};

/// Serializes the fields and appends crc24 of the first 88 bits.
FrameBits encode_frame(std::uint32_t df, std::uint32_t capability, std::uint32_t icao, std::uint64_t me);

/// Serializes the fields of an already-built frame without recomputing parity.
FrameBits serialize(const Frame& frame);

/// Splits a frame into fields without any parity check.
Frame parse_fields(const FrameBits& bits);

/// CRC-24 over an 88-bit payload (11 bytes, MSB-first).
std::uint32_t crc24(std::span<const std::uint8_t> payload);

/// Remainder of the whole 112-bit codeword; zero for an intact frame.
std::uint32_t syndrome(const FrameBits& bits);

/// Syndromes of many frames at once through the active SIMD kernel.
std::vector<std::uint32_t> syndromes(std::span<const FrameBits> frames);

struct DecodeResult {
    Frame frame;
    unsigned corrected_bits = 0;
};

/// Parses a frame, repairing up to `max_correctable` flipped bits.
///
/// Weight-1 errors are looked up in a table of all 112 single-bit syndromes.
/// With max_correctable > 1, error patterns confined to any contiguous 24-bit
/// window are also searched; the minimum-weight explanation must be unique or
/// the frame is rejected.
///
/// Throws IntegrityError if the frame cannot be repaired, WidthError if
/// max_correctable is above 5.
DecodeResult decode_frame(const FrameBits& bits, unsigned max_correctable = 1);

/// Same as decode_frame when the syndrome is already known.
DecodeResult decode_frame_with_syndrome(const FrameBits& bits, std::uint32_t syndrome, unsigned max_correctable);

// --- protocol payloads carried in the 56-bit ME field ---

enum class PayloadKind : std::uint8_t { Data, Mac, Key };

/// Type Codes 25..27 are reserved in the ADS-B assignment, so protocol frames
/// are never mistaken for position or velocity reports.
inline constexpr std::uint8_t kTypeCodeData = 25;
inline constexpr std::uint8_t kTypeCodeMac = 26;
inline constexpr std::uint8_t kTypeCodeKey = 27;

struct AuthPayload {
    PayloadKind kind = PayloadKind::Data;
    /// 51 significant bits for Data, 50 for Mac and Key.
    std::uint64_t body = 0;

    static AuthPayload data(Message51 message) { return {PayloadKind::Data, message.value()}; }
    static AuthPayload mac(Tag50 tag) { return {PayloadKind::Mac, tag.value()}; }
    static AuthPayload key(Key50 key) { return {PayloadKind::Key, key.value()}; }

    friend bool operator==(const AuthPayload&, const AuthPayload&) = default;
};

unsigned body_width(PayloadKind kind);
std::uint8_t type_code(PayloadKind kind);

/// Type Code in the top 5 bits, body left-aligned in the remaining 51.
std::uint64_t pack_payload(const AuthPayload& payload);

/// Throws UnknownPayloadError for foreign Type Codes or nonzero spare bits.
AuthPayload unpack_payload(std::uint64_t me);

}  // namespace adsbauth::codec
