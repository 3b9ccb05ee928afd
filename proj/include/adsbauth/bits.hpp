#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adsbauth/errors.hpp"

namespace adsbauth {

/// Unsigned value constrained to the low `Width` bits of a 64-bit word.
/// `Tag` keeps keys, tags, messages and addresses from being mixed up.
template <unsigned Width, class Tag>
class UBits {
    static_assert(Width >= 1 && Width <= 64);

public:
    static constexpr unsigned width = Width;
    static constexpr std::uint64_t mask = Width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << Width) - 1;

    constexpr UBits() = default;

    constexpr explicit UBits(std::uint64_t value) : value_(value) {
        if ((value & ~mask) != 0) {
            throw WidthError("value exceeds " + std::to_string(Width) + "-bit field");
        }
    }

    /// Keeps the low `Width` bits of `value`.
    static constexpr UBits truncate(std::uint64_t value) { return UBits(value & mask); }

    constexpr std::uint64_t value() const { return value_; }

    friend constexpr auto operator<=>(const UBits&, const UBits&) = default;

private:
    std::uint64_t value_ = 0;
};

using Key50 = UBits<50, struct Key50Tag>;
using Tag50 = UBits<50, struct Tag50Tag>;
using Message51 = UBits<51, struct Message51Tag>;
using Icao = UBits<24, struct IcaoTag>;

using Seed = std::array<std::uint8_t, 32>;

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);

/// Left-aligned hex rendering of a `width`-bit value, padded with zero bits to a
/// multiple of four. 50-bit keys and tags become 13 characters with the low
/// two bits zero.
std::string to_hex_left_aligned(std::uint64_t value, unsigned width);

/// Inverse of to_hex_left_aligned; rejects wrong lengths and nonzero pad bits.
std::uint64_t parse_hex_left_aligned(std::string_view hex, unsigned width);

/// Right-aligned hex of exactly `digits` characters.
std::string to_hex_fixed(std::uint64_t value, unsigned digits);
std::uint64_t parse_hex_fixed(std::string_view hex, unsigned digits);

std::string seed_to_hex(const Seed& seed);
Seed seed_from_hex(std::string_view hex);

inline std::string to_hex(Key50 key) { return to_hex_left_aligned(key.value(), 50); }
inline std::string to_hex(Tag50 tag) { return to_hex_left_aligned(tag.value(), 50); }
inline std::string to_hex(Message51 msg) { return to_hex_left_aligned(msg.value(), 51); }
inline std::string to_hex(Icao icao) { return to_hex_fixed(icao.value(), 6); }

}  // namespace adsbauth
