#include "adsbauth/bits.hpp"

#include <cctype>

namespace adsbauth {

namespace {

constexpr char kDigits[] = "0123456789abcdef";

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::uint64_t parse_hex_u64(std::string_view hex) {
    if (hex.empty() || hex.size() > 16) throw FormatError("hex field has invalid length");
    std::uint64_t v = 0;
    for (char c : hex) {
        const int n = nibble(c);
        if (n < 0) throw FormatError("invalid hex digit");
        v = (v << 4) | static_cast<std::uint64_t>(n);
    }
    return v;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xF]);
    }
    return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw FormatError("odd-length hex string");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = nibble(hex[2 * i]);
        const int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw FormatError("invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::string to_hex_left_aligned(std::uint64_t value, unsigned width) {
    const unsigned digits = (width + 3) / 4;
    const unsigned pad = digits * 4 - width;
    return to_hex_fixed(value << pad, digits);
}

std::uint64_t parse_hex_left_aligned(std::string_view hex, unsigned width) {
    const unsigned digits = (width + 3) / 4;
    const unsigned pad = digits * 4 - width;
    if (hex.size() != digits) {
        throw FormatError("expected " + std::to_string(digits) + " hex characters for a " +
                          std::to_string(width) + "-bit field");
    }
    const std::uint64_t raw = parse_hex_u64(hex);
    if ((raw & ((std::uint64_t{1} << pad) - 1)) != 0) throw FormatError("nonzero padding bits");
    return raw >> pad;
}

std::string to_hex_fixed(std::uint64_t value, unsigned digits) {
    std::string out(digits, '0');
    for (unsigned i = 0; i < digits; ++i) {
        out[digits - 1 - i] = kDigits[(value >> (4 * i)) & 0xF];
    }
    return out;
}

std::uint64_t parse_hex_fixed(std::string_view hex, unsigned digits) {
    if (hex.size() != digits) {
        throw FormatError("expected " + std::to_string(digits) + " hex characters");
    }
    return parse_hex_u64(hex);
}

std::string seed_to_hex(const Seed& seed) { return to_hex(seed); }

Seed seed_from_hex(std::string_view hex) {
    if (hex.size() != 64) throw FormatError("seed must be 64 hex characters");
    const auto bytes = from_hex(hex);
    Seed seed{};
    for (std::size_t i = 0; i < seed.size(); ++i) seed[i] = bytes[i];
    return seed;
}

}  // namespace adsbauth
