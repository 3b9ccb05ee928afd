#pragma once

// Hex capture format: one frame per line, 28 lowercase hex characters
// (112 bits, MSB-first), optionally followed by ";<timestamp_us>".

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "adsbauth/frame_codec.hpp"

namespace adsbauth::capture {

struct CaptureLine {
    codec::FrameBits bits{};
    std::optional<std::uint64_t> timestamp_us;

    friend bool operator==(const CaptureLine&, const CaptureLine&) = default;
};

/// Throws FormatError on anything but the documented line shape. Trailing
/// carriage returns are tolerated; uppercase hex is rejected.
CaptureLine parse_line(std::string_view line);

std::string format_line(const codec::FrameBits& bits, std::optional<std::uint64_t> timestamp_us = std::nullopt);

}  // namespace adsbauth::capture
