#include "adsbauth/capture.hpp"

#include <algorithm>
#include <charconv>

namespace adsbauth::capture {

CaptureLine parse_line(std::string_view line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);

    CaptureLine out;
    const auto semi = line.find(';');
    std::string_view hex = line.substr(0, semi);
    if (hex.size() != 2 * codec::kFrameBytes) throw FormatError("frame must be 28 hex characters");
    for (char c : hex) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
            throw FormatError("frame must be lowercase hex");
        }
    }
    const auto bytes = from_hex(hex);
    std::copy(bytes.begin(), bytes.end(), out.bits.begin());

    if (semi != std::string_view::npos) {
        const std::string_view ts = line.substr(semi + 1);
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), value);
        if (ts.empty() || ec != std::errc{} || ptr != ts.data() + ts.size()) {
            throw FormatError("timestamp must be decimal microseconds");
        }
        out.timestamp_us = value;
    }
    return out;
}

std::string format_line(const codec::FrameBits& bits, std::optional<std::uint64_t> timestamp_us) {
    std::string out = to_hex(bits);
    if (timestamp_us) {
        out.push_back(';');
        out += std::to_string(*timestamp_us);
    }
    return out;
}

}  // namespace adsbauth::capture
