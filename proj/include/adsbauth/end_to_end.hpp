#pragma once

// Protocol runs over a lossy channel with an active adversary, checked against
// a bookkeeper that knows which copies of every frame reached the receiver.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adsbauth/bits.hpp"
#include "adsbauth/channel_sim.hpp"
#include "adsbauth/frame_codec.hpp"
#include "adsbauth/receiver.hpp"

namespace adsbauth::channel {

/// Per-message (forge, modify) and per-disclosure (replay) probabilities.
struct AdversaryConfig {
    /// Replace a message's Data with adversary content and its Macs with a
    /// random tag.
    double forge_mac_rate = 0;
    /// Flip message bits in every Data copy, leaving the Macs alone.
    double modify_data_rate = 0;
    /// After a key goes on air, inject a fresh message MACed under it.
    double replay_rate = 0;
};

/// Drops every Key frame whose chain index falls in [first_index, first_index + count).
struct KeyBlackout {
    std::uint64_t first_index = 0;
    std::uint64_t count = 0;
};

struct EndToEndConfig {
    std::uint64_t n_aircraft = 1;
    double per_copy_loss = 0;
    AdversaryConfig adversary;
    /// Messages per aircraft.
    std::uint64_t duration_packets = 100;
    std::uint64_t rng_seed = 0;
    std::uint64_t d = 10;
    std::uint64_t interval_len = 10;
    unsigned duplicates = 2;
    std::optional<KeyBlackout> key_blackout;
};

struct EndToEndReport {
    AuthStats stats;
    std::uint64_t honest_messages = 0;
    /// Honest messages the bookkeeper says must verify.
    std::uint64_t expected_valid = 0;
    std::uint64_t honest_valid = 0;
    /// Expected but not Valid.
    std::uint64_t missed_expected = 0;
    /// Valid although the bookkeeper did not expect it.
    std::uint64_t unexpected_valid = 0;
    std::uint64_t adversarial_messages = 0;
    std::uint64_t adversarial_frames = 0;
    std::uint64_t replays_injected = 0;
    /// Replayed messages that ended Dropped-Unsafe.
    std::uint64_t replays_dropped_unsafe = 0;
    std::uint64_t frames_on_air = 0;
    std::uint64_t frames_delivered = 0;
    /// Frames the senders emitted, before the adversary touched them.
    std::uint64_t sender_frames = 0;
    /// sender_frames per message sent.
    double overhead = 0;
    protocol::ReceiverCounters receiver;
};

/// Throws ConfigError for a loss outside [0, 1) or zero aircraft.
EndToEndReport run_end_to_end(const EndToEndConfig& config);

/// Wraps the report in a SimResult; analytic/empirical hold the delivered
/// fraction of frames.
SimResult run_end_to_end(std::uint64_t n_aircraft, double per_copy_loss, const AdversaryConfig& adversary,
                         std::uint64_t duration_packets, std::uint64_t rng_seed);

namespace adversary {

/// Same frame with its Mac body replaced by `tag` and parity recomputed.
codec::FrameBits forge_mac(const codec::FrameBits& mac_frame, Tag50 tag);

/// Data frame with the message XORed by `flip` (nonzero, 51 bits) and parity
/// recomputed.
codec::FrameBits modify_data(const codec::FrameBits& data_frame, std::uint64_t flip);

/// `copies` Data frames for `message` followed by `copies` Mac frames tagged
/// under G(disclosed), addressed as `icao`.
std::vector<codec::FrameBits> replay_after_disclosure(Icao icao, Key50 disclosed, Message51 message, unsigned copies,
                                                      std::uint8_t df = codec::kExtendedSquitterDf,
                                                      std::uint8_t capability = 5);

}  // namespace adversary

}  // namespace adsbauth::channel
