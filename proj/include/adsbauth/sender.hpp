#pragma once

// Outbound schedule for one aircraft. Each message goes out as `duplicates`
// Data frames followed by `duplicates` Mac frames. Once interval_len messages
// have been sent under K_i the sender moves to interval i+1 and broadcasts
// K_{i+1-d}.
//
// MAC intervals are numbered from 1; K_0 is the public anchor and never keys a
// MAC. With d = 1 every interval's key is published right after the interval.

#include <cstdint>
#include <optional>
#include <vector>

#include "adsbauth/bits.hpp"
#include "adsbauth/crypto.hpp"
#include "adsbauth/frame_codec.hpp"

namespace adsbauth::protocol {

inline constexpr std::uint64_t kDefaultDisclosureDelay = 10;
inline constexpr std::uint64_t kDefaultIntervalLength = 10;
inline constexpr unsigned kDefaultDuplicates = 2;

struct SenderConfig {
    Icao icao;
    std::uint64_t d = kDefaultDisclosureDelay;
    /// Messages (Data/Mac pairs, not copies) per key interval.
    std::uint64_t interval_len = kDefaultIntervalLength;
    unsigned duplicates = kDefaultDuplicates;
    std::uint8_t df = codec::kExtendedSquitterDf;
    std::uint8_t capability = 5;
};

struct SenderState {
    std::uint64_t current_interval = 1;
    std::uint64_t packets_sent_in_interval = 0;
    std::uint64_t next_message_seq = 0;
};

struct Emission {
    codec::FrameBits bits;
    codec::PayloadKind kind;
    /// MAC interval for Data and Mac frames, chain index for Key frames.
    std::uint64_t interval;
    /// Message sequence number for Data and Mac frames.
    std::uint64_t message_seq;
};

class Sender {
public:
    /// Throws ConfigError if d, interval_len or duplicates is zero.
    Sender(SenderConfig config, crypto::KeyChain chain);

    /// Data copies, Mac copies, then the key disclosure if this message closed
    /// the interval. Throws ChainExhaustedError when no key is left for the
    /// current interval; the state is left unchanged in that case.
    std::vector<Emission> emit_message(Message51 message);

    /// Copies of K_{current_interval - d}; empty before interval d.
    std::vector<Emission> disclose_key() const;

    /// Steps through idle intervals until every key that signed a MAC has been
    /// disclosed. Afterwards the sender may keep going in a fresh interval.
    std::vector<Emission> close_session();

    const SenderConfig& config() const { return config_; }
    const SenderState& state() const { return state_; }
    const crypto::KeyChain& chain() const { return chain_; }

    /// Highest interval whose key has signed at least one MAC.
    std::optional<std::uint64_t> last_used_interval() const { return last_used_; }

private:
    Emission make(codec::PayloadKind kind, std::uint64_t body, std::uint64_t interval, std::uint64_t seq) const;
    const crypto::HmacSha256& mac_key();

    SenderConfig config_;
    crypto::KeyChain chain_;
    SenderState state_;
    std::optional<std::uint64_t> last_used_;
    std::optional<std::uint64_t> mac_key_interval_;
    std::optional<crypto::HmacSha256> mac_key_;
};

}  // namespace adsbauth::protocol
