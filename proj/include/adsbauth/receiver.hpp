#pragma once

// Receiver side of delayed key disclosure, one independent state per ICAO.
//
// Frames carry no interval number. The receiver buffers each message group (a
// run of Data frames plus the Mac frames that follow it) and bounds its
// arrival time with the first key frame that advances the chain afterwards:
// K_k is first published at the start of interval k + d, so a group seen
// before it arrived no later than interval u = k + d - 1. Only keys with
// c + d > u (i.e. c > u - d) were still secret then; a tag that matches one of
// them is Valid. A tag that only matches an older, already public key is a
// replay (Dropped-Unsafe); anything else is Invalid.
//
// The bound comes from packet order alone, so lost frames can only make it
// looser, never let an already-published key pass as secret.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adsbauth/bits.hpp"
#include "adsbauth/crypto.hpp"
#include "adsbauth/frame_codec.hpp"

namespace adsbauth::protocol {

enum class VerdictStatus : std::uint8_t { Valid, Invalid, DroppedUnsafe, ExpiredUnpaired };

std::string_view status_name(VerdictStatus status);

struct Verdict {
    Icao icao;
    Message51 message;
    VerdictStatus status;
    /// Interval whose key decided the verdict, else the arrival bound (0 if
    /// no key ever followed the message).
    std::uint64_t interval;
    /// Stream position of the first Data copy.
    std::uint64_t seq;
};

struct ReceiverConfig {
    std::uint64_t d = 10;
    std::uint64_t max_chain_depth = crypto::kDefaultMaxChainDepth;
    /// Buffered messages per ICAO.
    std::size_t max_buffer = 256;
    /// Distinct tags kept per group; further ones are dropped.
    std::size_t max_macs_per_group = 8;
    std::uint8_t df = codec::kExtendedSquitterDf;
};

struct ReceiverCounters {
    std::uint64_t frames = 0;
    /// Frames from an ICAO with no provisioned anchor.
    std::uint64_t unverifiable = 0;
    /// Foreign DF or Type Code.
    std::uint64_t non_protocol = 0;
    std::uint64_t duplicates_absorbed = 0;
    /// Mac frames with no open group to attach to.
    std::uint64_t orphan_macs = 0;
    /// Key frames that do not chain to the newest authenticated key.
    std::uint64_t invalid_keys = 0;
    std::uint64_t keys_accepted = 0;
    std::uint64_t evictions = 0;
};

class Receiver {
public:
    /// Throws ConfigError on a zero d or max_buffer.
    explicit Receiver(ReceiverConfig config = {});

    /// Trusts `anchor` for `icao`, replacing any previous state for it.
    void provision(Icao icao, const crypto::ChainKey& anchor);
    bool provisioned(Icao icao) const;

    /// Feeds one parity-checked frame; `position` is its place in the stream.
    std::vector<Verdict> on_frame(const codec::Frame& frame, std::uint64_t position);

    /// Decides everything still buffered: entries whose safe keys were all
    /// tried become Invalid (or Dropped-Unsafe), the rest Expired-Unpaired.
    std::vector<Verdict> finish();

    /// True iff a Mac that arrived no later than interval `arrival_interval`
    /// can still be trusted for `entry_interval`: entry_interval + d >
    /// arrival_interval, strict because K_i goes on air at the start of i + d.
    bool safety_check(std::uint64_t entry_interval, std::uint64_t arrival_interval) const;

    /// Authenticates a disclosed key against the newest key held for `icao`
    /// and returns its chain index. Keys already held return the newest index.
    /// Throws InvalidKeyError when no F-walk of at most max_chain_depth steps
    /// reaches the newest key, ConfigError for an unprovisioned ICAO.
    std::uint64_t accept_key(Icao icao, Key50 candidate);

    /// Newly decided verdicts after the newest key of `icao` reached key_index.
    std::vector<Verdict> authenticate_buffered(Icao icao, std::uint64_t key_index);

    std::optional<crypto::ChainKey> newest_key(Icao icao) const;
    std::size_t buffered(Icao icao) const;

    const ReceiverConfig& config() const { return config_; }
    const ReceiverCounters& counters() const { return counters_; }

private:
    struct Entry {
        Message51 message;
        std::uint64_t seq;
        bool decided = false;
    };

    struct Group {
        std::vector<Entry> entries;
        std::vector<Tag50> macs;
        /// Tags that matched some entry.
        std::vector<bool> claimed;
        bool open = true;
        /// Latest interval the group can have arrived in; set by the first
        /// chain-advancing key that follows it.
        std::optional<std::uint64_t> arrival_bound;
        /// A safe candidate key was tried against this group.
        bool tried = false;
        /// Newest key already held when the group's first Data frame arrived;
        /// a tag under it or anything older is a replay.
        std::uint64_t newest_at_open = 0;
    };

    struct Peer {
        crypto::ChainKey anchor;
        /// keys[i] is the key at chain index anchor.index + i.
        std::vector<Key50> keys;
        std::deque<Group> pending;
        std::size_t buffered = 0;
        bool last_was_data = false;
        std::map<std::uint64_t, crypto::HmacSha256> mac_keys;

        std::uint64_t newest_index() const { return anchor.index + keys.size() - 1; }
    };

    Peer& peer(Icao icao);
    const crypto::HmacSha256& mac_key(Peer& p, std::uint64_t index);
    std::uint64_t accept_key(Peer& p, Key50 candidate);

    void on_data(Peer& p, Icao icao, Message51 message, std::uint64_t position, std::vector<Verdict>& out);
    void on_mac(Peer& p, Tag50 tag);
    void on_key(Peer& p, Icao icao, Key50 key, std::vector<Verdict>& out);
    void close_group(Peer& p, Icao icao, std::vector<Verdict>& out);
    void evict(Peer& p, Icao icao, std::vector<Verdict>& out);

    /// Decides the group once every safe candidate key is known, or at the
    /// end of the stream. Returns true when nothing is left undecided.
    bool resolve(Peer& p, Icao icao, Group& g, std::vector<Verdict>& out, bool at_end);
    void sweep(Peer& p, Icao icao, std::vector<Verdict>& out, bool at_end);
    void prune_mac_keys(Peer& p);

    ReceiverConfig config_;
    ReceiverCounters counters_;
    std::unordered_map<std::uint32_t, Peer> peers_;
};

}  // namespace adsbauth::protocol
