#include "adsbauth/receiver.hpp"

#include <algorithm>
#include <string>

#include "adsbauth/errors.hpp"

namespace adsbauth::protocol {

std::string_view status_name(VerdictStatus status) {
    switch (status) {
        case VerdictStatus::Valid: return "valid";
        case VerdictStatus::Invalid: return "invalid";
        case VerdictStatus::DroppedUnsafe: return "dropped_unsafe";
        case VerdictStatus::ExpiredUnpaired: return "expired_unpaired";
    }
    return "unknown";
}

Receiver::Receiver(ReceiverConfig config) : config_(config) {
    if (config_.d == 0) throw ConfigError("disclosure delay must be at least 1");
    if (config_.max_buffer == 0) throw ConfigError("buffer must hold at least one message");
    if (config_.max_macs_per_group == 0) throw ConfigError("groups must hold at least one tag");
}

void Receiver::provision(Icao icao, const crypto::ChainKey& anchor) {
    Peer p;
    p.anchor = anchor;
    p.keys.push_back(anchor.bits);
    peers_.insert_or_assign(icao.value(), std::move(p));
}

bool Receiver::provisioned(Icao icao) const { return peers_.contains(icao.value()); }

Receiver::Peer& Receiver::peer(Icao icao) {
    auto it = peers_.find(icao.value());
    if (it == peers_.end()) throw ConfigError("no anchor provisioned for ICAO " + to_hex(icao));
    return it->second;
}

std::optional<crypto::ChainKey> Receiver::newest_key(Icao icao) const {
    auto it = peers_.find(icao.value());
    if (it == peers_.end()) return std::nullopt;
    return crypto::ChainKey{it->second.keys.back(), it->second.newest_index()};
}

std::size_t Receiver::buffered(Icao icao) const {
    auto it = peers_.find(icao.value());
    return it == peers_.end() ? 0 : it->second.buffered;
}

bool Receiver::safety_check(std::uint64_t entry_interval, std::uint64_t arrival_interval) const {
    return arrival_interval < entry_interval + config_.d;
}

std::uint64_t Receiver::accept_key(Icao icao, Key50 candidate) { return accept_key(peer(icao), candidate); }

std::uint64_t Receiver::accept_key(Peer& p, Key50 candidate) {
    if (std::find(p.keys.rbegin(), p.keys.rend(), candidate) != p.keys.rend()) return p.newest_index();

    const Key50 newest = p.keys.back();
    std::vector<Key50> path;
    Key50 cur = candidate;
    for (std::uint64_t v = 1; v <= config_.max_chain_depth; ++v) {
        path.push_back(cur);
        cur = crypto::F(cur);
        if (cur == newest) {
            // path[0] is the candidate itself, path[v-1] sits right above newest.
            p.keys.insert(p.keys.end(), path.rbegin(), path.rend());
            return p.newest_index();
        }
    }
    throw InvalidKeyError("key does not chain to the newest authenticated key within " +
                          std::to_string(config_.max_chain_depth) + " steps");
}

const crypto::HmacSha256& Receiver::mac_key(Peer& p, std::uint64_t index) {
    auto it = p.mac_keys.find(index);
    if (it == p.mac_keys.end()) {
        it = p.mac_keys.emplace(index, crypto::HmacSha256(crypto::G(p.keys[index - p.anchor.index]))).first;
    }
    return it->second;
}

void Receiver::prune_mac_keys(Peer& p) {
    const std::uint64_t keep = 2 * config_.d + 1;
    const std::uint64_t newest = p.newest_index();
    if (newest <= keep) return;
    p.mac_keys.erase(p.mac_keys.begin(), p.mac_keys.lower_bound(newest - keep));
}

std::vector<Verdict> Receiver::on_frame(const codec::Frame& frame, std::uint64_t position) {
    ++counters_.frames;
    std::vector<Verdict> out;
    if (frame.df != config_.df) {
        ++counters_.non_protocol;
        return out;
    }
    codec::AuthPayload payload;
    try {
        payload = codec::unpack_payload(frame.me);
    } catch (const UnknownPayloadError&) {
        ++counters_.non_protocol;
        return out;
    }
    const Icao icao(frame.icao);
    auto it = peers_.find(icao.value());
    if (it == peers_.end()) {
        ++counters_.unverifiable;
        return out;
    }
    Peer& p = it->second;
    switch (payload.kind) {
        case codec::PayloadKind::Data: on_data(p, icao, Message51(payload.body), position, out); break;
        case codec::PayloadKind::Mac: on_mac(p, Tag50(payload.body)); break;
        case codec::PayloadKind::Key: on_key(p, icao, Key50(payload.body), out); break;
    }
    return out;
}

void Receiver::on_data(Peer& p, Icao icao, Message51 message, std::uint64_t position, std::vector<Verdict>& out) {
    if (!p.last_was_data) {
        close_group(p, icao, out);
        p.pending.emplace_back();
        p.pending.back().newest_at_open = p.newest_index();
        p.last_was_data = true;
    }
    Group& g = p.pending.back();
    for (const Entry& e : g.entries) {
        if (e.message == message) {
            ++counters_.duplicates_absorbed;
            return;
        }
    }
    if (p.buffered >= config_.max_buffer) evict(p, icao, out);
    // Eviction may erase from the middle of the deque.
    p.pending.back().entries.push_back({message, position});
    ++p.buffered;
}

void Receiver::on_mac(Peer& p, Tag50 tag) {
    p.last_was_data = false;
    if (p.pending.empty() || !p.pending.back().open) {
        ++counters_.orphan_macs;
        return;
    }
    Group& g = p.pending.back();
    if (std::find(g.macs.begin(), g.macs.end(), tag) != g.macs.end()) {
        ++counters_.duplicates_absorbed;
        return;
    }
    if (g.macs.size() >= config_.max_macs_per_group) return;
    g.macs.push_back(tag);
    g.claimed.push_back(false);
}

void Receiver::on_key(Peer& p, Icao icao, Key50 key, std::vector<Verdict>& out) {
    p.last_was_data = false;
    close_group(p, icao, out);

    const std::uint64_t before = p.newest_index();
    std::uint64_t index = 0;
    try {
        index = accept_key(p, key);
    } catch (const InvalidKeyError&) {
        ++counters_.invalid_keys;
        return;
    }
    if (index == before) {
        ++counters_.duplicates_absorbed;
        return;
    }
    ++counters_.keys_accepted;
    // Replays of held keys never get here, so this is the key's first appearance.
    for (Group& g : p.pending) {
        if (!g.arrival_bound) g.arrival_bound = index + config_.d - 1;
    }
    sweep(p, icao, out, false);
    prune_mac_keys(p);
}

std::vector<Verdict> Receiver::authenticate_buffered(Icao icao, std::uint64_t key_index) {
    Peer& p = peer(icao);
    if (key_index > p.newest_index()) throw InvalidKeyError("key index has not been authenticated");
    std::vector<Verdict> out;
    close_group(p, icao, out);
    sweep(p, icao, out, false);
    return out;
}

void Receiver::close_group(Peer& p, Icao icao, std::vector<Verdict>& out) {
    if (p.pending.empty() || !p.pending.back().open) return;
    Group& g = p.pending.back();
    g.open = false;
    if (g.macs.empty()) {
        for (Entry& e : g.entries) {
            if (e.decided) continue;
            out.push_back({icao, e.message, VerdictStatus::ExpiredUnpaired, 0, e.seq});
            --p.buffered;
        }
        p.pending.pop_back();
    }
}

void Receiver::evict(Peer& p, Icao icao, std::vector<Verdict>& out) {
    auto has_undecided = [](const Group& g) {
        return std::any_of(g.entries.begin(), g.entries.end(), [](const Entry& e) { return !e.decided; });
    };
    auto victim = std::find_if(p.pending.begin(), p.pending.end(),
                               [&](const Group& g) { return g.macs.empty() && has_undecided(g); });
    if (victim == p.pending.end()) victim = std::find_if(p.pending.begin(), p.pending.end(), has_undecided);
    if (victim == p.pending.end()) return;

    for (Entry& e : victim->entries) {
        if (e.decided) continue;
        e.decided = true;
        out.push_back({icao, e.message, VerdictStatus::ExpiredUnpaired, victim->arrival_bound.value_or(0), e.seq});
        --p.buffered;
        ++counters_.evictions;
        break;
    }
    if (!has_undecided(*victim) && !victim->open) p.pending.erase(victim);
}

void Receiver::sweep(Peer& p, Icao icao, std::vector<Verdict>& out, bool at_end) {
    for (auto it = p.pending.begin(); it != p.pending.end();) {
        if (it->open) {
            ++it;
            continue;
        }
        if (resolve(p, icao, *it, out, at_end)) {
            it = p.pending.erase(it);
        } else {
            ++it;
        }
    }
}

bool Receiver::resolve(Peer& p, Icao icao, Group& g, std::vector<Verdict>& out, bool at_end) {
    auto all_decided = [&] {
        return std::all_of(g.entries.begin(), g.entries.end(), [](const Entry& e) { return e.decided; });
    };
    auto try_key = [&](std::uint64_t c, VerdictStatus status) {
        const crypto::HmacSha256& key = mac_key(p, c);
        for (Entry& e : g.entries) {
            if (e.decided) continue;
            const Tag50 rmac = crypto::hmac50(key, e.message);
            for (std::size_t t = 0; t < g.macs.size(); ++t) {
                if (!crypto::tags_equal(rmac, g.macs[t])) continue;
                e.decided = true;
                g.claimed[t] = true;
                out.push_back({icao, e.message, status, c, e.seq});
                --p.buffered;
                break;
            }
        }
    };
    auto expire_rest = [&](bool invalid, std::uint64_t interval) {
        for (Entry& e : g.entries) {
            if (e.decided) continue;
            e.decided = true;
            out.push_back({icao, e.message, invalid ? VerdictStatus::Invalid : VerdictStatus::ExpiredUnpaired,
                           interval, e.seq});
            --p.buffered;
        }
        return true;
    };

    if (!g.arrival_bound) {
        if (!at_end) return false;
        // No key followed the group, but keys held before it were public.
        const std::uint64_t hi = g.newest_at_open;
        const std::uint64_t lo = std::max(p.anchor.index, hi + 1 > config_.d ? hi + 1 - config_.d : 0);
        for (std::uint64_t c = hi + 1; c-- > lo && !all_decided();) try_key(c, VerdictStatus::DroppedUnsafe);
        return expire_rest(false, 0);
    }

    const std::uint64_t d = config_.d;
    const std::uint64_t u = *g.arrival_bound;
    const std::uint64_t newest = p.newest_index();
    if (newest < u && !at_end) return false;

    // Safe candidates: c + d > u, never the anchor itself. The most recent
    // one is the common case, so go downwards.
    const std::uint64_t safe_lo = std::max(p.anchor.index + 1, u + 1 > d ? u + 1 - d : 0);
    for (std::uint64_t c = std::min(u, newest) + 1; c-- > safe_lo && !all_decided();) {
        g.tried = true;
        try_key(c, VerdictStatus::Valid);
    }
    if (all_decided()) return true;

    // Keys that were already public when the group arrived.
    if (u >= d) {
        const std::uint64_t unsafe_hi = std::min(u - d, newest);
        const std::uint64_t unsafe_lo = std::max(p.anchor.index, u + 1 > 2 * d ? u + 1 - 2 * d : 0);
        for (std::uint64_t c = unsafe_hi + 1; c-- > unsafe_lo && !all_decided();) {
            try_key(c, VerdictStatus::DroppedUnsafe);
        }
    }

    const bool stray_tag = std::find(g.claimed.begin(), g.claimed.end(), false) != g.claimed.end();
    return expire_rest(stray_tag && g.tried, u);
}

std::vector<Verdict> Receiver::finish() {
    std::vector<Verdict> out;
    for (auto& [raw, p] : peers_) {
        const Icao icao(raw);
        close_group(p, icao, out);
        sweep(p, icao, out, true);
        p.last_was_data = false;
    }
    std::sort(out.begin(), out.end(), [](const Verdict& a, const Verdict& b) { return a.seq < b.seq; });
    return out;
}

}  // namespace adsbauth::protocol
