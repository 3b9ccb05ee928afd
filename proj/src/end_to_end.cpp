#include "adsbauth/end_to_end.hpp"

#include <unordered_map>

#include "adsbauth/crypto.hpp"
#include "adsbauth/errors.hpp"
#include "adsbauth/philox.hpp"
#include "adsbauth/sender.hpp"

namespace adsbauth::channel {

namespace adversary {

codec::FrameBits forge_mac(const codec::FrameBits& mac_frame, Tag50 tag) {
    const codec::Frame f = codec::parse_fields(mac_frame);
    const std::uint64_t me = codec::pack_payload(codec::AuthPayload::mac(tag));
    return codec::encode_frame(f.df, f.capability, f.icao, me);
}

codec::FrameBits modify_data(const codec::FrameBits& data_frame, std::uint64_t flip) {
    if (flip == 0) throw ConfigError("modification must flip at least one bit");
    const codec::Frame f = codec::parse_fields(data_frame);
    const codec::AuthPayload p = codec::unpack_payload(f.me);
    if (p.kind != codec::PayloadKind::Data) throw ConfigError("only Data frames carry a message");
    const Message51 changed(p.body ^ Message51(flip).value());
    return codec::encode_frame(f.df, f.capability, f.icao, codec::pack_payload(codec::AuthPayload::data(changed)));
}

std::vector<codec::FrameBits> replay_after_disclosure(Icao icao, Key50 disclosed, Message51 message, unsigned copies,
                                                      std::uint8_t df, std::uint8_t capability) {
    const Tag50 tag = crypto::hmac50(crypto::G(disclosed), message);
    std::vector<codec::FrameBits> out;
    for (unsigned c = 0; c < copies; ++c) {
        out.push_back(codec::encode_frame(df, capability, icao.value(),
                                          codec::pack_payload(codec::AuthPayload::data(message))));
    }
    for (unsigned c = 0; c < copies; ++c) {
        out.push_back(
            codec::encode_frame(df, capability, icao.value(), codec::pack_payload(codec::AuthPayload::mac(tag))));
    }
    return out;
}

}  // namespace adversary

namespace {

enum class Origin : std::uint8_t { Honest, Forged, Modified, Replay };

struct Record {
    Origin origin;
    std::size_t aircraft;
    std::uint64_t interval;
    std::uint32_t data_delivered = 0;
    std::uint32_t mac_delivered = 0;
    /// Index of the first chain-advancing key delivered after the message.
    std::optional<std::uint64_t> bound_key;
    std::optional<protocol::VerdictStatus> verdict;
};

struct Aircraft {
    protocol::Sender sender;
    /// Newest key the receiver can hold, replayed from delivered Key frames.
    std::uint64_t newest = 0;
    std::vector<std::size_t> awaiting_key;
};

struct OnAir {
    codec::FrameBits bits;
    codec::PayloadKind kind;
    std::size_t record;  // meaningful for Data and Mac
    std::uint64_t key_index;  // meaningful for Key
    bool adversarial;
};

Message51 random_message(PhiloxStream& rng) { return Message51(rng.next_u64() >> 13); }

}  // namespace

EndToEndReport run_end_to_end(const EndToEndConfig& config) {
    if (!(config.per_copy_loss >= 0 && config.per_copy_loss < 1)) throw ConfigError("loss must lie in [0, 1)");
    if (config.n_aircraft == 0) throw ConfigError("at least one aircraft is required");
    if (config.n_aircraft > 0xFFFFFF) throw ConfigError("too many aircraft for 24-bit addresses");

    PhiloxStream setup(config.rng_seed, 0);
    PhiloxStream channel(config.rng_seed, 1);
    PhiloxStream attacker(config.rng_seed, 2);

    protocol::ReceiverConfig rc;
    rc.d = config.d;
    protocol::Receiver receiver(rc);

    // Enough keys for every interval the session touches, plus the tail needed
    // to disclose the last one.
    const std::uint64_t chain_len = config.duration_packets / config.interval_len + config.d + 2;
    std::vector<Aircraft> fleet;
    fleet.reserve(config.n_aircraft);
    for (std::uint64_t a = 0; a < config.n_aircraft; ++a) {
        Seed seed{};
        for (auto& b : seed) b = static_cast<std::uint8_t>(setup.next_u32());
        auto chain = crypto::KeyChain::generate(seed, chain_len);
        const Icao icao(static_cast<std::uint32_t>(0x400000 + a) & 0xFFFFFF);
        receiver.provision(icao, chain.anchor());
        protocol::SenderConfig sc;
        sc.icao = icao;
        sc.d = config.d;
        sc.interval_len = config.interval_len;
        sc.duplicates = config.duplicates;
        fleet.push_back({protocol::Sender(sc, std::move(chain)), 0, {}});
    }

    EndToEndReport report;
    std::vector<Record> records;
    std::unordered_map<std::uint64_t, std::size_t> data_position;
    std::uint64_t position = 0;
    const AdversaryConfig& adv = config.adversary;

    auto consume = [&](const protocol::Verdict& v) {
        auto it = data_position.find(v.seq);
        if (it == data_position.end()) return;
        Record& r = records[it->second];
        r.verdict = v.status;
    };

    auto deliver = [&](Aircraft& ac, const OnAir& f) {
        ++report.frames_on_air;
        if (f.adversarial) ++report.adversarial_frames;
        if (f.kind == codec::PayloadKind::Key && config.key_blackout) {
            const auto& b = *config.key_blackout;
            if (f.key_index >= b.first_index && f.key_index < b.first_index + b.count) return;
        }
        if (channel.bernoulli(config.per_copy_loss)) return;
        ++report.frames_delivered;
        const std::uint64_t pos = position++;

        switch (f.kind) {
            case codec::PayloadKind::Data:
                if (records[f.record].data_delivered++ == 0) data_position.emplace(pos, f.record);
                break;
            case codec::PayloadKind::Mac: ++records[f.record].mac_delivered; break;
            case codec::PayloadKind::Key:
                if (f.key_index > ac.newest && f.key_index - ac.newest <= rc.max_chain_depth) {
                    ac.newest = f.key_index;
                    for (std::size_t id : ac.awaiting_key) records[id].bound_key = f.key_index;
                    ac.awaiting_key.clear();
                }
                break;
        }
        const codec::DecodeResult decoded = codec::decode_frame(f.bits);
        for (const auto& v : receiver.on_frame(decoded.frame, pos)) consume(v);
    };

    auto add_record = [&](Aircraft& ac, Origin origin, std::uint64_t interval) {
        Record r{};
        r.origin = origin;
        r.aircraft = static_cast<std::size_t>(&ac - fleet.data());
        r.interval = interval;
        records.push_back(r);
        ac.awaiting_key.push_back(records.size() - 1);
        return records.size() - 1;
    };

    auto transmit = [&](Aircraft& ac, const std::vector<protocol::Emission>& emissions) {
        std::optional<std::size_t> current;
        Origin origin = Origin::Honest;
        Message51 forged_message(0);
        Tag50 forged_tag(0);
        std::uint64_t flip = 0;
        report.sender_frames += emissions.size();
        for (const protocol::Emission& e : emissions) {
            OnAir f{e.bits, e.kind, 0, e.interval, false};
            if (e.kind == codec::PayloadKind::Key) {
                deliver(ac, f);
                continue;
            }
            if (!current) {
                const double r = attacker.next_double();
                origin = r < adv.forge_mac_rate                          ? Origin::Forged
                         : r < adv.forge_mac_rate + adv.modify_data_rate ? Origin::Modified
                                                                         : Origin::Honest;
                if (origin == Origin::Honest) ++report.honest_messages;
                else ++report.adversarial_messages;
                current = add_record(ac, origin, e.interval);
                if (origin == Origin::Forged) {
                    forged_message = random_message(attacker);
                    forged_tag = Tag50(attacker.next_u64() >> 14);
                } else if (origin == Origin::Modified) {
                    do flip = attacker.next_u64() >> 13;
                    while (flip == 0);
                }
            }
            f.record = *current;
            if (origin == Origin::Forged) {
                f.adversarial = true;
                if (e.kind == codec::PayloadKind::Data) {
                    const auto msg = codec::unpack_payload(codec::parse_fields(e.bits).me).body;
                    f.bits = adversary::modify_data(e.bits, msg ^ forged_message.value());
                } else {
                    f.bits = adversary::forge_mac(e.bits, forged_tag);
                }
            } else if (origin == Origin::Modified && e.kind == codec::PayloadKind::Data) {
                f.adversarial = true;
                f.bits = adversary::modify_data(e.bits, flip);
            }
            deliver(ac, f);
        }
        // Key frames are always the tail of a batch; replays follow them.
        if (emissions.empty() || emissions.back().kind != codec::PayloadKind::Key) return;
        const std::uint64_t disclosed = emissions.back().interval;
        if (disclosed == 0 || !attacker.bernoulli(adv.replay_rate)) return;
        const Message51 m = random_message(attacker);
        const std::size_t id = add_record(ac, Origin::Replay, disclosed);
        ++report.adversarial_messages;
        ++report.replays_injected;
        const auto frames = adversary::replay_after_disclosure(
            ac.sender.config().icao, ac.sender.chain().at(disclosed).bits, m, config.duplicates);
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const auto kind = i < config.duplicates ? codec::PayloadKind::Data : codec::PayloadKind::Mac;
            deliver(ac, {frames[i], kind, id, 0, true});
        }
    };

    for (std::uint64_t step = 0; step < config.duration_packets; ++step) {
        for (Aircraft& ac : fleet) transmit(ac, ac.sender.emit_message(random_message(setup)));
    }
    for (Aircraft& ac : fleet) {
        // close_session may emit several disclosures; treat each as its own batch.
        const auto tail = ac.sender.close_session();
        for (std::size_t i = 0; i < tail.size(); i += config.duplicates) {
            std::vector<protocol::Emission> batch(tail.begin() + static_cast<std::ptrdiff_t>(i),
                                                  tail.begin() + static_cast<std::ptrdiff_t>(i + config.duplicates));
            transmit(ac, batch);
        }
    }
    for (const auto& v : receiver.finish()) consume(v);

    for (const Record& r : records) {
        const bool honest = r.origin == Origin::Honest;
        if (r.verdict) {
            switch (*r.verdict) {
                case protocol::VerdictStatus::Valid: ++report.stats.valid; break;
                case protocol::VerdictStatus::Invalid: ++report.stats.invalid; break;
                case protocol::VerdictStatus::DroppedUnsafe: ++report.stats.dropped_unsafe; break;
                case protocol::VerdictStatus::ExpiredUnpaired: ++report.stats.expired; break;
            }
        }
        const bool valid = r.verdict == protocol::VerdictStatus::Valid;
        if (!honest) {
            if (valid) ++report.stats.forged_accepted;
            if (r.origin == Origin::Replay && r.verdict == protocol::VerdictStatus::DroppedUnsafe) {
                ++report.replays_dropped_unsafe;
            }
            continue;
        }
        const bool expected = r.data_delivered > 0 && r.mac_delivered > 0 && r.bound_key &&
                              *r.bound_key <= r.interval && fleet[r.aircraft].newest >= r.interval;
        if (valid) ++report.honest_valid;
        if (expected) ++report.expected_valid;
        if (expected && !valid) ++report.missed_expected;
        if (valid && !expected) ++report.unexpected_valid;
    }
    report.stats.messages = report.honest_messages;
    const std::uint64_t sent = config.n_aircraft * config.duration_packets;
    report.overhead = sent == 0 ? 0.0 : static_cast<double>(report.sender_frames) / static_cast<double>(sent);
    report.receiver = receiver.counters();
    return report;
}

SimResult run_end_to_end(std::uint64_t n_aircraft, double per_copy_loss, const AdversaryConfig& adversary,
                         std::uint64_t duration_packets, std::uint64_t rng_seed) {
    EndToEndConfig config;
    config.n_aircraft = n_aircraft;
    config.per_copy_loss = per_copy_loss;
    config.adversary = adversary;
    config.duration_packets = duration_packets;
    config.rng_seed = rng_seed;
    const EndToEndReport report = run_end_to_end(config);
    SimResult result;
    result.trials = report.frames_on_air;
    result.analytic_p = 1.0 - per_copy_loss;
    result.empirical_p = report.frames_on_air == 0 ? 0.0
                                                   : static_cast<double>(report.frames_delivered) /
                                                         static_cast<double>(report.frames_on_air);
    result.ci95_halfwidth = ci95_halfwidth(result.empirical_p, result.trials);
    result.auth_stats = report.stats;
    return result;
}

}  // namespace adsbauth::channel
