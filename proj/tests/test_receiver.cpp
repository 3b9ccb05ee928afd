#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <random>

#include "adsbauth/end_to_end.hpp"
#include "adsbauth/receiver.hpp"
#include "adsbauth/sender.hpp"

using namespace adsbauth;
using namespace adsbauth::protocol;
using codec::PayloadKind;

namespace {

constexpr std::uint32_t kIcao = 0x4840D6;

Seed test_seed(std::uint8_t fill = 0x5a) {
    Seed s{};
    s.fill(fill);
    return s;
}

struct Harness {
    Sender sender;
    Receiver receiver;
    std::uint64_t position = 0;
    std::vector<Verdict> verdicts;

    Harness(std::uint64_t d, std::uint64_t interval_len, unsigned dup, std::uint64_t chain_len = 200,
            ReceiverConfig rc = {})
        : sender(make_config(d, interval_len, dup), crypto::KeyChain::generate(test_seed(), chain_len)),
          receiver(with_d(rc, d)) {
        receiver.provision(Icao(kIcao), sender.chain().anchor());
    }

    static SenderConfig make_config(std::uint64_t d, std::uint64_t interval_len, unsigned dup) {
        SenderConfig c;
        c.icao = Icao(kIcao);
        c.d = d;
        c.interval_len = interval_len;
        c.duplicates = dup;
        return c;
    }
    static ReceiverConfig with_d(ReceiverConfig rc, std::uint64_t d) {
        rc.d = d;
        return rc;
    }

    void feed(const codec::FrameBits& bits) {
        for (auto& v : receiver.on_frame(codec::decode_frame(bits).frame, position++)) verdicts.push_back(v);
    }
    void feed(const std::vector<Emission>& out, const std::function<bool(const Emission&)>& keep = nullptr) {
        for (const auto& e : out)
            if (!keep || keep(e)) feed(e.bits);
    }
    void feed(const std::vector<codec::FrameBits>& frames) {
        for (const auto& f : frames) feed(f);
    }
    void finish() {
        for (auto& v : receiver.finish()) verdicts.push_back(v);
    }
    std::map<std::uint64_t, VerdictStatus> by_message() const {
        std::map<std::uint64_t, VerdictStatus> m;
        for (const auto& v : verdicts) m[v.message.value()] = v.status;
        return m;
    }
};

}  // namespace

TEST(Receiver, CleanSessionAllValid) {
    Harness h(2, 1, 2);
    for (std::uint64_t i = 1; i <= 3; ++i) h.feed(h.sender.emit_message(Message51(i)));
    h.feed(h.sender.close_session());
    h.finish();
    ASSERT_EQ(h.verdicts.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(h.verdicts[i].status, VerdictStatus::Valid);
        EXPECT_EQ(h.verdicts[i].message.value(), i + 1);
        EXPECT_EQ(h.verdicts[i].interval, i + 1);
    }
    EXPECT_EQ(h.receiver.newest_key(Icao(kIcao))->index, 3u);
    EXPECT_EQ(h.receiver.buffered(Icao(kIcao)), 0u);
}

TEST(Receiver, LongSessionDecidesAsKeysArrive) {
    Harness h(10, 10, 2);
    for (std::uint64_t i = 0; i < 500; ++i) h.feed(h.sender.emit_message(Message51(i + 1000)));
    // Intervals up to the newest disclosed key (41) are decided before the stream ends.
    EXPECT_EQ(h.verdicts.size(), 410u);
    h.feed(h.sender.close_session());
    h.finish();
    ASSERT_EQ(h.verdicts.size(), 500u);
    for (const auto& v : h.verdicts) ASSERT_EQ(v.status, VerdictStatus::Valid);
    EXPECT_EQ(h.receiver.counters().invalid_keys, 0u);
}

TEST(Receiver, ModifiedDataIsInvalid) {
    Harness h(2, 2, 2);
    h.feed(h.sender.emit_message(Message51(1)));
    for (const auto& e : h.sender.emit_message(Message51(2))) {
        h.feed(e.kind == PayloadKind::Data ? channel::adversary::modify_data(e.bits, 0x40) : e.bits);
    }
    h.feed(h.sender.emit_message(Message51(3)));
    h.feed(h.sender.close_session());
    h.finish();
    const auto m = h.by_message();
    EXPECT_EQ(m.at(1), VerdictStatus::Valid);
    EXPECT_EQ(m.at(2 ^ 0x40), VerdictStatus::Invalid);
    EXPECT_FALSE(m.contains(2));
    EXPECT_EQ(m.at(3), VerdictStatus::Valid);
}

TEST(Receiver, ForgedTagIsInvalid) {
    Harness h(3, 1, 2);
    for (const auto& e : h.sender.emit_message(Message51(77))) {
        h.feed(e.kind == PayloadKind::Mac ? channel::adversary::forge_mac(e.bits, Tag50(0x2222)) : e.bits);
    }
    h.feed(h.sender.close_session());
    h.finish();
    ASSERT_EQ(h.verdicts.size(), 1u);
    EXPECT_EQ(h.verdicts[0].status, VerdictStatus::Invalid);
}

TEST(Receiver, DuplicateFramesAreIdempotent) {
    Harness once(3, 2, 1), twice(3, 2, 1);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto a = once.sender.emit_message(Message51(i));
        const auto b = twice.sender.emit_message(Message51(i));
        once.feed(a);
        for (const auto& e : b) {
            twice.feed(e.bits);
            twice.feed(e.bits);
        }
    }
    once.feed(once.sender.close_session());
    twice.feed(twice.sender.close_session());
    once.finish();
    twice.finish();
    ASSERT_EQ(once.verdicts.size(), twice.verdicts.size());
    for (std::size_t i = 0; i < once.verdicts.size(); ++i) {
        EXPECT_EQ(once.verdicts[i].status, VerdictStatus::Valid);
        EXPECT_EQ(twice.verdicts[i].status, VerdictStatus::Valid);
        EXPECT_EQ(once.verdicts[i].message, twice.verdicts[i].message);
        EXPECT_EQ(once.verdicts[i].interval, twice.verdicts[i].interval);
    }
    EXPECT_GT(twice.receiver.counters().duplicates_absorbed, 0u);
}

TEST(Receiver, ReplayUnderDisclosedKeyIsDroppedUnsafe) {
    const std::uint64_t d = 4;
    Harness h(d, 1, 2);
    std::uint64_t replays = 0;
    for (std::uint64_t i = 0; i < 30; ++i) {
        const auto out = h.sender.emit_message(Message51(i));
        h.feed(out);
        if (out.back().kind == PayloadKind::Key && out.back().interval >= 1) {
            const Key50 k = Key50(codec::unpack_payload(codec::parse_fields(out.back().bits).me).body);
            h.feed(channel::adversary::replay_after_disclosure(Icao(kIcao), k, Message51(0x7000 + i), 2));
            ++replays;
        }
    }
    h.feed(h.sender.close_session());
    h.finish();
    std::uint64_t dropped = 0;
    for (const auto& v : h.verdicts) {
        if (v.message.value() >= 0x7000) {
            EXPECT_NE(v.status, VerdictStatus::Valid);
            dropped += v.status == VerdictStatus::DroppedUnsafe ? 1 : 0;
        } else {
            EXPECT_EQ(v.status, VerdictStatus::Valid) << v.message.value();
        }
    }
    EXPECT_GT(replays, 20u);
    EXPECT_EQ(dropped, replays);
}

TEST(Receiver, ReplayAfterTheLastKeyIsDroppedUnsafe) {
    Harness h(3, 1, 1);
    for (std::uint64_t i = 0; i < 10; ++i) h.feed(h.sender.emit_message(Message51(i)));
    const auto tail = h.sender.close_session();
    h.feed(tail);
    const Key50 last(codec::unpack_payload(codec::parse_fields(tail.back().bits).me).body);
    h.feed(channel::adversary::replay_after_disclosure(Icao(kIcao), last, Message51(0x999), 1));
    h.finish();
    const auto m = h.by_message();
    EXPECT_EQ(m.at(0x999), VerdictStatus::DroppedUnsafe);
    EXPECT_EQ(m.at(9), VerdictStatus::Valid);
}

TEST(Receiver, SafetyCheckBoundaryIsStrict) {
    Receiver rx(ReceiverConfig{.d = 10});
    EXPECT_TRUE(rx.safety_check(5, 5));
    EXPECT_TRUE(rx.safety_check(5, 14));
    EXPECT_FALSE(rx.safety_check(5, 15));
    EXPECT_FALSE(rx.safety_check(5, 100));
    Receiver one(ReceiverConfig{.d = 1});
    EXPECT_TRUE(one.safety_check(7, 7));
    EXPECT_FALSE(one.safety_check(7, 8));
}

TEST(Receiver, AcceptKey) {
    const auto chain = crypto::KeyChain::generate(test_seed(1), 200);
    Receiver rx;
    const Icao icao(kIcao);
    EXPECT_THROW(rx.accept_key(icao, chain.at(1).bits), ConfigError);
    rx.provision(icao, chain.anchor());
    EXPECT_EQ(rx.accept_key(icao, chain.at(1).bits), 1u);
    // Skipping two keys is recovered by walking the chain.
    EXPECT_EQ(rx.accept_key(icao, chain.at(4).bits), 4u);
    EXPECT_EQ(rx.newest_key(icao)->bits, chain.at(4).bits);
    // Keys already held are not an error.
    EXPECT_EQ(rx.accept_key(icao, chain.at(2).bits), 4u);
    EXPECT_EQ(rx.accept_key(icao, chain.anchor().bits), 4u);
    // Exactly at and beyond the depth bound.
    EXPECT_EQ(rx.accept_key(icao, chain.at(68).bits), 68u);
    EXPECT_THROW(rx.accept_key(icao, chain.at(68 + 65).bits), InvalidKeyError);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) EXPECT_THROW(rx.accept_key(icao, Key50::truncate(rng())), InvalidKeyError);
    EXPECT_EQ(rx.newest_key(icao)->index, 68u);
}

TEST(Receiver, ForgedKeyFramesAreCounted) {
    Harness h(2, 1, 1);
    h.feed(h.sender.emit_message(Message51(5)));
    h.feed(codec::encode_frame(17, 5, kIcao, codec::pack_payload(codec::AuthPayload::key(Key50(0x12345)))));
    EXPECT_EQ(h.receiver.counters().invalid_keys, 1u);
    h.feed(h.sender.close_session());
    h.finish();
    ASSERT_EQ(h.verdicts.size(), 1u);
    EXPECT_EQ(h.verdicts[0].status, VerdictStatus::Valid);
}

TEST(Receiver, RecoversAfterEightLostKeyIntervals) {
    Harness h(10, 10, 2);
    for (std::uint64_t i = 0; i < 400; ++i) {
        h.feed(h.sender.emit_message(Message51(i)),
               [](const Emission& e) { return e.kind != PayloadKind::Key || e.interval < 5 || e.interval >= 13; });
    }
    h.feed(h.sender.close_session());
    h.finish();
    ASSERT_EQ(h.verdicts.size(), 400u);
    for (const auto& v : h.verdicts) ASSERT_EQ(v.status, VerdictStatus::Valid) << v.message.value();
}

TEST(Receiver, LostMacIsExpired) {
    Harness h(2, 1, 2);
    h.feed(h.sender.emit_message(Message51(1)), [](const Emission& e) { return e.kind != PayloadKind::Mac; });
    h.feed(h.sender.emit_message(Message51(2)));
    h.feed(h.sender.close_session());
    h.finish();
    const auto m = h.by_message();
    EXPECT_EQ(m.at(1), VerdictStatus::ExpiredUnpaired);
    EXPECT_EQ(m.at(2), VerdictStatus::Valid);
}

TEST(Receiver, NoKeyBeforeEndOfStreamIsExpired) {
    Harness h(3, 5, 1);
    h.feed(h.sender.emit_message(Message51(1)));
    h.finish();
    ASSERT_EQ(h.verdicts.size(), 1u);
    EXPECT_EQ(h.verdicts[0].status, VerdictStatus::ExpiredUnpaired);
    EXPECT_EQ(h.verdicts[0].interval, 0u);
}

TEST(Receiver, OrphanMacAndForeignFramesAreCounted) {
    Harness h(2, 1, 1);
    const auto out = h.sender.emit_message(Message51(1));
    h.feed(out[1].bits);
    EXPECT_EQ(h.receiver.counters().orphan_macs, 1u);

    // Unknown aircraft.
    h.feed(codec::encode_frame(17, 5, 0x111111, codec::pack_payload(codec::AuthPayload::data(Message51(3)))));
    EXPECT_EQ(h.receiver.counters().unverifiable, 1u);
    // Ordinary position report and a non-ES downlink format.
    h.feed(codec::encode_frame(17, 5, kIcao, std::uint64_t{11} << 51));
    h.feed(codec::encode_frame(11, 5, kIcao, 0));
    EXPECT_EQ(h.receiver.counters().non_protocol, 2u);
    EXPECT_EQ(h.receiver.counters().frames, 4u);
}

TEST(Receiver, BufferOverflowEvictsOldest) {
    ReceiverConfig rc;
    rc.max_buffer = 4;
    Harness h(2, 1, 1, 200, rc);
    for (std::uint64_t i = 0; i < 6; ++i) {
        h.feed(codec::encode_frame(17, 5, kIcao, codec::pack_payload(codec::AuthPayload::data(Message51(100 + i)))));
    }
    EXPECT_EQ(h.receiver.counters().evictions, 2u);
    EXPECT_EQ(h.receiver.buffered(Icao(kIcao)), 4u);
    ASSERT_EQ(h.verdicts.size(), 2u);
    EXPECT_EQ(h.verdicts[0].message.value(), 100u);
    EXPECT_EQ(h.verdicts[1].message.value(), 101u);
    for (const auto& v : h.verdicts) EXPECT_EQ(v.status, VerdictStatus::ExpiredUnpaired);
    h.finish();
    EXPECT_EQ(h.verdicts.size(), 6u);
}

TEST(Receiver, ConfigValidation) {
    EXPECT_THROW(Receiver(ReceiverConfig{.d = 0}), ConfigError);
    ReceiverConfig rc;
    rc.max_buffer = 0;
    EXPECT_THROW(Receiver{rc}, ConfigError);
    EXPECT_EQ(status_name(VerdictStatus::DroppedUnsafe), "dropped_unsafe");
}
