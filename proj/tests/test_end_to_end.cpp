#include <gtest/gtest.h>

#include "adsbauth/end_to_end.hpp"

using namespace adsbauth;
using namespace adsbauth::channel;

TEST(EndToEnd, LosslessRunVerifiesEverything) {
    EndToEndConfig c;
    c.n_aircraft = 3;
    c.duration_packets = 300;
    c.rng_seed = 1;
    const auto r = run_end_to_end(c);
    EXPECT_EQ(r.honest_messages, 900u);
    EXPECT_EQ(r.stats.valid, 900u);
    EXPECT_EQ(r.expected_valid, 900u);
    EXPECT_EQ(r.missed_expected, 0u);
    EXPECT_EQ(r.unexpected_valid, 0u);
    EXPECT_EQ(r.frames_on_air, r.frames_delivered);
    // 2 Data + 2 Mac per message, 2 key copies per 10 messages.
    EXPECT_NEAR(r.overhead, 4.2, 0.1);
    EXPECT_EQ(r.receiver.invalid_keys, 0u);
}

TEST(EndToEnd, LossyRunMatchesBookkeeper) {
    EndToEndConfig c;
    c.n_aircraft = 4;
    c.duration_packets = 1000;
    c.per_copy_loss = 0.3;
    c.rng_seed = 2;
    const auto r = run_end_to_end(c);
    EXPECT_EQ(r.missed_expected, 0u);
    EXPECT_EQ(r.unexpected_valid, 0u);
    EXPECT_EQ(r.honest_valid, r.expected_valid);
    EXPECT_GT(r.expected_valid, 3000u);
    const double delivered = static_cast<double>(r.frames_delivered) / static_cast<double>(r.frames_on_air);
    EXPECT_NEAR(delivered, 0.7, 0.01);
}

TEST(EndToEnd, AdversaryNeverGetsValid) {
    EndToEndConfig c;
    c.n_aircraft = 3;
    c.duration_packets = 600;
    c.rng_seed = 3;
    c.adversary = {0.2, 0.2, 0.5};
    const auto r = run_end_to_end(c);
    EXPECT_EQ(r.stats.forged_accepted, 0u);
    EXPECT_GT(r.adversarial_messages, 500u);
    EXPECT_GT(r.replays_injected, 50u);
    EXPECT_EQ(r.replays_dropped_unsafe, r.replays_injected);
    EXPECT_EQ(r.missed_expected, 0u);
    EXPECT_EQ(r.unexpected_valid, 0u);
}

TEST(EndToEnd, KeyBlackoutIsRecovered) {
    EndToEndConfig c;
    c.n_aircraft = 2;
    c.duration_packets = 400;
    c.rng_seed = 4;
    c.key_blackout = KeyBlackout{5, 8};
    const auto r = run_end_to_end(c);
    EXPECT_EQ(r.stats.valid, 800u);
    EXPECT_EQ(r.missed_expected, 0u);
}

TEST(EndToEnd, DeterministicInSeed) {
    EndToEndConfig c;
    c.n_aircraft = 2;
    c.duration_packets = 200;
    c.per_copy_loss = 0.2;
    c.adversary.replay_rate = 0.3;
    c.rng_seed = 9;
    const auto a = run_end_to_end(c);
    const auto b = run_end_to_end(c);
    EXPECT_EQ(a.stats.valid, b.stats.valid);
    EXPECT_EQ(a.stats.invalid, b.stats.invalid);
    EXPECT_EQ(a.frames_delivered, b.frames_delivered);
    c.rng_seed = 10;
    EXPECT_NE(run_end_to_end(c).frames_delivered, a.frames_delivered);
}

TEST(EndToEnd, SimResultWrapper) {
    const SimResult r = run_end_to_end(2, 0.1, {}, 100, 5);
    ASSERT_TRUE(r.auth_stats);
    EXPECT_EQ(r.auth_stats->messages, 200u);
    EXPECT_DOUBLE_EQ(r.analytic_p, 0.9);
    EXPECT_NEAR(r.empirical_p, 0.9, 4 * r.ci95_halfwidth + 1e-9);
}

TEST(EndToEnd, RejectsBadConfig) {
    EndToEndConfig c;
    c.per_copy_loss = 1.0;
    EXPECT_THROW(run_end_to_end(c), ConfigError);
    c.per_copy_loss = 0;
    c.n_aircraft = 0;
    EXPECT_THROW(run_end_to_end(c), ConfigError);
}

TEST(Adversary, FrameHelpers) {
    const auto data = codec::encode_frame(17, 5, 0x123456, codec::pack_payload(codec::AuthPayload::data(Message51(8))));
    const auto mac = codec::encode_frame(17, 5, 0x123456, codec::pack_payload(codec::AuthPayload::mac(Tag50(1))));
    const auto moved = adversary::modify_data(data, 3);
    EXPECT_EQ(codec::syndrome(moved), 0u);
    EXPECT_EQ(codec::unpack_payload(codec::parse_fields(moved).me).body, 11u);
    const auto forged = adversary::forge_mac(mac, Tag50(99));
    EXPECT_EQ(codec::syndrome(forged), 0u);
    EXPECT_EQ(codec::unpack_payload(codec::parse_fields(forged).me), codec::AuthPayload::mac(Tag50(99)));
    EXPECT_THROW(adversary::modify_data(data, 0), ConfigError);
    EXPECT_THROW(adversary::modify_data(mac, 1), ConfigError);

    const Key50 k(0x1234);
    const auto replay = adversary::replay_after_disclosure(Icao(0x123456), k, Message51(5), 2);
    ASSERT_EQ(replay.size(), 4u);
    EXPECT_EQ(codec::unpack_payload(codec::parse_fields(replay[3]).me),
              codec::AuthPayload::mac(crypto::hmac50(crypto::G(k), Message51(5))));
}
