#include "adsbauth/sender.hpp"

#include <string>

#include "adsbauth/errors.hpp"

namespace adsbauth::protocol {

Sender::Sender(SenderConfig config, crypto::KeyChain chain) : config_(config), chain_(std::move(chain)) {
    if (config_.d == 0) throw ConfigError("disclosure delay must be at least 1");
    if (config_.interval_len == 0) throw ConfigError("interval length must be at least 1");
    if (config_.duplicates == 0) throw ConfigError("duplicates must be at least 1");
    if (config_.df > 31) throw ConfigError("DF is a 5-bit field");
    if (config_.capability > 7) throw ConfigError("CA is a 3-bit field");
}

Emission Sender::make(codec::PayloadKind kind, std::uint64_t body, std::uint64_t interval, std::uint64_t seq) const {
    const std::uint64_t me = codec::pack_payload({kind, body});
    return {codec::encode_frame(config_.df, config_.capability, config_.icao.value(), me), kind, interval, seq};
}

const crypto::HmacSha256& Sender::mac_key() {
    if (mac_key_interval_ != state_.current_interval) {
        mac_key_.emplace(crypto::G(chain_.at(state_.current_interval).bits));
        mac_key_interval_ = state_.current_interval;
    }
    return *mac_key_;
}

std::vector<Emission> Sender::emit_message(Message51 message) {
    if (state_.current_interval > chain_.last_index()) {
        throw ChainExhaustedError("key chain exhausted at interval " + std::to_string(state_.current_interval));
    }
    const Tag50 tag = crypto::hmac50(mac_key(), message);
    const std::uint64_t seq = state_.next_message_seq;

    std::vector<Emission> out;
    out.reserve(3 * config_.duplicates);
    for (unsigned c = 0; c < config_.duplicates; ++c) {
        out.push_back(make(codec::PayloadKind::Data, message.value(), state_.current_interval, seq));
    }
    for (unsigned c = 0; c < config_.duplicates; ++c) {
        out.push_back(make(codec::PayloadKind::Mac, tag.value(), state_.current_interval, seq));
    }

    last_used_ = state_.current_interval;
    ++state_.next_message_seq;
    if (++state_.packets_sent_in_interval == config_.interval_len) {
        ++state_.current_interval;
        state_.packets_sent_in_interval = 0;
        for (auto& e : disclose_key()) out.push_back(e);
    }
    return out;
}

std::vector<Emission> Sender::disclose_key() const {
    if (state_.current_interval < config_.d) return {};
    const std::uint64_t index = state_.current_interval - config_.d;
    const crypto::ChainKey key = chain_.at(index);
    std::vector<Emission> out;
    for (unsigned c = 0; c < config_.duplicates; ++c) {
        out.push_back(make(codec::PayloadKind::Key, key.bits.value(), index, 0));
    }
    return out;
}

std::vector<Emission> Sender::close_session() {
    std::vector<Emission> out;
    if (!last_used_) return out;
    while (state_.current_interval < *last_used_ + config_.d) {
        ++state_.current_interval;
        state_.packets_sent_in_interval = 0;
        for (auto& e : disclose_key()) out.push_back(e);
    }
    return out;
}

}  // namespace adsbauth::protocol
