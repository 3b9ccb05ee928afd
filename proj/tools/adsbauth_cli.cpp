// adsbauth: key chains, signing, verification and channel simulation.
//
// Exit codes: 0 success, 1 usage or malformed input, 2 integrity or
// verification failure, 3 I/O.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "adsbauth/bits.hpp"
#include "adsbauth/capture.hpp"
#include "adsbauth/channel_sim.hpp"
#include "adsbauth/crypto.hpp"
#include "adsbauth/end_to_end.hpp"
#include "adsbauth/errors.hpp"
#include "adsbauth/frame_codec.hpp"
#include "adsbauth/receiver.hpp"
#include "adsbauth/scenario.hpp"
#include "adsbauth/sender.hpp"
#include "json.hpp"

namespace {

using namespace adsbauth;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIntegrity = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("cannot write " + path);
}

json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        throw FormatError(what + " is not valid JSON");
    }
}

std::string json_string(const json& obj, const char* key, const std::string& what) {
    if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_string()) {
        throw FormatError(what + " needs a string field '" + key + "'");
    }
    return obj.at(key).get<std::string>();
}

std::uint64_t json_uint(const json& obj, const char* key, const std::string& what) {
    if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number_unsigned()) {
        throw FormatError(what + " needs a non-negative integer field '" + key + "'");
    }
    return obj.at(key).get<std::uint64_t>();
}

Icao parse_icao(const std::string& hex) { return Icao(parse_hex_fixed(hex, 6)); }

// ------------------------------------------------------------------ keygen

struct KeygenOptions {
    std::string seed_hex;
    std::uint64_t length = 0;
    std::string icao;
    std::string out = "-";
    std::string anchors_out;
};

int run_keygen(const KeygenOptions& o) {
    if (o.length == 0) throw ConfigError("--length must be at least 1");
    Seed seed{};
    if (o.seed_hex.empty()) {
        std::random_device rd;
        for (auto& b : seed) b = static_cast<std::uint8_t>(rd());
    } else {
        seed = seed_from_hex(o.seed_hex);
    }
    const auto chain = crypto::KeyChain::generate(seed, o.length);
    json file;
    file["seed"] = seed_to_hex(seed);
    file["length"] = o.length;
    file["anchor"] = to_hex(chain.anchor().bits);
    file["anchor_index"] = 0;
    if (!o.icao.empty()) file["icao"] = to_hex(parse_icao(o.icao));
    write_output(o.out, file.dump(2) + "\n");

    if (!o.anchors_out.empty()) {
        if (o.icao.empty()) throw ConfigError("--anchors-out needs --icao");
        json anchors = json::array();
        anchors.push_back({{"icao", to_hex(parse_icao(o.icao))}, {"anchor_hex", file["anchor"]}, {"anchor_index", 0}});
        write_output(o.anchors_out, anchors.dump(2) + "\n");
    }
    return kExitOk;
}

// ------------------------------------------------------------------ sign

struct SignOptions {
    std::string chain;
    std::uint64_t d = protocol::kDefaultDisclosureDelay;
    std::uint64_t interval = protocol::kDefaultIntervalLength;
    unsigned duplicates = protocol::kDefaultDuplicates;
    std::string icao;
    unsigned df = codec::kExtendedSquitterDf;
    bool close = false;
};

int run_sign(const SignOptions& o) {
    const json chain_file = parse_json_text(read_file(o.chain), "chain file");
    const Seed seed = seed_from_hex(json_string(chain_file, "seed", "chain file"));
    const std::uint64_t length = json_uint(chain_file, "length", "chain file");
    auto chain = crypto::KeyChain::generate(seed, length);
    if (chain_file.contains("anchor") &&
        parse_hex_left_aligned(json_string(chain_file, "anchor", "chain file"), 50) != chain.anchor().bits.value()) {
        throw FormatError("chain file anchor does not match its seed");
    }

    std::optional<Icao> icao;
    if (!o.icao.empty()) {
        icao = parse_icao(o.icao);
    } else if (chain_file.contains("icao")) {
        icao = parse_icao(json_string(chain_file, "icao", "chain file"));
    }

    std::optional<protocol::Sender> sender;
    auto make_sender = [&](Icao id) {
        protocol::SenderConfig sc;
        sc.icao = id;
        sc.d = o.d;
        sc.interval_len = o.interval;
        sc.duplicates = o.duplicates;
        sc.df = static_cast<std::uint8_t>(o.df);
        sender.emplace(sc, chain);
    };
    if (icao) make_sender(*icao);

    auto emit = [](const std::vector<protocol::Emission>& frames) {
        for (const auto& e : frames) std::cout << capture::format_line(e.bits) << '\n';
    };

    std::uint64_t skipped = 0;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(std::cin, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Message51 message(0);
        Icao from(0);
        try {
            const json msg = json::parse(line);
            message = Message51(parse_hex_left_aligned(json_string(msg, "message_hex", "message"), 51));
            from = parse_icao(json_string(msg, "icao", "message"));
        } catch (const std::exception& e) {
            std::cerr << "line " << line_no << ": skipped: " << e.what() << '\n';
            ++skipped;
            continue;
        }
        if (!sender) make_sender(from);
        if (from != sender->config().icao) {
            std::cerr << "line " << line_no << ": skipped: ICAO " << to_hex(from) << " does not own this chain\n";
            ++skipped;
            continue;
        }
        try {
            emit(sender->emit_message(message));
        } catch (const ChainExhaustedError& e) {
            std::cout.flush();
            std::cerr << "error: " << e.what() << '\n';
            return kExitIntegrity;
        }
    }
    if (std::cin.bad()) throw IoError("cannot read stdin");
    if (o.close && sender) emit(sender->close_session());
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return skipped == 0 ? kExitOk : kExitUsage;
}

// ------------------------------------------------------------------ verify

struct VerifyOptions {
    std::string anchors;
    std::uint64_t d = protocol::kDefaultDisclosureDelay;
    std::uint64_t max_depth = crypto::kDefaultMaxChainDepth;
    unsigned max_correct = 1;
    unsigned df = codec::kExtendedSquitterDf;
    bool strict_unverifiable = false;
};

json verdict_json(const protocol::Verdict& v) {
    json j;
    j["icao"] = to_hex(v.icao);
    j["seq"] = v.seq;
    j["status"] = std::string(protocol::status_name(v.status));
    j["interval"] = v.interval;
    j["message"] = to_hex(v.message);
    return j;
}

int run_verify(const VerifyOptions& o) {
    protocol::ReceiverConfig rc;
    rc.d = o.d;
    rc.max_chain_depth = o.max_depth;
    rc.df = static_cast<std::uint8_t>(o.df);
    protocol::Receiver receiver(rc);

    const json anchors = parse_json_text(read_file(o.anchors), "anchors file");
    if (!anchors.is_array()) throw FormatError("anchors file must be a JSON array");
    for (const auto& a : anchors) {
        const Icao icao = parse_icao(json_string(a, "icao", "anchor"));
        const Key50 key(parse_hex_left_aligned(json_string(a, "anchor_hex", "anchor"), 50));
        receiver.provision(icao, {key, json_uint(a, "anchor_index", "anchor")});
    }

    std::uint64_t counts[4] = {0, 0, 0, 0};
    std::uint64_t malformed = 0;
    std::uint64_t corrupt = 0;
    std::uint64_t corrected = 0;
    auto report = [&](const std::vector<protocol::Verdict>& verdicts) {
        for (const auto& v : verdicts) {
            ++counts[static_cast<int>(v.status)];
            std::cout << verdict_json(v).dump() << '\n';
        }
    };

    std::string line;
    std::uint64_t position = 0;
    while (std::getline(std::cin, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        capture::CaptureLine parsed;
        try {
            parsed = capture::parse_line(line);
        } catch (const FormatError&) {
            ++malformed;
            continue;
        }
        const std::uint64_t pos = position++;
        codec::DecodeResult decoded;
        try {
            decoded = codec::decode_frame(parsed.bits, o.max_correct);
        } catch (const IntegrityError&) {
            ++corrupt;
            continue;
        }
        if (decoded.corrected_bits > 0) ++corrected;
        report(receiver.on_frame(decoded.frame, pos));
    }
    if (std::cin.bad()) throw IoError("cannot read stdin");
    report(receiver.finish());

    const auto& c = receiver.counters();
    json summary;
    summary["valid"] = counts[static_cast<int>(protocol::VerdictStatus::Valid)];
    summary["invalid"] = counts[static_cast<int>(protocol::VerdictStatus::Invalid)];
    summary["dropped_unsafe"] = counts[static_cast<int>(protocol::VerdictStatus::DroppedUnsafe)];
    summary["expired"] = counts[static_cast<int>(protocol::VerdictStatus::ExpiredUnpaired)];
    summary["malformed"] = malformed;
    summary["corrupt"] = corrupt;
    summary["corrected"] = corrected;
    summary["unverifiable"] = c.unverifiable;
    summary["non_protocol"] = c.non_protocol;
    summary["invalid_keys"] = c.invalid_keys;
    std::cout << json{{"summary", summary}}.dump() << '\n';
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");

    const bool failed = summary["invalid"].get<std::uint64_t>() + summary["dropped_unsafe"].get<std::uint64_t>() +
                            c.invalid_keys >
                        0;
    if (failed) return kExitIntegrity;
    if (o.strict_unverifiable && c.unverifiable > 0) return kExitIntegrity;
    return kExitOk;
}

// ------------------------------------------------------------------ collide

struct CollideOptions {
    std::string config;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

int run_collide(const CollideOptions& o) {
    const auto cfg = channel::parse_collide_config(read_file(o.config));
    const std::uint64_t trials = o.trials.value_or(cfg.trials.value_or(1'000'000));
    if (trials == 0) throw ConfigError("--trials must be positive");
    const std::uint64_t seed = o.seed.value_or(cfg.seed.value_or(0));
    channel::McOptions mc;
    mc.mode = cfg.mode;
    mc.threads = o.threads;
    write_output("-", channel::sweep_csv(channel::sweep_fig4(cfg.n_range, cfg.scenarios, trials, seed, mc)));
    return kExitOk;
}

// ------------------------------------------------------------------ simulate

struct SimulateOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateOptions& o) {
    auto cfg = channel::parse_simulate_config(read_file(o.config));
    if (o.seed) cfg.rng_seed = *o.seed;
    const auto r = channel::run_end_to_end(cfg);
    json out;
    out["messages"] = r.honest_messages;
    out["valid"] = r.stats.valid;
    out["invalid"] = r.stats.invalid;
    out["dropped_unsafe"] = r.stats.dropped_unsafe;
    out["expired"] = r.stats.expired;
    out["forged_accepted"] = r.stats.forged_accepted;
    out["expected_valid"] = r.expected_valid;
    out["honest_valid"] = r.honest_valid;
    out["missed_expected"] = r.missed_expected;
    out["unexpected_valid"] = r.unexpected_valid;
    out["adversarial_messages"] = r.adversarial_messages;
    out["adversarial_frames"] = r.adversarial_frames;
    out["replays_injected"] = r.replays_injected;
    out["replays_dropped_unsafe"] = r.replays_dropped_unsafe;
    out["frames_on_air"] = r.frames_on_air;
    out["frames_delivered"] = r.frames_delivered;
    out["overhead_frames_per_message"] = r.overhead;
    out["invalid_keys"] = r.receiver.invalid_keys;
    write_output("-", out.dump(2) + "\n");
    return r.stats.forged_accepted == 0 ? kExitOk : kExitIntegrity;
}

// ------------------------------------------------------------------ frame

struct FrameEncodeOptions {
    unsigned df = codec::kExtendedSquitterDf;
    unsigned ca = 5;
    std::string icao;
    std::string me;
    std::string data;
    std::string mac;
    std::string key;
};

int run_frame_encode(const FrameEncodeOptions& o) {
    const int given = !o.me.empty() + !o.data.empty() + !o.mac.empty() + !o.key.empty();
    if (given != 1) throw ConfigError("give exactly one of --me, --data, --mac, --key");
    if (o.df > 31) throw ConfigError("--df is a 5-bit field");
    if (o.ca > 7) throw ConfigError("--ca is a 3-bit field");
    std::uint64_t me = 0;
    if (!o.me.empty()) {
        me = parse_hex_fixed(o.me, 14);
    } else if (!o.data.empty()) {
        me = codec::pack_payload(codec::AuthPayload::data(Message51(parse_hex_left_aligned(o.data, 51))));
    } else if (!o.mac.empty()) {
        me = codec::pack_payload(codec::AuthPayload::mac(Tag50(parse_hex_left_aligned(o.mac, 50))));
    } else {
        me = codec::pack_payload(codec::AuthPayload::key(Key50(parse_hex_left_aligned(o.key, 50))));
    }
    const auto bits = codec::encode_frame(o.df, o.ca, parse_icao(o.icao).value(), me);
    write_output("-", capture::format_line(bits) + "\n");
    return kExitOk;
}

struct FrameDecodeOptions {
    std::string line;
    unsigned max_correct = 1;
};

int run_frame_decode(const FrameDecodeOptions& o) {
    std::string text = o.line;
    if (text.empty() && !std::getline(std::cin, text)) throw FormatError("no frame given");
    const auto parsed = capture::parse_line(text);
    const auto decoded = codec::decode_frame(parsed.bits, o.max_correct);
    const auto& f = decoded.frame;
    json out;
    out["df"] = f.df;
    out["ca"] = f.capability;
    out["icao"] = to_hex(Icao(f.icao));
    out["me"] = to_hex_fixed(f.me, 14);
    out["parity"] = to_hex_fixed(f.parity, 6);
    out["corrected_bits"] = decoded.corrected_bits;
    try {
        const auto p = codec::unpack_payload(f.me);
        const char* kind = p.kind == codec::PayloadKind::Data  ? "data"
                           : p.kind == codec::PayloadKind::Mac ? "mac"
                                                               : "key";
        out["payload"] = {{"kind", kind}, {"body", to_hex_left_aligned(p.body, codec::body_width(p.kind))}};
    } catch (const UnknownPayloadError&) {
        out["payload"] = nullptr;
    }
    write_output("-", out.dump() + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delayed-key-disclosure authentication for ADS-B Extended Squitter"};
    app.require_subcommand(1);

    KeygenOptions keygen;
    auto* kg = app.add_subcommand("keygen", "Generate a key chain file");
    kg->add_option("--seed", keygen.seed_hex, "64 hex characters; drawn from the OS when absent");
    kg->add_option("--length", keygen.length, "Keys after the anchor")->required();
    kg->add_option("--icao", keygen.icao, "Owner address, 6 hex characters");
    kg->add_option("-o,--out", keygen.out, "Chain file path, - for stdout");
    kg->add_option("--anchors-out", keygen.anchors_out, "Also write a one-entry anchors file");

    SignOptions sign;
    auto* sg = app.add_subcommand("sign", "Turn JSON-lines messages into a frame capture");
    sg->add_option("--chain", sign.chain, "Chain file from keygen")->required();
    sg->add_option("--d", sign.d, "Disclosure delay in intervals");
    sg->add_option("--interval", sign.interval, "Messages per key interval");
    sg->add_option("--duplicates", sign.duplicates, "Copies of every frame");
    sg->add_option("--icao", sign.icao, "Sender address; overrides the chain file");
    sg->add_option("--df", sign.df, "Downlink format of emitted frames")->check(CLI::Range(0, 31));
    sg->add_flag("--close", sign.close, "Disclose every used key after the last message");

    VerifyOptions verify;
    auto* vf = app.add_subcommand("verify", "Verify a frame capture from stdin");
    vf->add_option("--anchors", verify.anchors, "Anchors JSON file")->required();
    vf->add_option("--d", verify.d, "Disclosure delay in intervals");
    vf->add_option("--max-depth", verify.max_depth, "Longest accepted key-chain walk");
    vf->add_option("--max-correct", verify.max_correct, "Bit errors repaired per frame (0-5)");
    vf->add_option("--df", verify.df, "Downlink format that carries protocol frames")->check(CLI::Range(0, 31));
    vf->add_flag("--strict-unverifiable", verify.strict_unverifiable, "Fail when frames come from unknown ICAOs");

    CollideOptions collide;
    auto* cl = app.add_subcommand("collide", "Collision probability sweep as CSV");
    cl->add_option("--config", collide.config, "Scenario JSON")->required();
    cl->add_option("--trials", collide.trials, "Monte Carlo trials per point");
    cl->add_option("--seed", collide.seed, "RNG seed");
    cl->add_option("--threads", collide.threads, "Worker threads, 0 for all cores");

    SimulateOptions simulate;
    auto* sm = app.add_subcommand("simulate", "End-to-end run with loss and an adversary");
    sm->add_option("--config", simulate.config, "Simulation JSON")->required();
    sm->add_option("--seed", simulate.seed, "Overrides rng_seed");

    auto* fr = app.add_subcommand("frame", "Encode or decode a single frame");
    fr->require_subcommand(1);
    FrameEncodeOptions enc;
    auto* fe = fr->add_subcommand("encode", "Fields to a capture line");
    fe->add_option("--df", enc.df, "Downlink format");
    fe->add_option("--ca", enc.ca, "Capability");
    fe->add_option("--icao", enc.icao, "6 hex characters")->required();
    fe->add_option("--me", enc.me, "Raw ME field, 14 hex characters");
    fe->add_option("--data", enc.data, "Data message, 13 hex characters");
    fe->add_option("--mac", enc.mac, "Tag, 13 hex characters");
    fe->add_option("--key", enc.key, "Key, 13 hex characters");
    FrameDecodeOptions dec;
    auto* fd = fr->add_subcommand("decode", "Capture line to fields as JSON");
    fd->add_option("line", dec.line, "Capture line; read from stdin when absent");
    fd->add_option("--max-correct", dec.max_correct, "Bit errors to repair (0-5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (kg->parsed()) return run_keygen(keygen);
        if (sg->parsed()) return run_sign(sign);
        if (vf->parsed()) return run_verify(verify);
        if (cl->parsed()) return run_collide(collide);
        if (sm->parsed()) return run_simulate(simulate);
        if (fe->parsed()) return run_frame_encode(enc);
        if (fd->parsed()) return run_frame_decode(dec);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const IntegrityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIntegrity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
