#include "adsbauth/scenario.hpp"

#include <initializer_list>
#include <string>

#include "adsbauth/errors.hpp"
#include "json.hpp"

namespace adsbauth::channel {

namespace {

using nlohmann::json;

void only_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + key + "' has the wrong type");
    }
}

double probability(const json& obj, const char* key) {
    const double p = get_or(obj, key, 0.0);
    if (!(p >= 0 && p <= 1)) throw ConfigError(std::string("field '") + key + "' must lie in [0, 1]");
    return p;
}

TrafficClass parse_class(const json& j) {
    only_keys(j, {"name", "packet_bits", "rate", "preamble_us", "include_preamble", "rate_multiplier"}, "class");
    const std::string name = get_or<std::string>(j, "name", "");
    TrafficClass cls;
    if (name == "ModeS") {
        cls = mode_s_class();
    } else if (name == "ADSB") {
        cls = adsb_class();
    } else {
        throw ConfigError("class name must be \"ModeS\" or \"ADSB\"");
    }
    cls.packet_bits = get_or(j, "packet_bits", cls.packet_bits);
    cls.rate_per_aircraft = get_or(j, "rate", cls.rate_per_aircraft);
    cls.preamble_us = get_or(j, "preamble_us", cls.preamble_us);
    cls.include_preamble = get_or(j, "include_preamble", cls.include_preamble);
    if (j.contains("rate_multiplier") && !j.at("rate_multiplier").is_null()) {
        cls.rate_multiplier = get_or(j, "rate_multiplier", 1.0);
        if (!(*cls.rate_multiplier > 0)) throw ConfigError("rate_multiplier must be positive");
    }
    if (!(cls.packet_bits > 0)) throw ConfigError("packet_bits must be positive");
    if (!(cls.rate_per_aircraft >= 0)) throw ConfigError("rate must be non-negative");
    if (!(cls.preamble_us >= 0)) throw ConfigError("preamble_us must be non-negative");
    return cls;
}

Scenario parse_scenario(const json& j) {
    only_keys(j, {"name", "rate_multiplier", "classes"}, "scenario");
    Scenario s;
    s.name = get_or<std::string>(j, "name", "");
    if (s.name.empty() || s.name.find_first_of(",\"\n") != std::string::npos) {
        throw ConfigError("scenario name must be non-empty and free of commas, quotes and newlines");
    }
    s.params.rate_multiplier = get_or(j, "rate_multiplier", 1.0);
    if (!(s.params.rate_multiplier > 0)) throw ConfigError("rate_multiplier must be positive");
    if (!j.contains("classes") || !j.at("classes").is_array()) throw ConfigError("scenario needs a classes array");
    for (const auto& c : j.at("classes")) s.params.classes.push_back(parse_class(c));
    if (s.params.classes.empty() || s.params.classes.size() > 2) {
        throw ConfigError("a scenario has one or two traffic classes");
    }
    return s;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

CollideConfig parse_collide_config(std::string_view text) {
    const json j = parse_json(text);
    only_keys(j, {"n_range", "scenarios", "trials", "seed", "mode"}, "collide config");
    CollideConfig out;
    if (!j.contains("n_range") || !j.at("n_range").is_array()) throw ConfigError("n_range must be an array");
    for (const auto& n : j.at("n_range")) {
        if (!n.is_number_unsigned()) throw ConfigError("n_range entries must be non-negative integers");
        out.n_range.push_back(n.get<std::uint64_t>());
    }
    if (j.contains("scenarios")) {
        if (!j.at("scenarios").is_array()) throw ConfigError("scenarios must be an array");
        for (const auto& s : j.at("scenarios")) out.scenarios.push_back(parse_scenario(s));
    } else {
        out.scenarios = default_scenarios();
    }
    if (j.contains("trials")) {
        out.trials = get_or<std::uint64_t>(j, "trials", 0);
        if (*out.trials == 0) throw ConfigError("trials must be positive");
    }
    if (j.contains("seed")) out.seed = get_or<std::uint64_t>(j, "seed", 0);
    const std::string mode = get_or<std::string>(j, "mode", "poisson");
    if (mode == "poisson") {
        out.mode = McMode::Poisson;
    } else if (mode == "timeline") {
        out.mode = McMode::Timeline;
    } else {
        throw ConfigError("mode must be \"poisson\" or \"timeline\"");
    }
    return out;
}

EndToEndConfig parse_simulate_config(std::string_view text) {
    const json j = parse_json(text);
    only_keys(j,
              {"n_aircraft", "per_copy_loss", "adversary", "duration_packets", "rng_seed", "d", "interval_len",
               "duplicates", "key_blackout"},
              "simulate config");
    EndToEndConfig c;
    c.n_aircraft = get_or<std::uint64_t>(j, "n_aircraft", c.n_aircraft);
    c.per_copy_loss = get_or(j, "per_copy_loss", c.per_copy_loss);
    c.duration_packets = get_or<std::uint64_t>(j, "duration_packets", c.duration_packets);
    c.rng_seed = get_or<std::uint64_t>(j, "rng_seed", c.rng_seed);
    c.d = get_or<std::uint64_t>(j, "d", c.d);
    c.interval_len = get_or<std::uint64_t>(j, "interval_len", c.interval_len);
    c.duplicates = get_or<unsigned>(j, "duplicates", c.duplicates);
    if (j.contains("adversary")) {
        const json& a = j.at("adversary");
        only_keys(a, {"forge_mac_rate", "modify_data_rate", "replay_rate"}, "adversary");
        c.adversary.forge_mac_rate = probability(a, "forge_mac_rate");
        c.adversary.modify_data_rate = probability(a, "modify_data_rate");
        c.adversary.replay_rate = probability(a, "replay_rate");
        if (c.adversary.forge_mac_rate + c.adversary.modify_data_rate > 1) {
            throw ConfigError("forge_mac_rate + modify_data_rate must not exceed 1");
        }
    }
    if (j.contains("key_blackout")) {
        const json& b = j.at("key_blackout");
        only_keys(b, {"first_index", "count"}, "key_blackout");
        c.key_blackout = KeyBlackout{get_or<std::uint64_t>(b, "first_index", 0), get_or<std::uint64_t>(b, "count", 0)};
    }
    if (!(c.per_copy_loss >= 0 && c.per_copy_loss < 1)) throw ConfigError("per_copy_loss must lie in [0, 1)");
    if (c.n_aircraft == 0) throw ConfigError("n_aircraft must be positive");
    if (c.d == 0 || c.interval_len == 0 || c.duplicates == 0) {
        throw ConfigError("d, interval_len and duplicates must be positive");
    }
    return c;
}

}  // namespace adsbauth::channel
