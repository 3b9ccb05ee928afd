#pragma once

// JSON configuration for the `collide` and `simulate` commands. Unknown keys
// are rejected so that a typo never silently falls back to a default.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "adsbauth/channel_sim.hpp"
#include "adsbauth/end_to_end.hpp"

namespace adsbauth::channel {

struct CollideConfig {
    std::vector<std::uint64_t> n_range;
    std::vector<Scenario> scenarios;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    McMode mode = McMode::Poisson;
};

/// Throws ConfigError on malformed JSON or invalid fields. A missing
/// "scenarios" key selects default_scenarios().
CollideConfig parse_collide_config(std::string_view text);

/// Throws ConfigError on malformed JSON or invalid fields.
EndToEndConfig parse_simulate_config(std::string_view text);

}  // namespace adsbauth::channel
