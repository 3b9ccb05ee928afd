#pragma once

// Collision probability on the shared 1090 MHz channel.
//
// Each traffic class contributes Poisson arrivals with mean
//   lambda = n * t_p / T
// inside one packet's vulnerability window, with t_p the on-air duration of
// the packet (1 us per bit, plus the preamble if enabled) and T the period
// between packets of that class from one aircraft. A reference packet is lost
// when two or more packets start inside the window.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace adsbauth::channel {

enum class ClassName : std::uint8_t { ModeS, Adsb };

std::string class_name(ClassName name);

struct TrafficClass {
    ClassName name = ClassName::Adsb;
    double packet_bits = 120;
    /// Packets per second per aircraft, i.e. 1 / T.
    double rate_per_aircraft = 6.2;
    double preamble_us = 8;
    bool include_preamble = true;
    /// Replaces CollisionParams::rate_multiplier for this class when set.
    std::optional<double> rate_multiplier;

    double window_us() const { return packet_bits + (include_preamble ? preamble_us : 0.0); }
};

TrafficClass mode_s_class();
TrafficClass adsb_class();

struct CollisionParams {
    std::uint64_t n = 0;
    std::vector<TrafficClass> classes;
    double rate_multiplier = 1.0;
};

/// lambda = n * t_p / T with t_p in microseconds and T in seconds.
double poisson_lambda(std::uint64_t n, double t_p_us, double T_s);

/// P(Poisson(lambda) >= 2) written as 1 - e^-lambda - lambda e^-lambda.
/// Throws DomainError for non-positive t_p or T.
double p_collision_single(std::uint64_t n, double t_p_us, double T_s);

/// Arrival mean of one class under `params`; 0 for a class with zero rate.
double class_lambda(const CollisionParams& params, const TrafficClass& cls);

/// 1 - PA(0)PS(0) - PA(0)PS(1) - PA(1)PS(0) for exactly two classes; throws
/// ConfigError otherwise. With one class silent this equals
/// p_collision_single bit for bit.
double p_collision_combined(const CollisionParams& params);

/// Single-class formula for one class, combined formula for two.
double p_collision(const CollisionParams& params);

enum class McMode : std::uint8_t {
    /// Per-trial Poisson counts for each class (the formula's own model).
    Poisson,
    /// Each aircraft transmits periodically from a random phase; counts packet
    /// starts that land inside the reference window.
    Timeline,
};

struct AuthStats {
    std::uint64_t messages = 0;
    std::uint64_t valid = 0;
    std::uint64_t invalid = 0;
    std::uint64_t dropped_unsafe = 0;
    std::uint64_t expired = 0;
    std::uint64_t forged_accepted = 0;
};

struct SimResult {
    double analytic_p = 0;
    double empirical_p = 0;
    std::uint64_t trials = 0;
    double ci95_halfwidth = 0;
    std::optional<AuthStats> auth_stats;
};

/// 1.96 * sqrt(p (1 - p) / trials).
double ci95_halfwidth(double p, std::uint64_t trials);

struct McOptions {
    McMode mode = McMode::Poisson;
    /// 0 uses the hardware concurrency. Results do not depend on it.
    unsigned threads = 1;
};

/// Deterministic in (params, trials, rng_seed) for every thread count and
/// kernel variant. Throws ConfigError for zero trials or a class count other
/// than one or two.
SimResult monte_carlo_collision(const CollisionParams& params, std::uint64_t trials, std::uint64_t rng_seed,
                                const McOptions& options = {});

struct Scenario {
    std::string name;
    /// n is overwritten per sweep point.
    CollisionParams params;
};

/// Mode-S only, combined at base rate, combined at twice the rate, and the
/// ADS-B class scaled by the protocol's frame overhead.
std::vector<Scenario> default_scenarios();

struct SweepRow {
    std::string scenario;
    std::uint64_t n;
    double analytic_p;
    double empirical_p;
    std::uint64_t trials;
    double ci95;
};

/// One row per (scenario, n) in scenario-major order. Each point draws from
/// its own seed derived from (rng_seed, scenario index, n).
std::vector<SweepRow> sweep_fig4(const std::vector<std::uint64_t>& n_range, const std::vector<Scenario>& scenarios,
                                 std::uint64_t trials, std::uint64_t rng_seed, const McOptions& options = {});

/// Header "scenario,n,analytic_p,empirical_p,trials,ci95" then one line per
/// row; probabilities printed with 17 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace adsbauth::channel
