#include <cmath>

#include "adsbauth/channel_sim.hpp"
#include "adsbauth/errors.hpp"

namespace adsbauth::channel {

std::string class_name(ClassName name) { return name == ClassName::ModeS ? "ModeS" : "ADSB"; }

TrafficClass mode_s_class() { return {ClassName::ModeS, 112, 6.2, 0, true, std::nullopt}; }

TrafficClass adsb_class() { return {ClassName::Adsb, 120, 6.2, 8, true, std::nullopt}; }

double poisson_lambda(std::uint64_t n, double t_p_us, double T_s) {
    return static_cast<double>(n) * (t_p_us * 1e-6) / T_s;
}

namespace {

double p_zero(double lambda) { return std::exp(-lambda); }
double p_one(double lambda) { return lambda * std::exp(-lambda); }

}  // namespace

double p_collision_single(std::uint64_t n, double t_p_us, double T_s) {
    if (!(t_p_us > 0)) throw DomainError("packet duration must be positive");
    if (!(T_s > 0)) throw DomainError("packet period must be positive");
    const double lambda = poisson_lambda(n, t_p_us, T_s);
    return 1.0 - p_zero(lambda) - p_one(lambda);
}

double class_lambda(const CollisionParams& params, const TrafficClass& cls) {
    const double multiplier = cls.rate_multiplier.value_or(params.rate_multiplier);
    if (!(multiplier >= 0)) throw ConfigError("rate multiplier must be non-negative");
    if (!(cls.rate_per_aircraft >= 0)) throw ConfigError("rate must be non-negative");
    if (!(cls.window_us() > 0)) throw DomainError("packet duration must be positive");
    const double rate = cls.rate_per_aircraft * multiplier;
    if (rate == 0) return 0.0;
    return poisson_lambda(params.n, cls.window_us(), 1.0 / rate);
}

double p_collision_combined(const CollisionParams& params) {
    if (params.classes.size() != 2) throw ConfigError("the combined model takes exactly two traffic classes");
    const double la = class_lambda(params, params.classes[0]);
    const double ls = class_lambda(params, params.classes[1]);
    const double pa0 = p_zero(la), pa1 = p_one(la);
    const double ps0 = p_zero(ls), ps1 = p_one(ls);
    return 1.0 - pa0 * ps0 - pa0 * ps1 - pa1 * ps0;
}

double p_collision(const CollisionParams& params) {
    if (params.classes.size() == 1) {
        const double lambda = class_lambda(params, params.classes[0]);
        return 1.0 - p_zero(lambda) - p_one(lambda);
    }
    return p_collision_combined(params);
}

double ci95_halfwidth(double p, std::uint64_t trials) {
    if (trials == 0) return 0.0;
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace adsbauth::channel
