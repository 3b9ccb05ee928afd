#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "adsbauth/channel_sim.hpp"
#include "adsbauth/errors.hpp"
#include "adsbauth/philox.hpp"
#include "adsbauth/simd/kernels.hpp"

namespace adsbauth::channel {

namespace {

constexpr std::uint64_t kChunk = 1 << 16;

std::uint64_t timeline_hits(const CollisionParams& params, std::uint64_t seed, std::uint64_t first,
                            std::uint64_t count) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = first; t < first + count; ++t) {
        PhiloxStream rng(seed, t);
        std::uint64_t starts = 0;
        for (const TrafficClass& cls : params.classes) {
            const double rate = cls.rate_per_aircraft * cls.rate_multiplier.value_or(params.rate_multiplier);
            if (rate == 0) continue;
            const double period_us = 1e6 / rate;
            const double window = cls.window_us();
            for (std::uint64_t a = 0; a < params.n && starts < 2; ++a) {
                // The first start at or after 0 lies at a uniform phase in [0, T).
                // Later ones fall in the window only if T is shorter than it.
                const double phase = rng.next_double() * period_us;
                for (double s = phase; s < window && starts < 2; s += period_us) ++starts;
            }
        }
        hits += starts >= 2 ? 1 : 0;
    }
    return hits;
}

template <class Fn>
std::uint64_t run_chunks(std::uint64_t trials, unsigned threads, Fn&& chunk_hits) {
    const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));

    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> total{0};
    auto worker = [&] {
        std::uint64_t local = 0;
        for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
            const std::uint64_t first = c * kChunk;
            local += chunk_hits(first, std::min(kChunk, trials - first));
        }
        total.fetch_add(local);
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return total.load();
}

}  // namespace

SimResult monte_carlo_collision(const CollisionParams& params, std::uint64_t trials, std::uint64_t rng_seed,
                                const McOptions& options) {
    if (trials == 0) throw ConfigError("at least one trial is required");
    if (params.classes.empty() || params.classes.size() > 2) {
        throw ConfigError("collision model takes one or two traffic classes");
    }
    SimResult result;
    result.analytic_p = p_collision(params);
    result.trials = trials;

    std::uint64_t hits = 0;
    if (options.mode == McMode::Poisson) {
        simd::CollisionBatch batch;
        batch.seed = rng_seed;
        batch.threshold_a = std::exp(-class_lambda(params, params.classes[0]));
        batch.threshold_b = params.classes.size() == 2 ? std::exp(-class_lambda(params, params.classes[1])) : 1.0;
        const auto& kernel = simd::active_kernels();
        hits = run_chunks(trials, options.threads, [&](std::uint64_t first, std::uint64_t count) {
            return kernel.count_collisions(batch, first, count);
        });
    } else {
        hits = run_chunks(trials, options.threads, [&](std::uint64_t first, std::uint64_t count) {
            return timeline_hits(params, rng_seed, first, count);
        });
    }
    result.empirical_p = static_cast<double>(hits) / static_cast<double>(trials);
    result.ci95_halfwidth = ci95_halfwidth(result.empirical_p, trials);
    return result;
}

std::vector<Scenario> default_scenarios() {
    std::vector<Scenario> out;
    out.push_back({"modes_only", {0, {mode_s_class()}, 1.0}});
    out.push_back({"combined", {0, {adsb_class(), mode_s_class()}, 1.0}});
    out.push_back({"combined_x2", {0, {adsb_class(), mode_s_class()}, 2.0}});
    // Two copies of each Data and Mac frame plus two key copies per ten
    // messages: 4.2 frames on air per original ADS-B message.
    TrafficClass protocol = adsb_class();
    protocol.rate_multiplier = 4.2;
    out.push_back({"combined_protocol", {0, {protocol, mode_s_class()}, 1.0}});
    return out;
}

namespace {

/// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::vector<SweepRow> sweep_fig4(const std::vector<std::uint64_t>& n_range, const std::vector<Scenario>& scenarios,
                                 std::uint64_t trials, std::uint64_t rng_seed, const McOptions& options) {
    std::vector<SweepRow> rows;
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        for (std::uint64_t n : n_range) {
            CollisionParams params = scenarios[s].params;
            params.n = n;
            const std::uint64_t seed = mix(mix(rng_seed ^ s) ^ n);
            const SimResult r = monte_carlo_collision(params, trials, seed, options);
            rows.push_back({scenarios[s].name, n, r.analytic_p, r.empirical_p, r.trials, r.ci95_halfwidth});
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "scenario,n,analytic_p,empirical_p,trials,ci95\n";
    char buf[256];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, ",%llu,%.17g,%.17g,%llu,%.17g\n", static_cast<unsigned long long>(r.n),
                      r.analytic_p, r.empirical_p, static_cast<unsigned long long>(r.trials), r.ci95);
        out += r.scenario;
        out += buf;
    }
    return out;
}

}  // namespace adsbauth::channel
