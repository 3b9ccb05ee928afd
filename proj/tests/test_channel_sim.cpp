#include <gtest/gtest.h>

#include <cmath>

#include "adsbauth/channel_sim.hpp"
#include "adsbauth/errors.hpp"

using namespace adsbauth;
using namespace adsbauth::channel;

namespace {

// Two or more arrivals from a Poisson source, by the complement of the first
// two series terms computed in long double.
double tail2(double lambda) {
    const long double l = lambda;
    return static_cast<double>(1.0L - std::exp(-l) * (1.0L + l));
}

CollisionParams single(std::uint64_t n, TrafficClass cls = mode_s_class()) { return {n, {cls}, 1.0}; }

CollisionParams combined(std::uint64_t n, double multiplier = 1.0) {
    return {n, {adsb_class(), mode_s_class()}, multiplier};
}

}  // namespace

TEST(Collision, LambdaAndSingleClassFormula) {
    EXPECT_DOUBLE_EQ(poisson_lambda(100, 112, 1 / 6.2), 100 * 112e-6 * 6.2);
    EXPECT_EQ(p_collision_single(0, 112, 0.1), 0.0);
    // n t_p / T = 1 gives 1 - 2/e.
    EXPECT_NEAR(p_collision_single(1, 1e6, 1.0), 1.0 - 2.0 / std::exp(1.0), 1e-15);
    for (std::uint64_t n : {1u, 10u, 100u, 1000u, 5000u}) {
        EXPECT_NEAR(p_collision_single(n, 120, 1 / 6.2), tail2(n * 120e-6 * 6.2), 1e-14) << n;
    }
    EXPECT_THROW(p_collision_single(10, 0, 1), DomainError);
    EXPECT_THROW(p_collision_single(10, 112, -1), DomainError);
}

TEST(Collision, ClassWindows) {
    EXPECT_EQ(mode_s_class().window_us(), 112.0);
    EXPECT_EQ(adsb_class().window_us(), 128.0);
    TrafficClass bare = adsb_class();
    bare.include_preamble = false;
    EXPECT_EQ(bare.window_us(), 120.0);
    EXPECT_EQ(class_name(ClassName::ModeS), "ModeS");
    EXPECT_EQ(class_name(ClassName::Adsb), "ADSB");
}

TEST(Collision, CombinedReducesToSingleWhenOneClassIsSilent) {
    for (std::uint64_t n : {0u, 1u, 50u, 200u, 500u, 3000u}) {
        CollisionParams p = combined(n);
        p.classes[0].rate_multiplier = 0.0;
        ASSERT_EQ(p_collision_combined(p), p_collision(single(n))) << n;
        ASSERT_EQ(p_collision_combined(p), p_collision_single(n, 112, 1 / 6.2)) << n;
    }
}

TEST(Collision, CombinedEqualsPooledPoisson) {
    // Two independent Poisson sources pool into one with the summed mean.
    for (std::uint64_t n : {50u, 200u, 500u}) {
        for (double mult : {1.0, 2.0}) {
            const double la = n * 128e-6 * 6.2 * mult;
            const double ls = n * 112e-6 * 6.2 * mult;
            EXPECT_NEAR(p_collision_combined(combined(n, mult)), tail2(la + ls), 1e-13);
        }
    }
}

TEST(Collision, ShapeAcrossScenarios) {
    const auto scenarios = default_scenarios();
    ASSERT_EQ(scenarios.size(), 4u);
    EXPECT_EQ(scenarios[0].name, "modes_only");
    EXPECT_EQ(scenarios[3].name, "combined_protocol");
    double prev = -1;
    for (std::uint64_t n = 0; n <= 1000; n += 25) {
        std::vector<double> p;
        for (const auto& s : scenarios) {
            CollisionParams params = s.params;
            params.n = n;
            p.push_back(p_collision(params));
        }
        EXPECT_GE(p[1], prev);
        prev = p[1];
        if (n > 0) {
            EXPECT_LT(p[0], p[1]);
            EXPECT_LT(p[1], p[2]);
            EXPECT_LT(p[2], p[3]);
        }
    }
}

TEST(Collision, RejectsBadParameters) {
    EXPECT_THROW(p_collision_combined(single(10)), ConfigError);
    CollisionParams p = single(10);
    p.rate_multiplier = -1;
    EXPECT_THROW(p_collision(p), ConfigError);
    EXPECT_THROW(monte_carlo_collision(single(10), 0, 1), ConfigError);
    EXPECT_THROW(monte_carlo_collision({10, {}, 1.0}, 10, 1), ConfigError);
}

TEST(MonteCarlo, AgreesWithFormula) {
    for (std::uint64_t n : {100u, 500u}) {
        const SimResult r = monte_carlo_collision(combined(n), 400000, 42 + n, {McMode::Poisson, 0});
        EXPECT_EQ(r.trials, 400000u);
        EXPECT_NEAR(r.empirical_p, r.analytic_p, 3 * r.ci95_halfwidth + 1e-12) << n;
    }
}

TEST(MonteCarlo, ReproducibleAndThreadIndependent) {
    const auto p = combined(300);
    const SimResult a = monte_carlo_collision(p, 200001, 7, {McMode::Poisson, 1});
    const SimResult b = monte_carlo_collision(p, 200001, 7, {McMode::Poisson, 1});
    const SimResult c = monte_carlo_collision(p, 200001, 7, {McMode::Poisson, 5});
    const SimResult d = monte_carlo_collision(p, 200001, 8, {McMode::Poisson, 1});
    EXPECT_EQ(a.empirical_p, b.empirical_p);
    EXPECT_EQ(a.empirical_p, c.empirical_p);
    EXPECT_NE(a.empirical_p, d.empirical_p);
    const SimResult t1 = monte_carlo_collision(p, 70000, 7, {McMode::Timeline, 1});
    const SimResult t3 = monte_carlo_collision(p, 70000, 7, {McMode::Timeline, 3});
    EXPECT_EQ(t1.empirical_p, t3.empirical_p);
}

TEST(MonteCarlo, SingleTrial) {
    const SimResult r = monte_carlo_collision(single(10), 1, 3);
    EXPECT_EQ(r.trials, 1u);
    EXPECT_TRUE(r.empirical_p == 0.0 || r.empirical_p == 1.0);
    EXPECT_EQ(r.ci95_halfwidth, 0.0);
}

TEST(MonteCarlo, TimelineMatchesBinomialModel) {
    // With T much longer than the window each aircraft lands at most once,
    // with probability w / T; the count is binomial.
    const std::uint64_t n = 400;
    const double q = 112e-6 * 6.2;
    const double expected = 1 - std::pow(1 - q, n) - n * q * std::pow(1 - q, n - 1);
    const SimResult r = monte_carlo_collision(single(n), 200000, 11, {McMode::Timeline, 0});
    EXPECT_NEAR(r.empirical_p, expected, 3 * ci95_halfwidth(expected, 200000));
}

TEST(Sweep, RowsSeedsAndCsv) {
    const auto rows = sweep_fig4({10, 20}, default_scenarios(), 1000, 5);
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[0].scenario, "modes_only");
    EXPECT_EQ(rows[0].n, 10u);
    EXPECT_EQ(rows[1].n, 20u);
    EXPECT_EQ(rows[2].scenario, "combined");
    const auto again = sweep_fig4({10, 20}, default_scenarios(), 1000, 5);
    EXPECT_EQ(sweep_csv(rows), sweep_csv(again));

    const std::vector<SweepRow> one{{"x", 3, 0.1, 0.25, 4, 1.0 / 3}};
    EXPECT_EQ(sweep_csv(one),
              "scenario,n,analytic_p,empirical_p,trials,ci95\n"
              "x,3,0.10000000000000001,0.25,4,0.33333333333333331\n");
}

TEST(Sweep, ConfidenceHalfWidth) {
    EXPECT_DOUBLE_EQ(ci95_halfwidth(0.5, 100), 1.96 * 0.05);
    EXPECT_EQ(ci95_halfwidth(0.0, 100), 0.0);
    EXPECT_EQ(ci95_halfwidth(0.3, 0), 0.0);
}
