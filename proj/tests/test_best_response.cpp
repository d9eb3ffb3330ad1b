#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "oracles.hpp"
#include "tullock/best_response.hpp"

using namespace tullock;

TEST_CASE("participation thresholds") {
    player_thresholds t = thresholds({1.0, 2.0}, 2.0);
    CHECK(t.lower == doctest::Approx(1.0));
    CHECK(t.upper == doctest::Approx(2.0));

    t = thresholds({0.375, 3.0}, 2.0);
    CHECK(t.lower == doctest::Approx(4.0 / 9.0));
    CHECK(t.upper == doctest::Approx(4.0 / 3.0));

    CHECK_THROWS_AS((void)thresholds({1.0, 1.0}, 2.0), not_convex_player);
}

TEST_CASE("concave best-response share") {
    CHECK(k1_share({1.0, 1.0}, 4.0, 2.0) == doctest::Approx(0.5));
    CHECK(k1_share({1.0, 1.0}, 4.0, 4.0) == 0.0);  // cutoff at R f'(0)
    CHECK(k1_share({1.0, 0.5}, 2.0, 1.0) == doctest::Approx(0.5));  // R a^2/(R a^2 + 2 A^2)
}

TEST_CASE("convex best-response share") {
    CHECK(k2_share({1.0, 2.0}, 2.0, 2.0) == doctest::Approx(0.5));  // boundary value (r-1)/r
    const double sigma = k2_share({1.0, 2.0}, 2.0, 1.0);
    CHECK(sigma == doctest::Approx(oracle::k2_bisect(1.0, 2.0, 2.0, 1.0)).epsilon(1e-10));
    CHECK(sigma == doctest::Approx(0.7015).epsilon(1e-3));
    CHECK_THROWS_AS((void)k2_share({1.0, 2.0}, 2.0, 2.5), above_upper_threshold);
}

TEST_CASE("best-response case split") {
    best_response_set br = best_response_share({1.0, 2.0}, 2.0, 0.5);
    CHECK(br.kind == response_kind::share);
    CHECK(br.share == doctest::Approx(k2_share({1.0, 2.0}, 2.0, 0.5)));

    br = best_response_share({1.0, 2.0}, 2.0, 1.5);
    CHECK(br.kind == response_kind::zero_or_share);
    CHECK(br.share == doctest::Approx(k2_share({1.0, 2.0}, 2.0, 1.5)));

    br = best_response_share({1.0, 2.0}, 2.0, 3.0);
    CHECK(br.kind == response_kind::zero);

    br = best_response_share({1.0, 1.0}, 4.0, 5.0);
    CHECK(br.kind == response_kind::zero);
    br = best_response_share({1.0, 0.5}, 2.0, 100.0);
    CHECK(br.kind == response_kind::share);  // infinite marginal product at zero
}

TEST_CASE("share derivative closed forms and finite differences") {
    CHECK(share_derivative({1.0, 1.0}, 4.0, 2.0) == doctest::Approx(-0.25));
    CHECK(share_derivative({1.0, 0.5}, 2.0, 1.0) == doctest::Approx(-0.5));

    const double fd = oracle::central_difference(
        [](double a) { return k2_share({1.0, 2.0}, 2.0, a); }, 1.5, 1e-6);
    CHECK(share_derivative({1.0, 2.0}, 2.0, 1.5) == doctest::Approx(fd).epsilon(1e-6));

    CHECK_THROWS_AS((void)share_derivative({1.0, 2.0}, 2.0, 2.0), at_discontinuity);
}

TEST_CASE("derivative matches central differences at random interior points") {
    std::mt19937 rng(907101);
    std::uniform_real_distribution<double> eff(0.5, 2.0), reward_dist(1.5, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        player p{eff(rng), 0.0};
        const double reward = reward_dist(rng);
        std::function<double(double)> share;
        double lo, hi;
        if (trial % 3 == 0) {
            p.elasticity = std::uniform_real_distribution<double>(1.1, 3.5)(rng);
            const player_thresholds t = thresholds(p, reward);
            lo = 0.3 * t.lower;
            hi = 0.98 * t.upper;
            share = [&](double a) { return k2_share(p, reward, a); };
        } else if (trial % 3 == 1) {
            p.elasticity = 1.0;
            lo = 0.1 * p.efficiency * reward;
            hi = 0.9 * p.efficiency * reward;
            share = [&](double a) { return k1_share(p, reward, a); };
        } else {
            p.elasticity = std::uniform_real_distribution<double>(0.3, 0.95)(rng);
            lo = 0.3;
            hi = 3.0;
            share = [&](double a) { return k1_share(p, reward, a); };
        }
        const double a = std::uniform_real_distribution<double>(lo, hi)(rng);
        const double h = 1e-6 * std::max(1.0, a);
        const double fd = oracle::central_difference(share, a, h);
        CHECK(share_derivative(p, reward, a) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("shares fall monotonically in the aggregate") {
    std::mt19937 rng(907102);
    std::uniform_real_distribution<double> eff(0.5, 2.0), ela(0.2, 4.0), reward_dist(1.5, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const player p{eff(rng), ela(rng)};
        const double reward = reward_dist(rng);
        double lo, hi;
        if (p.elasticity > 1.0) {
            const player_thresholds t = thresholds(p, reward);
            lo = 1e-3 * t.upper;
            hi = t.upper;
        } else {
            lo = 0.05;
            hi = 3.0 * reward * p.efficiency;
        }
        std::uniform_real_distribution<double> inside(lo, hi);
        double a1 = inside(rng), a2 = inside(rng);
        if (a1 > a2) std::swap(a1, a2);
        if (a1 == a2) continue;
        auto value = [&](double a) {
            const best_response_set br = best_response_share(p, reward, a);
            return br.kind == response_kind::zero ? 0.0 : br.share;
        };
        const double s1 = value(a1), s2 = value(a2);
        CHECK(s1 >= s2 - 1e-12);
        if (s1 > 0.0 && s2 > 0.0) CHECK(s1 > s2);
    }
}

TEST_CASE("k2 stays on the positive-utility branch and hits zero utility at the ceiling") {
    std::mt19937 rng(907103);
    std::uniform_real_distribution<double> eff(0.5, 2.0), ela(1.05, 4.0), reward_dist(1.5, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const player p{eff(rng), ela(rng)};
        const double reward = reward_dist(rng);
        const player_thresholds t = thresholds(p, reward);
        const double branch = (p.elasticity - 1.0) / p.elasticity;

        const double a = std::uniform_real_distribution<double>(1e-3 * t.upper, t.upper)(rng);
        const double sigma = k2_share(p, reward, a);
        CHECK(sigma >= branch - 1e-12);
        CHECK(sigma < 1.0);

        const double boundary = k2_share(p, reward, t.upper);
        CHECK(boundary == doctest::Approx(branch).epsilon(1e-9));
        const double utility = boundary * reward - cost_of_production(p, boundary * t.upper);
        CHECK(utility == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    }
}

TEST_CASE("returned shares zero their defining residuals") {
    std::mt19937 rng(907104);
    std::uniform_real_distribution<double> eff(0.5, 2.0), reward_dist(1.5, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double reward = reward_dist(rng);
        if (trial % 2 == 0) {
            const player p{eff(rng), std::uniform_real_distribution<double>(1.05, 4.0)(rng)};
            const player_thresholds t = thresholds(p, reward);
            const double a = std::uniform_real_distribution<double>(0.01 * t.upper, t.upper)(rng);
            CHECK(std::abs(b2_residual(p, reward, a, k2_share(p, reward, a))) <=
                  1e-10 * std::max(1.0, a));
        } else {
            const player p{eff(rng), std::uniform_real_distribution<double>(0.3, 1.0)(rng)};
            const double a = std::uniform_real_distribution<double>(0.05, 2.0 * reward)(rng);
            const double sigma = k1_share(p, reward, a);
            if (sigma > 0.0) CHECK(std::abs(b1_residual(p, reward, a, sigma)) <= 1e-10);
        }
    }
}

TEST_CASE("slope sampling and the node-spacing bound") {
    // A lone lottery player has constant slope -1/(aR) = -0.25 below its cutoff.
    const double sampled = detail::max_share_slope({1.0, 1.0}, 4.0, 1.0, 3.0, 1000);
    CHECK(sampled == doctest::Approx(0.25));

    contest_instance lotteries{4.0, {{1.0, 1.0}, {1.0, 1.0}}};
    const double rho = rho_bound(lotteries);
    CHECK(rho >= 0.25);
    CHECK(rho <= 0.5 + 1e-12);

    contest_instance convex{2.0, {{1.0, 2.0}, {1.0, 2.0}}};
    const double rho_convex = rho_bound(convex);
    double seen = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double a = 1.0 + (k + 0.5) * (1.0 / 50.0);  // inside [lower, upper) = [1, 2)
        seen = std::max(seen, std::abs(share_derivative({1.0, 2.0}, 2.0, a)));
    }
    CHECK(rho_convex >= seen);
}
