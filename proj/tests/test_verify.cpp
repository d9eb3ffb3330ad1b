#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tullock/exact_solvers.hpp"
#include "tullock/hardness.hpp"
#include "tullock/verify.hpp"

using namespace tullock;

namespace {

const contest_instance lottery{4.0, {{1.0, 1.0}, {1.0, 1.0}}};

equilibrium_certificate lottery_certificate() {
    equilibrium_certificate cert;
    cert.aggregate = 2.0;
    cert.active = {0, 1};
    cert.shares = {0.5, 0.5};
    cert.efforts = {1.0, 1.0};
    return cert;
}

}  // namespace

TEST_CASE("certification accepts the closed-form lottery equilibrium") {
    CHECK(check_pne(lottery, lottery_certificate(), 1e-9).passed);
}

TEST_CASE("certification pinpoints a broken share sum") {
    equilibrium_certificate cert = lottery_certificate();
    cert.shares = {0.6, 0.5};
    const verification_report report = check_pne(lottery, cert, 1e-9);
    CHECK_FALSE(report.passed);
    bool sum_violation = false;
    for (const violation& v : report.violations)
        if (v.condition == "share-sum" && std::abs(v.magnitude - 0.1) < 1e-12) sum_violation = true;
    CHECK(sum_violation);
}

TEST_CASE("certification accepts the mixed-regime example") {
    contest_instance inst{2.0, {{0.375, 3.0}, {1.0, 1.0}}};
    const solve_outcome outcome = solve_mixed_regime(inst, 1e-10);
    REQUIRE(outcome.result == solve_outcome::kind::found);
    CHECK(check_pne(inst, outcome.certificates.front(), 1e-9).passed);
}

TEST_CASE("epsilon certification relaxes only the sum condition") {
    eps_solution sol;
    sol.aggregate = 2.0;
    sol.active = {0, 1};
    sol.shares = {0.5, 0.5};
    sol.share_sum = 1.0;
    sol.epsilon = 0.01;
    CHECK(check_eps_solution(lottery, sol).passed);

    // Land the sum exactly on the band edge: the open interval excludes it.
    eps_solution edge = sol;
    edge.epsilon = 2.0 * (k1_share(lottery.players[0], 4.0, 1.9) - 0.5);
    edge.aggregate = 1.9;
    edge.shares = {k1_share(lottery.players[0], 4.0, 1.9), k1_share(lottery.players[1], 4.0, 1.9)};
    edge.share_sum = edge.shares[0] + edge.shares[1];
    REQUIRE(edge.share_sum == doctest::Approx(1.0 + edge.epsilon));
    CHECK_FALSE(check_eps_solution(lottery, edge).passed);
}

TEST_CASE("regret vanishes at equilibrium and prices a known deviation") {
    effort_profile eq{{1.0, 1.0}};
    CHECK(regret(lottery, eq, 0) <= 1e-8);
    CHECK(regret(lottery, eq, 1) <= 1e-8);

    effort_profile off{{0.5, 1.0}};
    CHECK(regret(lottery, off, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-6));

    // Staying out is optimal once the opponents' production reaches R f'(0).
    effort_profile inactive_ok{{0.0, 4.0}};
    CHECK(regret(lottery, inactive_ok, 0) <= 1e-10);

    // Likewise for a convex player whose participation ceiling is exceeded.
    contest_instance mixed{2.0, {{0.375, 3.0}, {1.0, 1.0}}};
    effort_profile beyond_ceiling{{0.0, 1.5}};  // opponents produce 1.5 > ceiling 4/3
    CHECK(regret(mixed, beyond_ceiling, 0) <= 1e-10);

    effort_profile zeros{{0.0, 0.0}};
    CHECK_THROWS_AS((void)regret(lottery, zeros, 0), all_zero_opponents);
}

TEST_CASE("regret agrees with a dense deviation scan on random profiles") {
    std::mt19937 rng(424001);
    std::uniform_real_distribution<double> eff(0.5, 2.0), ela(0.4, 3.0), level(0.05, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        contest_instance inst;
        inst.reward = 3.0;
        effort_profile x;
        for (int i = 0; i < 3; ++i) {
            inst.players.push_back({eff(rng), ela(rng)});
            x.levels.push_back(level(rng));
        }
        const int i = trial % 3;
        const double current = utility_effort(inst, x, i);
        const double best = oracle::best_deviation_payoff(inst, x.levels, i, 3.0 * inst.reward);
        const double expected = std::max(0.0, best - current);
        CHECK(regret(inst, x, i) == doctest::Approx(expected).epsilon(1e-4).scale(1.0));
    }
}

TEST_CASE("wrapped exact equilibria have zero measured regret and perturbations do not") {
    const equilibrium_certificate cert = solve_small_elasticity(lottery, 1e-12);
    eps_solution sol = detail::to_eps_solution(cert, 0.01);
    const regret_bound bound = eps_ne_bound(lottery, sol);
    CHECK(bound.measured <= 1e-8);
    CHECK(bound.lipschitz_bound > 0.0);

    eps_solution bumped = sol;
    for (double& s : bumped.shares) s += 0.05;
    bumped.share_sum += 0.1;
    bumped.epsilon = 0.2;
    CHECK(eps_ne_bound(lottery, bumped).measured > 1e-4);
}

TEST_CASE("lipschitz estimates bound the sampled slopes") {
    const lipschitz_bounds bounds = lipschitz_estimates(lottery);
    CHECK(bounds.share_bound >= 0.25);
    CHECK(bounds.share_bound <= 0.5 + 1e-12);
    CHECK(bounds.conversion == doctest::Approx(bounds.utility_bound /
                                               (bounds.share_bound * lottery.size())));

    contest_instance medium{2.0, {{1.0, 1.8}, {0.8, 1.3}, {1.0, 0.7}}};
    const lipschitz_bounds mb = lipschitz_estimates(medium);
    std::mt19937 rng(424002);
    const auto [lo, hi] = detail::fptas_range(medium);
    std::uniform_real_distribution<double> inside(lo, hi);
    for (int probe = 0; probe < 1000; ++probe) {
        const double a = inside(rng);
        const double h = 1e-7 * std::max(1.0, a);
        for (const player& p : medium.players) {
            if (p.elasticity > 1.0 && thresholds(p, medium.reward).upper < a + h) continue;
            const double du = std::abs(detail::response_utility(p, medium.reward, a + h) -
                                       detail::response_utility(p, medium.reward, a - h)) /
                              (2.0 * h);
            CHECK(du <= mb.utility_bound + 1e-6);
        }
    }
}

TEST_CASE("brute force recovers closed forms and respects the no-equilibrium regime") {
    const auto lotteries = brute_force_pne(lottery, 1e-9);
    REQUIRE(lotteries.size() == 1);
    CHECK(lotteries.front().aggregate == doctest::Approx(2.0).epsilon(1e-9));

    contest_instance large{2.0, {{1.0, 3.0}, {1.0, 3.0}}};
    CHECK(brute_force_pne(large, 1e-9).empty());

    const reduction_result red = reduce_sslt_to_contest({{2.0, 2.0}, 4.0}, 2.0);
    const auto encoded = brute_force_pne(red.contest, 1e-9);
    REQUIRE(encoded.size() == 1);
    CHECK(encoded.front().aggregate == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(encoded.front().active == std::vector<int>{0, 1});

    contest_instance too_many;
    too_many.reward = 2.0;
    too_many.players.assign(13, {1.0, 1.5});
    CHECK_THROWS_AS((void)brute_force_pne(too_many, 1e-9), too_large);
}

TEST_CASE("every solver certificate passes its own verification") {
    std::mt19937 rng(424003);
    std::uniform_real_distribution<double> eff(0.5, 2.0), small_ela(0.3, 1.0), reward_dist(2.0, 8.0);
    for (int trial = 0; trial < 20; ++trial) {
        contest_instance inst;
        inst.reward = reward_dist(rng);
        const int n = 2 + trial % 5;
        for (int i = 0; i < n; ++i) inst.players.push_back({eff(rng), small_ela(rng)});
        const equilibrium_certificate cert = solve_small_elasticity(inst, 1e-11);
        CHECK(check_pne(inst, cert, 1e-9).passed);
        for (int i = 0; i < n; ++i) {
            effort_profile x;
            x.levels = cert.efforts;
            CHECK(regret(inst, x, i) <= 1e-8);
        }
    }
}
