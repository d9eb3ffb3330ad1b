#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tullock/contest.hpp"

using namespace tullock;

TEST_CASE("production evaluates a x^r") {
    CHECK(production({1.0, 1.0}, 1.0) == doctest::Approx(1.0));
    CHECK(production({2.0, 3.0}, 2.0) == doctest::Approx(16.0));
    CHECK(production({0.5, 0.5}, 4.0) == doctest::Approx(1.0));
    CHECK(production({2.0, 3.0}, 0.0) == 0.0);
}

TEST_CASE("cost_of_production inverts production") {
    CHECK(cost_of_production({1.0, 1.0}, 3.0) == doctest::Approx(3.0));
    CHECK(cost_of_production({2.0, 3.0}, 16.0) == doctest::Approx(2.0));
    CHECK(cost_of_production({1.0, 2.0}, 9.0) == doctest::Approx(3.0));
}

TEST_CASE("effort-space utility") {
    contest_instance lottery{4.0, {{1.0, 1.0}, {1.0, 1.0}}};
    CHECK(utility_effort(lottery, {{1.0, 1.0}}, 0) == doctest::Approx(1.0));
    CHECK(utility_effort(lottery, {{0.0, 1.0}}, 0) == doctest::Approx(0.0));
    CHECK(utility_effort(lottery, {{0.5, 1.0}}, 0) == doctest::Approx(0.5 / 1.5 * 4.0 - 0.5));
    CHECK_THROWS_AS((void)utility_effort(lottery, {{0.0, 0.0}}, 0), all_zero_profile);
}

TEST_CASE("production-space utility") {
    contest_instance lottery{4.0, {{1.0, 1.0}, {1.0, 1.0}}};
    CHECK(utility_production(lottery, {{1.0, 1.0}}, 0) == doctest::Approx(1.0));
    CHECK(utility_production(lottery, {{0.0, 1.0}}, 0) == doctest::Approx(0.0));

    contest_instance convex{2.0, {{1.0, 2.0}, {1.0, 1.0}}};
    CHECK(utility_production(convex, {{1.0, 3.0}}, 0) == doctest::Approx(-0.5));
    CHECK_THROWS_AS((void)utility_production(convex, {{0.0, 0.0}}, 0), all_zero_profile);
}

TEST_CASE("regime classification") {
    contest_instance small{2.0, {{1.0, 1.0}, {1.0, 0.5}}};
    regime_class reg = classify_regime(small);
    CHECK(reg.tag == regime_tag::all_small);
    CHECK(reg.small_players == std::vector<int>{0, 1});
    CHECK(reg.convex_players.empty());

    contest_instance large{2.0, {{1.0, 3.0}, {1.0, 3.0}}};
    CHECK(classify_regime(large).tag == regime_tag::all_large);

    contest_instance medium{2.0, {{1.0, 0.5}, {1.0, 1.5}, {1.0, 3.0}}};
    reg = classify_regime(medium);
    CHECK(reg.tag == regime_tag::has_medium);
    CHECK(reg.small_players == std::vector<int>{0});
    CHECK(reg.convex_players == std::vector<int>{1, 2});
    CHECK(reg.medium_players == std::vector<int>{1});

    contest_instance mixed{2.0, {{1.0, 0.5}, {1.0, 3.0}}};
    CHECK(classify_regime(mixed).tag == regime_tag::mixed_no_medium);
}

TEST_CASE("production and cost are mutual inverses on random draws") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> eff(0.2, 3.0), ela(0.2, 4.0), effort(0.01, 20.0);
    for (int trial = 0; trial < 500; ++trial) {
        player p{eff(rng), ela(rng)};
        const double x = effort(rng);
        const double back = cost_of_production(p, production(p, x));
        CHECK(back == doctest::Approx(x).epsilon(1e-10));
    }
}

TEST_CASE("utilities agree across the two formulations") {
    std::mt19937 rng(20240812);
    std::uniform_real_distribution<double> eff(0.5, 2.0), ela(0.3, 3.0), effort(0.05, 5.0),
        reward(1.5, 8.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(trial % 4);
        contest_instance inst;
        inst.reward = reward(rng);
        effort_profile x;
        for (int i = 0; i < n; ++i) {
            inst.players.push_back({eff(rng), ela(rng)});
            x.levels.push_back(effort(rng));
        }
        const production_profile y = to_production(inst, x);
        for (int i = 0; i < n; ++i)
            CHECK(utility_production(inst, y, i) ==
                  doctest::Approx(utility_effort(inst, x, i)).epsilon(1e-10));
    }
}

TEST_CASE("winning probabilities sum to one and ignore common effort scaling") {
    std::mt19937 rng(20240813);
    std::uniform_real_distribution<double> eff(0.5, 2.0), ela(0.3, 3.0), effort(0.05, 5.0),
        scale(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        contest_instance inst;
        inst.reward = 3.0;
        effort_profile x;
        const double common_r = ela(rng);  // zero-degree homogeneity needs one exponent
        for (int i = 0; i < 4; ++i) {
            inst.players.push_back({eff(rng), common_r});
            x.levels.push_back(effort(rng));
        }
        production_profile y = to_production(inst, x);
        const double total = y.aggregate();
        double prob_sum = 0.0;
        std::vector<double> probs;
        for (int i = 0; i < 4; ++i) {
            probs.push_back(y.amounts[i] / total);
            prob_sum += probs.back();
        }
        CHECK(prob_sum == doctest::Approx(1.0).epsilon(1e-12));

        const double lambda = scale(rng);
        effort_profile scaled = x;
        for (double& level : scaled.levels) level *= lambda;
        production_profile ys = to_production(inst, scaled);
        const double scaled_total = ys.aggregate();
        for (int i = 0; i < 4; ++i)
            CHECK(ys.amounts[i] / scaled_total == doctest::Approx(probs[i]).epsilon(1e-9));
    }
}

TEST_CASE("instance validation messages") {
    CHECK_THROWS_WITH_AS(validate(contest_instance{0.5, {{1, 1}, {1, 1}}}), "R must exceed 1",
                         domain_error);
    CHECK_THROWS_AS(validate(contest_instance{2.0, {{1, 1}}}), domain_error);
    CHECK_THROWS_AS(validate(contest_instance{2.0, {{1, 1}, {-1, 1}}}), domain_error);
    CHECK_THROWS_AS(validate(contest_instance{2.0, {{1, 1}, {1, 0}}}), domain_error);
    CHECK_NOTHROW(validate(contest_instance{2.0, {{1, 1}, {1, 1}}}));
}
