#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "tullock/errors.hpp"

namespace tullock {

/// One contestant: production f(x) = efficiency * x^elasticity.
struct player {
    double efficiency = 1.0;  // a > 0
    double elasticity = 1.0;  // r > 0
};

/// Full game description: a reward and an ordered list of players.
struct contest_instance {
    double reward = 2.0;  // R > 1
    std::vector<player> players;

    int size() const { return static_cast<int>(players.size()); }
};

/// Non-negative effort levels, one per player.
struct effort_profile {
    std::vector<double> levels;
};

/// Non-negative production amounts, one per player.
struct production_profile {
    std::vector<double> amounts;

    double aggregate() const { return std::accumulate(amounts.begin(), amounts.end(), 0.0); }
};

enum class regime_tag { all_small, all_large, mixed_no_medium, has_medium };

/// Elasticity-regime classification with the index sets it is built from.
struct regime_class {
    regime_tag tag = regime_tag::all_small;
    std::vector<int> small_players;   // r <= 1
    std::vector<int> convex_players;  // r > 1
    std::vector<int> medium_players;  // r in (1, 2]

    int n1() const { return static_cast<int>(small_players.size()); }
    int n2() const { return static_cast<int>(convex_players.size()); }
};

namespace detail {

/// base^exponent through exp/log, with 0^e = 0 pinned for e > 0.
inline double pow_pos(double base, double exponent) {
    if (base == 0.0) return 0.0;
    return std::exp(exponent * std::log(base));
}

}  // namespace detail

/// Production amount f(x) = a * x^r.
inline double production(const player& p, double effort) {
    return p.efficiency * detail::pow_pos(effort, p.elasticity);
}

/// Effort needed to produce y: g(y) = (y/a)^(1/r), the inverse of production.
inline double cost_of_production(const player& p, double amount) {
    return detail::pow_pos(amount / p.efficiency, 1.0 / p.elasticity);
}

/// Marginal cost g'(y) = (1/(r a)) * (y/a)^(1/r - 1).
inline double marginal_cost(const player& p, double amount) {
    const double inv_r = 1.0 / p.elasticity;
    return inv_r / p.efficiency * detail::pow_pos(amount / p.efficiency, inv_r - 1.0);
}

/// Cost curvature g''(y); zero for the linear (r = 1) case.
inline double cost_curvature(const player& p, double amount) {
    const double inv_r = 1.0 / p.elasticity;
    if (inv_r == 1.0) return 0.0;
    return inv_r * (inv_r - 1.0) / (p.efficiency * p.efficiency) *
           detail::pow_pos(amount / p.efficiency, inv_r - 2.0);
}

inline production_profile to_production(const contest_instance& inst, const effort_profile& x) {
    production_profile y;
    y.amounts.reserve(x.levels.size());
    for (std::size_t i = 0; i < x.levels.size(); ++i)
        y.amounts.push_back(production(inst.players[i], x.levels[i]));
    return y;
}

/// Payoff in effort space: share-of-production times reward minus own effort.
inline double utility_effort(const contest_instance& inst, const effort_profile& x, int i) {
    double total = 0.0;
    for (std::size_t j = 0; j < x.levels.size(); ++j)
        total += production(inst.players[j], x.levels[j]);
    if (total == 0.0) throw all_zero_profile{};
    const double own = production(inst.players[i], x.levels[i]);
    return own / total * inst.reward - x.levels[i];
}

/// Payoff in production space: pi(y_i) = (y_i/A) R - g(y_i).
inline double utility_production(const contest_instance& inst, const production_profile& y, int i) {
    const double total = y.aggregate();
    if (total == 0.0) throw all_zero_profile{};
    return y.amounts[i] / total * inst.reward - cost_of_production(inst.players[i], y.amounts[i]);
}

inline regime_class classify_regime(const contest_instance& inst) {
    regime_class out;
    for (int i = 0; i < inst.size(); ++i) {
        const double r = inst.players[i].elasticity;
        if (r <= 1.0) {
            out.small_players.push_back(i);
        } else {
            out.convex_players.push_back(i);
            if (r <= 2.0) out.medium_players.push_back(i);
        }
    }
    if (out.convex_players.empty())
        out.tag = regime_tag::all_small;
    else if (out.small_players.empty() && out.medium_players.empty())
        out.tag = regime_tag::all_large;
    else if (!out.medium_players.empty())
        out.tag = regime_tag::has_medium;
    else
        out.tag = regime_tag::mixed_no_medium;
    return out;
}

inline const char* to_string(regime_tag tag) {
    switch (tag) {
        case regime_tag::all_small: return "AllSmall";
        case regime_tag::all_large: return "AllLarge";
        case regime_tag::mixed_no_medium: return "MixedNoMedium";
        case regime_tag::has_medium: return "HasMedium";
    }
    return "unknown";
}

/// Checks the instance invariants, throwing domain_error with a precise message.
inline void validate(const contest_instance& inst) {
    if (!(inst.reward > 1.0)) throw domain_error("R must exceed 1");
    if (inst.size() < 2) throw domain_error("instance needs at least 2 players");
    for (int i = 0; i < inst.size(); ++i) {
        if (!(inst.players[i].efficiency > 0.0))
            throw domain_error("players[" + std::to_string(i) + "].a must be positive");
        if (!(inst.players[i].elasticity > 0.0))
            throw domain_error("players[" + std::to_string(i) + "].r must be positive");
    }
}

}  // namespace tullock
