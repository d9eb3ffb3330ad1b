#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tullock/contest.hpp"

namespace tullock {

/// Subset sum restricted to targets at least twice the largest element.
struct sslt_instance {
    std::vector<double> elements;
    double target = 0.0;
};

inline void validate(const sslt_instance& sslt) {
    if (sslt.elements.empty()) throw invalid_sslt("elements must be non-empty");
    double max_element = 0.0;
    for (double z : sslt.elements) {
        if (!(z > 0.0)) throw invalid_sslt("elements must be positive");
        max_element = std::max(max_element, z);
    }
    if (sslt.target < 2.0 * max_element - 1e-12 * sslt.target)
        throw invalid_sslt("target must be at least twice the largest element");
}

/// Contest whose equilibria encode the SSLT instance: one medium-elasticity
/// player per element with participation ceiling exactly at the target, plus
/// a sentinel whose lower threshold sits at the target.
struct reduction_result {
    contest_instance contest;
    std::vector<int> element_to_player;  // element k -> player index
    int sentinel_index = -1;
    double eps_param = 0.0;
    bool sentinel_above_medium = false;  // sentinel elasticity exceeded 2
};

/// Default sentinel offset: a tenth of min(Z)/target, comfortably inside the
/// eps < min(Z)/target requirement.
inline double default_eps_param(const sslt_instance& sslt) {
    const double z_min = *std::min_element(sslt.elements.begin(), sslt.elements.end());
    return 0.1 * z_min / sslt.target;
}

inline reduction_result reduce_sslt_to_contest(const sslt_instance& sslt, double reward,
                                               double eps_param) {
    validate(sslt);
    if (!(reward > 1.0)) throw domain_error("R must exceed 1");
    const double z_min = *std::min_element(sslt.elements.begin(), sslt.elements.end());
    if (!(eps_param > 0.0) || eps_param >= z_min / sslt.target)
        throw bad_eps_param("eps parameter must lie in (0, min(Z)/target)");

    reduction_result out;
    out.eps_param = eps_param;
    out.contest.reward = reward;
    const double log_target = std::log(sslt.target);
    const double log_reward = std::log(reward);

    // Element players: r = 1/(1 - z/target) makes the boundary share equal
    // z/target; the efficiency is solved (in log space, the exponents grow
    // with target/z) so that the participation ceiling lands on the target.
    for (std::size_t k = 0; k < sslt.elements.size(); ++k) {
        const double w = sslt.elements[k] / sslt.target;
        const double r = 1.0 / (1.0 - w);
        const double log_a = log_target - r * log_reward - (r - 1.0) * std::log(r - 1.0) +
                             (r - 1.0) * std::log(r);
        out.contest.players.push_back({std::exp(log_a), r});
        out.element_to_player.push_back(static_cast<int>(k));
    }

    // Sentinel: lower threshold exactly at the target, so it abstains in any
    // equilibrium there yet blocks every aggregate below the target.
    const double r_s = 1.0 / (z_min / sslt.target - eps_param);
    const double log_a_s = log_target - r_s * log_reward - (r_s - 1.0) * std::log(r_s - 1.0) +
                           r_s * std::log(r_s);
    out.contest.players.push_back({std::exp(log_a_s), r_s});
    out.sentinel_index = static_cast<int>(sslt.elements.size());
    out.sentinel_above_medium = r_s > 2.0;
    return out;
}

inline reduction_result reduce_sslt_to_contest(const sslt_instance& sslt, double reward = 2.0) {
    return reduce_sslt_to_contest(sslt, reward, default_eps_param(sslt));
}

/// Exhaustive subset-sum oracle (Gray-code enumeration, 2^|Z| guarded).
inline std::optional<std::vector<int>> sslt_bruteforce(const sslt_instance& sslt) {
    const int n = static_cast<int>(sslt.elements.size());
    if (n > 25) throw too_large("sslt_bruteforce supports at most 25 elements");
    constexpr double match_tol = 1e-9;
    if (std::abs(sslt.target) <= match_tol) return std::vector<int>{};
    double sum = 0.0;
    std::uint64_t gray = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        const int bit = static_cast<int>(std::countr_zero(k));
        gray ^= std::uint64_t{1} << bit;
        sum += (gray & (std::uint64_t{1} << bit)) ? sslt.elements[bit] : -sslt.elements[bit];
        if (std::abs(sum - sslt.target) <= match_tol) {
            std::vector<int> subset;
            for (int b = 0; b < n; ++b)
                if (gray & (std::uint64_t{1} << b)) subset.push_back(b);
            return subset;
        }
    }
    return std::nullopt;
}

using sslt_oracle = std::function<bool(const sslt_instance&)>;

namespace detail {

inline bool subset_sum_recurse(std::vector<double> elements, double target,
                               const sslt_oracle& oracle) {
    constexpr double zero_tol = 1e-9;
    if (std::abs(target) <= zero_tol) return true;
    if (target < 0.0 || elements.empty()) return false;

    const double max_element = *std::max_element(elements.begin(), elements.end());
    if (target >= 2.0 * max_element) return oracle({elements, target});

    // Elements strictly above half the target cannot pair, so branch over
    // using at most one of them (or none) and recurse on the rest.
    std::vector<double> small;
    std::vector<double> large;
    for (double z : elements)
        (z > target / 2.0 ? large : small).push_back(z);
    if (subset_sum_recurse(small, target, oracle)) return true;
    for (double z : large)
        if (subset_sum_recurse(small, target - z, oracle)) return true;
    return false;
}

}  // namespace detail

/// Decides general subset sum using only an SSLT decision procedure, by
/// recursively splitting off the at-most-one usable large element until the
/// large-target condition holds.
inline bool subset_sum_via_sslt_oracle(const std::vector<double>& elements, double target,
                                       const sslt_oracle& oracle) {
    return detail::subset_sum_recurse(elements, target, oracle);
}

}  // namespace tullock
