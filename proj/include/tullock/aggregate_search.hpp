#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "tullock/best_response.hpp"
#include "tullock/contest.hpp"

namespace tullock::detail {

/// Share sum at aggregate A for a fixed convex active subset. Concave players
/// contribute through k1 with its own cutoff; listed convex players through k2
/// (the caller keeps A within their ceilings).
inline double active_share_sum(const contest_instance& inst,
                               const std::vector<int>& convex_active, double aggregate) {
    double sum = 0.0;
    for (int i = 0; i < inst.size(); ++i)
        if (inst.players[i].elasticity <= 1.0)
            sum += k1_share(inst.players[i], inst.reward, aggregate);
    for (int j : convex_active) sum += k2_share(inst.players[j], inst.reward, aggregate);
    return sum;
}

inline std::vector<std::pair<int, double>> active_shares_at(
    const contest_instance& inst, const std::vector<int>& convex_active, double aggregate) {
    std::vector<std::pair<int, double>> shares;
    for (int i = 0; i < inst.size(); ++i) {
        if (inst.players[i].elasticity > 1.0) continue;
        const double sigma = k1_share(inst.players[i], inst.reward, aggregate);
        // Linear producers sit exactly at their cutoff within solver noise;
        // strictly concave producers are active whenever representable.
        const double active_floor = inst.players[i].elasticity == 1.0 ? 1e-12 : 0.0;
        if (sigma > active_floor) shares.emplace_back(i, sigma);
    }
    for (int j : convex_active)
        shares.emplace_back(j, k2_share(inst.players[j], inst.reward, aggregate));
    std::sort(shares.begin(), shares.end());
    return shares;
}

/// Finds the aggregate at which the fixed-active-set share sum hits one.
///
/// Every share falls monotonically in A, so the sum crosses one at most once
/// and a single bisection suffices. `lo <= 0` means "extend downward by halving";
/// `hi = +inf` means "extend upward by doubling". Returns the root when the
/// final residual is within sum_tol, otherwise nullopt.
inline std::optional<double> unit_share_aggregate(const contest_instance& inst,
                                                  const std::vector<int>& convex_active,
                                                  double lo, double hi, double sum_tol) {
    auto sum_at = [&](double a) { return active_share_sum(inst, convex_active, a); };

    if (std::isinf(hi)) {
        hi = std::max(lo, small_regime_bracket_hi(inst));
        for (int it = 0; it < 200 && sum_at(hi) >= 1.0; ++it) hi *= 2.0;
    }
    if (sum_at(hi) > 1.0 + sum_tol) return std::nullopt;

    if (lo <= 0.0) {
        lo = hi * 0.5;
        int it = 0;
        for (; it < 400 && sum_at(lo) < 1.0; ++it) lo *= 0.5;
        if (it == 400) return std::nullopt;  // sum approaches 1 from below, never crosses
    } else if (sum_at(lo) < 1.0 - sum_tol) {
        return std::nullopt;
    }

    double a = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        a = 0.5 * (lo + hi);
        const double s = sum_at(a);
        if (s >= 1.0)
            lo = a;
        else
            hi = a;
        if (hi - lo <= 8e-16 * hi) break;
    }
    a = 0.5 * (lo + hi);
    if (std::abs(sum_at(a) - 1.0) > sum_tol) return std::nullopt;
    return a;
}

}  // namespace tullock::detail
