#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "tullock/contest.hpp"
#include "tullock/errors.hpp"

namespace tullock {

/// Participation boundaries for a convex player (elasticity > 1). Below
/// `lower` the player is certainly active, above `upper` certainly inactive,
/// and in between both entering and abstaining can be rational.
struct player_thresholds {
    double lower = 0.0;  // a R^r (r-1)^(r-1) / r^r
    double upper = 0.0;  // r * lower
};

/// The admissible best-response action shares at a given aggregate.
enum class response_kind { zero, share, zero_or_share };

struct best_response_set {
    response_kind kind = response_kind::zero;
    double share = 0.0;  // meaningful unless kind == zero
};

namespace detail {

/// log of a R^r r^r, the sigma-independent factor of the convex response curve.
inline double convex_log_scale(const player& p, double reward) {
    return std::log(p.efficiency) +
           p.elasticity * (std::log(reward) + std::log(p.elasticity));
}

/// log of a R^r r^r (1-sigma)^r sigma^(r-1). Kept in log space so the
/// reduction instances with very large elasticities stay representable.
inline double log_convex_response(double log_scale, double elasticity, double sigma) {
    return log_scale + elasticity * std::log1p(-sigma) +
           (elasticity - 1.0) * std::log(sigma);
}

/// Root of log_convex_response(sigma) = log(aggregate) on the positive-utility
/// branch sigma in [(r-1)/r, 1). Safeguarded Newton; `hint` warm-starts it.
inline double solve_convex_share(double log_scale, double elasticity, double aggregate,
                                 double hint = -1.0) {
    const double branch_lo = (elasticity - 1.0) / elasticity;
    const double target = std::log(aggregate);
    double lo = branch_lo;
    double hi = 1.0 - 1e-15;
    if (log_convex_response(log_scale, elasticity, hi) >= target) return hi;

    double sigma = (hint > lo && hint < hi) ? hint : 0.5 * (lo + hi);
    for (int it = 0; it < 80; ++it) {
        const double f = log_convex_response(log_scale, elasticity, sigma) - target;
        if (f > 0.0)
            lo = sigma;
        else
            hi = sigma;
        if (hi - lo <= 4e-16 * hi) break;
        const double fprime =
            (elasticity - 1.0) / sigma - elasticity / (1.0 - sigma);
        double next = sigma - f / fprime;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - sigma) <= 1e-16) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    return std::clamp(sigma, branch_lo, 1.0 - 1e-15);
}

/// Root of (1-sigma)R = g'(sigma A) A on (0, 1) for a strictly concave
/// producer (r < 1). Solved for t = log(sigma): the condition rearranges to
///   (1/r - 1)(t + log(A/a)) - log(1 - e^t) = log(R r a / A),
/// whose left side increases in t. Near r = 1 the root can sit at tiny
/// shares; the log parameterization keeps those accurate.
inline double solve_concave_share(const player& p, double reward, double aggregate,
                                  double hint = -1.0) {
    const double coef = 1.0 / p.elasticity - 1.0;
    const double log_ratio = std::log(aggregate / p.efficiency);
    const double rhs = std::log(reward * p.elasticity * p.efficiency / aggregate);
    auto f_of = [&](double t) {
        return coef * (t + log_ratio) - std::log1p(-std::exp(t)) - rhs;
    };
    double lo = -745.0;  // below this the production itself underflows
    double hi = -1e-16;
    if (f_of(lo) >= 0.0) return 0.0;
    double t = (hint > 0.0 && hint < 1.0) ? std::log(hint) : -1.0;
    if (!(t > lo && t < hi)) t = -1.0;
    for (int it = 0; it < 300; ++it) {
        const double f = f_of(t);
        if (f < 0.0)
            lo = t;
        else
            hi = t;
        if (hi - lo <= 1e-15 * std::max(1.0, -hi)) break;
        const double et = std::exp(t);
        double next = t - f / (coef + et / (1.0 - et));
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 4e-16 * std::abs(t)) {
            t = next;
            break;
        }
        t = next;
    }
    return std::exp(t);
}

}  // namespace detail

inline player_thresholds thresholds(const player& p, double reward) {
    const double r = p.elasticity;
    if (r <= 1.0) throw not_convex_player(r);
    const double log_lower = std::log(p.efficiency) + r * std::log(reward) +
                             (r - 1.0) * std::log(r - 1.0) - r * std::log(r);
    player_thresholds t;
    t.lower = std::exp(log_lower);
    t.upper = r * t.lower;
    return t;
}

/// Residual of the concave best-response condition b1 = (1-sigma)R - g'(sigma A) A.
inline double b1_residual(const player& p, double reward, double aggregate, double sigma) {
    return (1.0 - sigma) * reward - marginal_cost(p, sigma * aggregate) * aggregate;
}

/// Residual of the convex best-response condition b2 = a R^r r^r (1-s)^r s^(r-1) - A.
inline double b2_residual(const player& p, double reward, double aggregate, double sigma) {
    const double log_scale = detail::convex_log_scale(p, reward);
    return std::exp(detail::log_convex_response(log_scale, p.elasticity, sigma)) - aggregate;
}

/// Best-response share for r <= 1. For r = 1 the closed form 1 - A/(aR)
/// applies, cut off at zero once A reaches R f'(0) = aR.
inline double k1_share(const player& p, double reward, double aggregate) {
    if (p.elasticity > 1.0) throw error("k1_share requires elasticity <= 1");
    if (p.elasticity == 1.0)
        return std::max(0.0, 1.0 - aggregate / (p.efficiency * reward));
    return detail::solve_concave_share(p, reward, aggregate);
}

/// Best-response share for r > 1 on the positive-utility branch; defined for
/// aggregates up to the participation ceiling.
inline double k2_share(const player& p, double reward, double aggregate) {
    if (p.elasticity <= 1.0) throw not_convex_player(p.elasticity);
    const player_thresholds t = thresholds(p, reward);
    if (aggregate > t.upper) {
        if (aggregate > t.upper * (1.0 + 1e-12)) throw above_upper_threshold(aggregate, t.upper);
        aggregate = t.upper;
    }
    return detail::solve_convex_share(detail::convex_log_scale(p, reward), p.elasticity,
                                      aggregate);
}

inline best_response_set best_response_share(const player& p, double reward, double aggregate) {
    if (p.elasticity <= 1.0) {
        if (p.elasticity == 1.0 && aggregate >= reward * p.efficiency)
            return {response_kind::zero, 0.0};
        return {response_kind::share, k1_share(p, reward, aggregate)};
    }
    const player_thresholds t = thresholds(p, reward);
    if (aggregate > t.upper) return {response_kind::zero, 0.0};
    const double sigma = k2_share(p, reward, aggregate);
    if (aggregate <= t.lower) return {response_kind::share, sigma};
    return {response_kind::zero_or_share, sigma};
}

/// d(sigma)/dA of the best-response share, via implicit differentiation.
inline double share_derivative(const player& p, double reward, double aggregate) {
    const double r = p.elasticity;
    if (r == 1.0) {
        const double cutoff = p.efficiency * reward;
        return aggregate < cutoff ? -1.0 / cutoff : 0.0;
    }
    if (r < 1.0) {
        const double sigma = k1_share(p, reward, aggregate);
        const double amount = sigma * aggregate;
        const double curvature = cost_curvature(p, amount);
        const double numer = curvature * sigma * aggregate + marginal_cost(p, amount);
        const double denom = reward + curvature * aggregate * aggregate;
        return -numer / denom;
    }
    const player_thresholds t = thresholds(p, reward);
    if (std::abs(aggregate - t.upper) <= 1e-12 * t.upper) throw at_discontinuity(aggregate);
    if (aggregate > t.upper) throw above_upper_threshold(aggregate, t.upper);
    const double sigma = k2_share(p, reward, aggregate);
    return 1.0 / (aggregate * ((r - 1.0) / sigma - r / (1.0 - sigma)));
}

namespace detail {

/// Largest |d sigma/dA| over a midpoint grid on [lo, hi].
inline double max_share_slope(const player& p, double reward, double lo, double hi,
                              int samples = 1000) {
    if (!(hi > lo) || samples <= 0) return 0.0;
    const double step = (hi - lo) / samples;
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double a = lo + (k + 0.5) * step;
        worst = std::max(worst, std::abs(share_derivative(p, reward, a)));
    }
    return worst;
}

/// Upper end of the concave-regime bisection bracket: the first doubling of
/// R*max(a) at which the all-small share sum drops below one.
inline double small_regime_bracket_hi(const contest_instance& inst) {
    double max_eff = 0.0;
    for (const auto& p : inst.players) max_eff = std::max(max_eff, p.efficiency);
    double hi = std::max(inst.reward * max_eff, 1.0);
    for (int it = 0; it < 200; ++it) {
        double sum = 0.0;
        for (const auto& p : inst.players)
            if (p.elasticity <= 1.0) sum += k1_share(p, inst.reward, hi);
        if (sum < 1.0) break;
        hi *= 2.0;
    }
    return hi;
}

}  // namespace detail

/// Sampled upper bound on max |d sigma/dA| over the FPTAS-relevant aggregate
/// range, doubled as a safety margin. Controls the candidate-node spacing.
inline double rho_bound(const contest_instance& inst) {
    const regime_class reg = classify_regime(inst);
    double lo = 0.0;
    double hi = 0.0;
    if (!reg.convex_players.empty()) {
        lo = std::numeric_limits<double>::infinity();
        for (int j : reg.convex_players) {
            const player_thresholds t = thresholds(inst.players[j], inst.reward);
            lo = std::min(lo, t.lower);
            hi = std::max(hi, t.upper);
        }
    } else {
        hi = detail::small_regime_bracket_hi(inst);
        lo = hi / 1024.0;
    }
    double worst = 0.0;
    for (const auto& p : inst.players) {
        double player_hi = hi;
        if (p.elasticity > 1.0)
            player_hi = std::min(player_hi, thresholds(p, inst.reward).upper);
        else if (p.elasticity == 1.0)
            player_hi = std::min(player_hi, p.efficiency * inst.reward);
        if (player_hi <= lo) continue;
        worst = std::max(worst, detail::max_share_slope(p, inst.reward, lo, player_hi));
    }
    return 2.0 * worst;
}

}  // namespace tullock
