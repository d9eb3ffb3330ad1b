#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "tullock/aggregate_search.hpp"
#include "tullock/best_response.hpp"
#include "tullock/contest.hpp"
#include "tullock/solutions.hpp"

namespace tullock {

struct violation {
    std::string condition;  // which equilibrium condition failed
    int player = -1;        // -1 for instance-wide conditions
    double magnitude = 0.0;
};

struct verification_report {
    bool passed = true;
    std::vector<violation> violations;
    double tolerance = 0.0;
};

/// Measured Lipschitz data for the approximate-to-exact conversion: share and
/// utility bounds over the relevant aggregate range, and the regret factor
/// L = L_u / (L_sigma * n).
struct lipschitz_bounds {
    double share_bound = 0.0;
    double utility_bound = 0.0;
    double conversion = 0.0;
};

struct regret_bound {
    double measured = 0.0;
    double lipschitz_bound = 0.0;
};

namespace detail {

inline void check_triplet_conditions(const contest_instance& inst, double aggregate,
                                     const std::vector<int>& active,
                                     const std::vector<double>& shares, double tol,
                                     verification_report& report) {
    const double slack = tol * std::max(1.0, aggregate);
    std::vector<char> is_active(inst.players.size(), 0);
    for (int i : active) is_active[i] = 1;

    auto flag = [&](std::string condition, int who, double magnitude) {
        report.violations.push_back({std::move(condition), who, magnitude});
    };

    for (int i = 0; i < inst.size(); ++i) {
        const player& p = inst.players[i];
        const double r = p.elasticity;
        if (is_active[i]) {
            const auto pos = std::find(active.begin(), active.end(), i) - active.begin();
            const double sigma = shares[pos];
            if (!(sigma > 0.0)) flag("share-positive", i, -sigma);
            if (r > 1.0) {
                const player_thresholds t = thresholds(p, inst.reward);
                if (aggregate - t.upper > slack)
                    flag("rationality-active", i, aggregate - t.upper);
                const double branch = (r - 1.0) / r;
                if (branch - sigma > tol) flag("k2-branch", i, branch - sigma);
                const double resid = std::abs(b2_residual(p, inst.reward, aggregate, sigma));
                if (resid > tol * std::max(1.0, aggregate)) flag("best-response", i, resid);
            } else {
                if (r == 1.0 && aggregate - p.efficiency * inst.reward > slack)
                    flag("rationality-active", i, aggregate - p.efficiency * inst.reward);
                const double resid = std::abs(b1_residual(p, inst.reward, aggregate, sigma));
                if (resid > tol * std::max(1.0, inst.reward)) flag("best-response", i, resid);
            }
        } else {
            if (r < 1.0) {
                flag("rationality-inactive", i, 1.0);
            } else if (r == 1.0) {
                if (p.efficiency * inst.reward - aggregate > slack)
                    flag("rationality-inactive", i, p.efficiency * inst.reward - aggregate);
            } else {
                const player_thresholds t = thresholds(p, inst.reward);
                if (t.lower - aggregate > slack)
                    flag("rationality-inactive", i, t.lower - aggregate);
            }
        }
    }
}

}  // namespace detail

/// Certifies an exact equilibrium triplet against the three equilibrium
/// conditions: participation rationality, best-response consistency, and a
/// unit share sum. Failures are reported, never thrown.
inline verification_report check_pne(const contest_instance& inst,
                                     const equilibrium_certificate& cert, double tol) {
    verification_report report;
    report.tolerance = tol;
    detail::check_triplet_conditions(inst, cert.aggregate, cert.active, cert.shares, tol, report);
    const double sum = cert.share_sum();
    if (std::abs(sum - 1.0) > tol)
        report.violations.push_back({"share-sum", -1, std::abs(sum - 1.0)});
    report.passed = report.violations.empty();
    return report;
}

/// Same conditions with the share sum relaxed to the open band
/// (1 - eps, 1 + eps); the band edges themselves fail.
inline verification_report check_eps_solution(const contest_instance& inst,
                                              const eps_solution& sol) {
    constexpr double residual_tol = 1e-8;
    verification_report report;
    report.tolerance = residual_tol;
    detail::check_triplet_conditions(inst, sol.aggregate, sol.active, sol.shares, residual_tol,
                                     report);
    double sum = 0.0;
    for (double s : sol.shares) sum += s;
    if (!(sum > 1.0 - sol.epsilon && sum < 1.0 + sol.epsilon))
        report.violations.push_back({"share-sum-band", -1, std::abs(sum - 1.0)});
    report.passed = report.violations.empty();
    return report;
}

namespace detail {

inline double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    constexpr double ratio = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 160; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
    }
    return f(0.5 * (a + b));
}

/// Supremum of R y/(y+B) - g(y) over y >= 0 against fixed opponents' total B.
inline double best_entry_value(const player& p, double reward, double opponents) {
    const double r = p.elasticity;
    auto value = [&](double y) {
        return reward * y / (y + opponents) - cost_of_production(p, y);
    };
    if (r <= 1.0) {
        // Concave objective: at most one stationary point.
        if (r == 1.0 && p.efficiency * reward <= opponents) return 0.0;
        auto slope = [&](double y) {
            return reward * opponents / ((y + opponents) * (y + opponents)) - marginal_cost(p, y);
        };
        double hi = std::max(opponents, p.efficiency * pow_pos(reward, r));
        for (int it = 0; it < 200 && slope(hi) > 0.0; ++it) hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (slope(mid) > 0.0 ? lo : hi) = mid;
            if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
        }
        return std::max(0.0, value(0.5 * (lo + hi)));
    }

    // Convex production: stationary entries solve
    //   a R^r r^r (1-s)^(r+1) s^(r-1) = B
    // on the decreasing branch s > (r-1)/(2r); the other root is a minimum.
    double best = 0.0;
    const double log_scale = convex_log_scale(p, reward);
    const double log_target = std::log(opponents);
    auto log_curve = [&](double s) {
        return log_scale + (r + 1.0) * std::log1p(-s) + (r - 1.0) * std::log(s);
    };
    const double peak = (r - 1.0) / (2.0 * r);
    if (log_curve(peak) >= log_target) {
        double lo = peak, hi = 1.0 - 1e-15;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (log_curve(mid) >= log_target ? lo : hi) = mid;
            if (hi - lo <= 1e-16) break;
        }
        const double sigma = 0.5 * (lo + hi);
        best = std::max(best, sigma * reward -
                                  cost_of_production(p, sigma * opponents / (1.0 - sigma)));
    }
    // Coarse scan + golden refinement as a shape-independent fallback.
    const double cap = p.efficiency * pow_pos(reward, r);
    double scan_best = 0.0, scan_arg = 0.0;
    for (int k = 1; k <= 64; ++k) {
        const double y = cap * k / 64.0;
        const double v = value(y);
        if (v > scan_best) {
            scan_best = v;
            scan_arg = y;
        }
    }
    if (scan_best > 0.0)
        best = std::max(best, golden_max(value, std::max(0.0, scan_arg - cap / 64.0),
                                         std::min(cap, scan_arg + cap / 64.0)));
    return std::max(0.0, best);
}

}  // namespace detail

/// Largest utility gain player i can obtain by unilaterally deviating from
/// the given effort profile. Zero (up to numerics) exactly at equilibria.
inline double regret(const contest_instance& inst, const effort_profile& x, int i) {
    double opponents = 0.0;
    for (int j = 0; j < inst.size(); ++j)
        if (j != i) opponents += production(inst.players[j], x.levels[j]);
    if (opponents == 0.0) throw all_zero_opponents{};
    const double current = utility_effort(inst, x, i);
    const double best = detail::best_entry_value(inst.players[i], inst.reward, opponents);
    return std::max(0.0, best - current);
}

namespace detail {

inline std::pair<double, double> fptas_range(const contest_instance& inst) {
    const regime_class reg = classify_regime(inst);
    if (!reg.convex_players.empty()) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (int j : reg.convex_players) {
            const player_thresholds t = thresholds(inst.players[j], inst.reward);
            lo = std::min(lo, t.lower);
            hi = std::max(hi, t.upper);
        }
        return {lo, hi};
    }
    const double hi = small_regime_bracket_hi(inst);
    return {hi / 1024.0, hi};
}

/// Best-response utility of a player as a function of the aggregate action.
inline double response_utility(const player& p, double reward, double aggregate) {
    double sigma = 0.0;
    if (p.elasticity <= 1.0) {
        sigma = k1_share(p, reward, aggregate);
    } else {
        if (aggregate > thresholds(p, reward).upper) return 0.0;
        sigma = k2_share(p, reward, aggregate);
    }
    if (sigma == 0.0) return 0.0;
    return sigma * reward - cost_of_production(p, sigma * aggregate);
}

}  // namespace detail

/// Samples share and utility slopes over each player's continuity interval
/// (the participation ceilings excluded) and doubles them as safety margins.
inline lipschitz_bounds lipschitz_estimates(const contest_instance& inst) {
    const auto [lo, hi] = detail::fptas_range(inst);
    lipschitz_bounds out;
    out.share_bound = rho_bound(inst);
    constexpr int samples = 1000;
    for (const player& p : inst.players) {
        double player_hi = hi;
        if (p.elasticity > 1.0)
            player_hi = std::min(player_hi, thresholds(p, inst.reward).upper);
        if (player_hi <= lo) continue;
        const double step = (player_hi - lo) / (samples + 1);
        double prev = detail::response_utility(p, inst.reward, lo + 0.5 * step);
        for (int k = 1; k <= samples; ++k) {
            const double a = lo + (k + 0.5) * step;
            const double cur = detail::response_utility(p, inst.reward, a);
            out.utility_bound = std::max(out.utility_bound, std::abs(cur - prev) / step);
            prev = cur;
        }
    }
    out.utility_bound *= 2.0;
    out.conversion = out.utility_bound / (out.share_bound * inst.size());
    return out;
}

/// Worst measured regret over all players at the profile a solution induces,
/// next to the analytic (L eps) bound it should respect.
inline regret_bound eps_ne_bound(const contest_instance& inst, const eps_solution& sol) {
    const effort_profile x = detail::efforts_of(inst, sol);
    regret_bound out;
    for (int i = 0; i < inst.size(); ++i) out.measured = std::max(out.measured, regret(inst, x, i));
    out.lipschitz_bound = lipschitz_estimates(inst).conversion * sol.epsilon;
    return out;
}

/// Ground-truth equilibrium oracle. Enumerates every convex active subset;
/// monotonicity makes the share sum cross one at a single aggregate per
/// subset, so one bisection each suffices. Hits are filtered through
/// check_pne. Guarded to 2^12 subsets.
inline std::vector<equilibrium_certificate> brute_force_pne(const contest_instance& inst,
                                                            double tol) {
    const regime_class reg = classify_regime(inst);
    const int n2 = reg.n2();
    if (n2 > 12) throw too_large("brute_force_pne supports at most 12 convex players");
    std::vector<equilibrium_certificate> found;
    for (unsigned mask = 0; mask < (1u << n2); ++mask) {
        std::vector<int> subset;
        double hi = std::numeric_limits<double>::infinity();
        for (int b = 0; b < n2; ++b) {
            if (!(mask & (1u << b))) continue;
            const int j = reg.convex_players[b];
            subset.push_back(j);
            hi = std::min(hi, thresholds(inst.players[j], inst.reward).upper);
        }
        const auto root = detail::unit_share_aggregate(inst, subset, 0.0, hi, 1e-10);
        if (!root) continue;
        equilibrium_certificate cert = detail::make_certificate(
            inst, *root, detail::active_shares_at(inst, subset, *root));
        if (check_pne(inst, cert, tol).passed) found.push_back(std::move(cert));
    }
    std::sort(found.begin(), found.end(),
              [](const equilibrium_certificate& a, const equilibrium_certificate& b) {
                  if (a.aggregate != b.aggregate) return a.aggregate < b.aggregate;
                  return a.active < b.active;
              });
    return found;
}

}  // namespace tullock
