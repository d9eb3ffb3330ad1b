#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tullock/aggregate_search.hpp"
#include "tullock/best_response.hpp"
#include "tullock/contest.hpp"
#include "tullock/solutions.hpp"
#include "tullock/verify.hpp"

namespace tullock {

struct solve_outcome {
    enum class kind { found, no_pne, not_applicable };
    kind result = kind::no_pne;
    std::vector<equilibrium_certificate> certificates;  // sorted by aggregate when found
    std::string reason;
};

struct mirror_descent_config {
    double step_size = 0.0;  // base step in production space; 0 picks 0.05 * R
    long max_iterations = 100000;
    double stop_tolerance = 1e-10;
    std::optional<std::vector<double>> initial_efforts;
};

struct max_iterations_exceeded : error {
    effort_profile last;
    double residual;
    max_iterations_exceeded(effort_profile profile, double res)
        : error("mirror descent did not converge: residual " + std::to_string(res)),
          last(std::move(profile)),
          residual(res) {}
};

/// Unique equilibrium of an all-concave contest, located by bisection on the
/// aggregate action: the share sum decreases monotonically and equals one
/// exactly at the equilibrium aggregate.
inline equilibrium_certificate solve_small_elasticity(const contest_instance& inst, double tol) {
    const auto root = detail::unit_share_aggregate(inst, {}, 0.0,
                                                   std::numeric_limits<double>::infinity(), tol);
    if (!root) throw error("small-elasticity bisection failed to bracket the equilibrium");
    return detail::make_certificate(inst, *root, detail::active_shares_at(inst, {}, *root));
}

/// Simultaneous projected-gradient dynamics with exact utility gradients,
/// run in production space where the gradients stay bounded near zero.
/// Per-player steps are capped by the inverse local curvature, which keeps
/// the constant-step iteration stable across efficiency scales without
/// moving any fixed point.
inline effort_profile solve_mirror_descent(const contest_instance& inst,
                                           const mirror_descent_config& config) {
    const int n = inst.size();
    const double step_base = config.step_size > 0.0 ? config.step_size : 0.05 * inst.reward;

    std::vector<double> cap(n);  // beyond a R^r production, utility is negative
    for (int i = 0; i < n; ++i)
        cap[i] = inst.players[i].efficiency * detail::pow_pos(inst.reward, inst.players[i].elasticity);

    std::vector<double> y(n);
    if (config.initial_efforts) {
        for (int i = 0; i < n; ++i) y[i] = production(inst.players[i], (*config.initial_efforts)[i]);
    } else {
        for (int i = 0; i < n; ++i) y[i] = cap[i] * std::min(0.5, 1.0 / n);
    }

    std::vector<double> next(n);
    double moved = 0.0;
    for (long it = 0; it < config.max_iterations; ++it) {
        double total = 0.0;
        for (double v : y) total += v;
        moved = 0.0;
        for (int i = 0; i < n; ++i) {
            const player& p = inst.players[i];
            const double others = total - y[i];
            const double floor_amount = std::max(y[i], 1e-12 * cap[i]);
            const double grad =
                inst.reward * others / (total * total) - marginal_cost(p, floor_amount);
            const double curvature = 2.0 * inst.reward * others / (total * total * total) +
                                     cost_curvature(p, floor_amount);
            double step = step_base;
            if (curvature > 0.0) step = std::min(step, 0.5 / curvature);
            double delta = std::clamp(step * grad, -0.2 * cap[i], 0.2 * cap[i]);
            next[i] = std::clamp(y[i] + delta, 0.0, cap[i]);
            moved = std::max(moved, std::abs(next[i] - y[i]));
        }
        y.swap(next);
        if (moved < config.stop_tolerance) {
            effort_profile x;
            x.levels.resize(n);
            for (int i = 0; i < n; ++i) x.levels[i] = cost_of_production(inst.players[i], y[i]);
            return x;
        }
    }
    effort_profile x;
    x.levels.resize(n);
    for (int i = 0; i < n; ++i) x.levels[i] = cost_of_production(inst.players[i], y[i]);
    throw max_iterations_exceeded(std::move(x), moved);
}

/// Equilibria of contests with no medium elasticity. The concave-only active
/// set and every "concave players plus one convex player" set are each probed
/// with a monotone bisection; every hit is certified before being returned.
inline solve_outcome solve_mixed_regime(const contest_instance& inst, double tol) {
    const regime_class reg = classify_regime(inst);
    if (reg.tag == regime_tag::has_medium)
        return {solve_outcome::kind::not_applicable, {}, "instance has medium-elasticity players"};

    solve_outcome out;
    if (reg.tag == regime_tag::all_large) {
        // No-equilibrium regime: every active convex player would need a share
        // above 1/2, and a lone active player forces a zero aggregate.
        out.result = solve_outcome::kind::no_pne;
        out.reason = "all players have elasticity above 2";
        return out;
    }

    auto consider = [&](const std::vector<int>& convex_active, double lo, double hi) {
        const auto root = detail::unit_share_aggregate(inst, convex_active, lo, hi, tol);
        if (!root) return;
        equilibrium_certificate cert = detail::make_certificate(
            inst, *root, detail::active_shares_at(inst, convex_active, *root));
        if (check_pne(inst, cert, 10.0 * tol).passed) out.certificates.push_back(std::move(cert));
    };

    // Candidate: concave players only. Inactive convex players are rational
    // only once the aggregate reaches their lower thresholds.
    double concave_only_lo = 0.0;
    for (int j : reg.convex_players)
        concave_only_lo = std::max(concave_only_lo, thresholds(inst.players[j], inst.reward).lower);
    consider({}, concave_only_lo, std::numeric_limits<double>::infinity());

    // Candidates: concave players plus exactly one convex player. The active
    // convex player only caps the aggregate from above; rationality of the
    // other convex players is enforced by the certification filter, so the
    // search runs over the full (0, upper_j] domain.
    for (int j : reg.convex_players)
        consider({j}, 0.0, thresholds(inst.players[j], inst.reward).upper);

    std::sort(out.certificates.begin(), out.certificates.end(),
              [](const equilibrium_certificate& a, const equilibrium_certificate& b) {
                  if (a.aggregate != b.aggregate) return a.aggregate < b.aggregate;
                  return a.active < b.active;
              });
    out.result = out.certificates.empty() ? solve_outcome::kind::no_pne : solve_outcome::kind::found;
    if (out.result == solve_outcome::kind::no_pne) out.reason = "no candidate active set balances";
    return out;
}

}  // namespace tullock
