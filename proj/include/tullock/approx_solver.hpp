#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "tullock/aggregate_search.hpp"
#include "tullock/best_response.hpp"
#include "tullock/contest.hpp"
#include "tullock/exact_solvers.hpp"
#include "tullock/solutions.hpp"

namespace tullock {

/// Aggregate values at which an approximate solution is verified: a delta-
/// spaced grid over the convex players' participation window plus every
/// threshold, where the response correspondence jumps.
struct candidate_nodes {
    std::vector<double> nodes;  // ascending, deduplicated
    double delta = 0.0;
    std::vector<double> boundary_points;  // the {lower, upper} contributions
};

/// One potentially-active convex player at a node, carrying its k2 share.
struct share_item {
    int player = -1;
    double share = 0.0;
};

/// Grid-spacing policy: strictly inside the delta < eps/(rho n) requirement,
/// with the extra factor of two absorbing the sampling error in rho.
inline double grid_delta(double eps, double rho, int players) {
    return eps / (2.0 * rho * players);
}

inline double choose_delta(const contest_instance& inst, double eps) {
    return grid_delta(eps, rho_bound(inst), inst.size());
}

inline candidate_nodes build_candidate_nodes(const contest_instance& inst, double delta) {
    const regime_class reg = classify_regime(inst);
    if (reg.convex_players.empty()) throw no_convex_players{};
    candidate_nodes out;
    out.delta = delta;
    double under = std::numeric_limits<double>::infinity();
    double bar = 0.0;
    for (int j : reg.convex_players) {
        const player_thresholds t = thresholds(inst.players[j], inst.reward);
        out.boundary_points.push_back(t.lower);
        out.boundary_points.push_back(t.upper);
        under = std::min(under, t.lower);
        bar = std::max(bar, t.upper);
    }
    std::sort(out.boundary_points.begin(), out.boundary_points.end());
    const double span = bar - under;
    const double count = std::floor(span / delta + 1e-9);
    if (count > 1e8) throw too_large("candidate grid would exceed 1e8 nodes");
    out.nodes = out.boundary_points;
    for (long k = 1; k <= static_cast<long>(count); ++k) out.nodes.push_back(under + k * delta);
    std::sort(out.nodes.begin(), out.nodes.end());
    out.nodes.erase(std::unique(out.nodes.begin(), out.nodes.end()), out.nodes.end());
    out.boundary_points.erase(std::unique(out.boundary_points.begin(), out.boundary_points.end()),
                              out.boundary_points.end());
    return out;
}

/// Sparsifies an ascending positive list: the first value is kept, and each
/// later value only when it exceeds the last kept one by a relative delta.
inline std::vector<double> trim_from_below(const std::vector<double>& values, double delta) {
    std::vector<double> kept;
    if (values.empty()) return kept;
    kept.push_back(values.front());
    double last = values.front();
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] > (1.0 + delta) * last) {
            kept.push_back(values[k]);
            last = values[k];
        }
    }
    return kept;
}

/// Mirror of trim_from_below for a descending list: keep a value only when it
/// falls below the last kept one by a relative delta.
inline std::vector<double> trim_from_above(const std::vector<double>& values, double delta) {
    std::vector<double> kept;
    if (values.empty()) return kept;
    kept.push_back(values.front());
    double last = values.front();
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] < (1.0 - delta) * last) {
            kept.push_back(values[k]);
            last = values[k];
        }
    }
    return kept;
}

namespace detail {

struct dp_entry {
    double sum = 0.0;
    std::uint64_t mask = 0;
};

/// One round of "extend by sigma, then trim" fused into a single merge pass.
/// `ascending` selects the below-trim (X) or above-trim (Y) discipline.
/// Partial sums at or above the band ceiling are dropped: items are positive,
/// so such sums can never re-enter the band.
inline void extend_and_trim(const std::vector<dp_entry>& cur, double sigma, std::uint64_t bit,
                            double trim_delta, double ceiling, bool ascending,
                            std::vector<dp_entry>& out) {
    out.clear();
    std::size_t i = 0;  // plain stream
    std::size_t j = 0;  // stream shifted by sigma
    bool kept_any = false;
    double last = 0.0;
    while (i < cur.size() || j < cur.size()) {
        dp_entry candidate;
        bool take_plain;
        if (i >= cur.size())
            take_plain = false;
        else if (j >= cur.size())
            take_plain = true;
        else if (ascending)
            take_plain = cur[i].sum <= cur[j].sum + sigma;
        else
            take_plain = cur[i].sum >= cur[j].sum + sigma;
        if (take_plain) {
            candidate = cur[i++];
        } else {
            candidate = {cur[j].sum + sigma, cur[j].mask | bit};
            ++j;
        }
        if (candidate.sum >= ceiling) {
            if (ascending) break;  // everything after is larger still
            continue;
        }
        if (!kept_any) {
            out.push_back(candidate);
            last = candidate.sum;
            kept_any = true;
        } else if (ascending ? candidate.sum > (1.0 + trim_delta) * last
                             : candidate.sum < (1.0 - trim_delta) * last) {
            out.push_back(candidate);
            last = candidate.sum;
        }
    }
}

/// Dual trimmed-list subset-sum core: a below-trimmed ascending list and an
/// above-trimmed descending list, both seeded with the base sum and extended
/// by every item. Returns the surviving in-band sum closest to one.
inline std::optional<dp_entry> trimmed_subset_sum(double base, const double* shares, int count,
                                                  double eps, std::vector<dp_entry>& xa,
                                                  std::vector<dp_entry>& xb,
                                                  std::vector<dp_entry>& ya,
                                                  std::vector<dp_entry>& yb) {
    const double ceiling = 1.0 + eps;
    const double trim_delta = count > 0 ? eps / (2.0 * count) : 0.0;
    xa.clear();
    ya.clear();
    if (base < ceiling) {
        xa.push_back({base, 0});
        ya.push_back({base, 0});
    }
    for (int i = 0; i < count; ++i) {
        const std::uint64_t bit = std::uint64_t{1} << i;
        extend_and_trim(xa, shares[i], bit, trim_delta, ceiling, true, xb);
        xa.swap(xb);
        extend_and_trim(ya, shares[i], bit, trim_delta, ceiling, false, yb);
        ya.swap(yb);
    }
    std::optional<dp_entry> best;
    auto consider = [&](const dp_entry& e) {
        if (!(e.sum > 1.0 - eps && e.sum < 1.0 + eps)) return;
        if (!best || std::abs(e.sum - 1.0) < std::abs(best->sum - 1.0)) best = e;
    };
    for (const dp_entry& e : xa) consider(e);
    for (const dp_entry& e : ya) consider(e);
    return best;
}

/// Exact reachability filter: true when some subset lands in the open band,
/// judged with a hair of slack so edge-of-band rounding can never disagree
/// with the trimmed algorithm this guards. Used only to skip provably
/// fruitless trimmed-DP runs; when it reports true the trimmed algorithm
/// still decides the outcome.
inline bool some_subset_in_band(double base, const double* shares, int count, double eps) {
    const double lo = 1.0 - eps - 1e-9;
    const double hi = 1.0 + eps + 1e-9;
    double sum = base;
    if (sum > lo && sum < hi) return true;
    std::uint64_t gray = 0;
    const std::uint64_t total = std::uint64_t{1} << count;
    for (std::uint64_t k = 1; k < total; ++k) {
        const int bit = static_cast<int>(std::countr_zero(k));
        const std::uint64_t flipped = gray ^ (std::uint64_t{1} << bit);
        sum += (flipped & (std::uint64_t{1} << bit)) ? shares[bit] : -shares[bit];
        gray = flipped;
        if (sum > lo && sum < hi) return true;
    }
    return false;
}

}  // namespace detail

/// Approximate subset-sum over action-share items (Algorithm-style dual
/// trimmed lists). Returns a subset whose total plus the base lies in the
/// open band (1-eps, 1+eps), or nothing when no surviving value qualifies.
inline std::optional<std::vector<share_item>> approx_subset_sum(double base_sum,
                                                                const std::vector<share_item>& items,
                                                                double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw error("eps must lie in (0, 1)");
    if (items.size() > 64) throw too_large("approx_subset_sum supports at most 64 items");
    if (items.empty()) {
        if (base_sum > 1.0 - eps && base_sum < 1.0 + eps) return std::vector<share_item>{};
        return std::nullopt;
    }
    std::vector<double> shares(items.size());
    for (std::size_t k = 0; k < items.size(); ++k) shares[k] = items[k].share;
    std::vector<detail::dp_entry> xa, xb, ya, yb;
    const auto best = detail::trimmed_subset_sum(base_sum, shares.data(),
                                                 static_cast<int>(items.size()), eps, xa, xb, ya, yb);
    if (!best) return std::nullopt;
    std::vector<share_item> chosen;
    for (std::size_t k = 0; k < items.size(); ++k)
        if (best->mask & (std::uint64_t{1} << k)) chosen.push_back(items[k]);
    return chosen;
}

namespace detail {

struct node_player {
    bool convex = false;
    double elasticity = 0.0;
    double lower = 0.0;   // convex thresholds
    double upper = 0.0;
    double log_scale = 0.0;
    double cutoff = 0.0;  // r = 1 participation cutoff a R
    double last_sigma = -1.0;
};

struct node_scan_state {
    std::vector<node_player> players;
    std::vector<std::pair<int, double>> base_active;
    std::vector<share_item> items;
    std::vector<double> item_shares;
    std::vector<dp_entry> xa, xb, ya, yb;
};

inline node_scan_state make_scan_state(const contest_instance& inst) {
    node_scan_state st;
    st.players.resize(inst.players.size());
    for (int i = 0; i < inst.size(); ++i) {
        const player& p = inst.players[i];
        node_player& np = st.players[i];
        np.elasticity = p.elasticity;
        np.convex = p.elasticity > 1.0;
        if (np.convex) {
            const player_thresholds t = thresholds(p, inst.reward);
            np.lower = t.lower;
            np.upper = t.upper;
            np.log_scale = convex_log_scale(p, inst.reward);
        } else if (p.elasticity == 1.0) {
            np.cutoff = p.efficiency * inst.reward;
        }
    }
    return st;
}

/// Verifies one candidate node. Certain participants (concave players below
/// their cutoffs, convex players strictly below their lower thresholds) form
/// the base sum; convex players inside their closed ambiguity window become
/// selectable items; the trimmed subset-sum picks the active set.
inline std::optional<eps_solution> scan_node(const contest_instance& inst, node_scan_state& st,
                                             double aggregate, double eps) {
    st.base_active.clear();
    st.items.clear();
    st.item_shares.clear();
    double base = 0.0;
    for (int i = 0; i < inst.size(); ++i) {
        node_player& np = st.players[i];
        if (!np.convex) {
            double sigma;
            if (np.elasticity == 1.0) {
                if (aggregate >= np.cutoff) continue;
                sigma = 1.0 - aggregate / np.cutoff;
            } else {
                sigma = solve_concave_share(inst.players[i], inst.reward, aggregate, np.last_sigma);
                np.last_sigma = sigma;
            }
            base += sigma;
            st.base_active.emplace_back(i, sigma);
            continue;
        }
        if (aggregate > np.upper * (1.0 + 1e-12)) continue;
        const double sigma = solve_convex_share(np.log_scale, np.elasticity,
                                                std::min(aggregate, np.upper), np.last_sigma);
        np.last_sigma = sigma;
        if (aggregate < np.lower * (1.0 - 1e-12)) {
            base += sigma;
            st.base_active.emplace_back(i, sigma);
        } else {
            st.items.push_back({i, sigma});
            st.item_shares.push_back(sigma);
        }
    }

    double reachable_max = base;
    for (double s : st.item_shares) reachable_max += s;
    if (reachable_max <= 1.0 - eps || base >= 1.0 + eps) return std::nullopt;
    const int count = static_cast<int>(st.items.size());
    if (count <= 12 && !some_subset_in_band(base, st.item_shares.data(), count, eps))
        return std::nullopt;

    const auto best = trimmed_subset_sum(base, st.item_shares.data(), count, eps, st.xa, st.xb,
                                         st.ya, st.yb);
    if (!best) return std::nullopt;

    eps_solution sol;
    sol.aggregate = aggregate;
    sol.epsilon = eps;
    std::vector<std::pair<int, double>> chosen = st.base_active;
    for (int k = 0; k < count; ++k)
        if (best->mask & (std::uint64_t{1} << k))
            chosen.emplace_back(st.items[k].player, st.items[k].share);
    std::sort(chosen.begin(), chosen.end());
    for (auto& [index, sigma] : chosen) {
        sol.active.push_back(index);
        sol.shares.push_back(sigma);
        sol.share_sum += sigma;
    }
    return sol;
}

}  // namespace detail

/// Single-node verification with a fresh solver state (see scan_node).
inline std::optional<eps_solution> verify_node(const contest_instance& inst, double aggregate,
                                               double eps) {
    detail::node_scan_state st = detail::make_scan_state(inst);
    return detail::scan_node(inst, st, aggregate, eps);
}

struct search_report {
    std::vector<eps_solution> solutions;
    // Outer-region binary searches land on unit share sums (residual 1e-10),
    // so those hits double as exact certificates.
    std::vector<equilibrium_certificate> exact_certificates;
    double rho = 0.0;
    double delta = 0.0;
    long long nodes_total = 0;     // candidate nodes inside the scan window
    long long nodes_verified = 0;  // nodes that ran subset verification
    long long nodes_pruned = 0;    // nodes skipped by monotone segment bounds
};

namespace detail {

inline void append_region_solution(const contest_instance& inst,
                                   const std::vector<int>& convex_active, double lo, double hi,
                                   double eps, search_report& report) {
    const auto root = unit_share_aggregate(inst, convex_active, lo, hi, 1e-10);
    if (!root) return;
    equilibrium_certificate cert =
        make_certificate(inst, *root, active_shares_at(inst, convex_active, *root));
    report.solutions.push_back(to_eps_solution(cert, eps));
    report.exact_certificates.push_back(std::move(cert));
}

/// Same-active-set hits at chains of adjacent nodes describe one solution;
/// each chain keeps its best-centered representative.
inline void dedup_solutions(std::vector<eps_solution>& sols, double delta) {
    std::sort(sols.begin(), sols.end(), [](const eps_solution& a, const eps_solution& b) {
        if (a.active != b.active) return a.active < b.active;
        return a.aggregate < b.aggregate;
    });
    std::vector<eps_solution> kept;
    double chain_end = 0.0;
    for (auto& sol : sols) {
        if (!kept.empty() && kept.back().active == sol.active &&
            sol.aggregate - chain_end <= delta * (1.0 + 1e-9)) {
            chain_end = sol.aggregate;
            if (std::abs(sol.share_sum - 1.0) < std::abs(kept.back().share_sum - 1.0))
                kept.back() = std::move(sol);
        } else {
            chain_end = sol.aggregate;
            kept.push_back(std::move(sol));
        }
    }
    std::sort(kept.begin(), kept.end(), [](const eps_solution& a, const eps_solution& b) {
        if (a.aggregate != b.aggregate) return a.aggregate < b.aggregate;
        return a.active < b.active;
    });
    sols = std::move(kept);
}

}  // namespace detail

/// Full approximate-equilibrium search: exact binary searches on the two
/// outer regions where the active set is fixed, then node-by-node subset
/// verification across the ambiguity window. Nodes inside a segment whose
/// monotone share bounds cannot reach the band are skipped in bulk; skipped
/// nodes provably verify to nothing.
inline search_report search_eps_ne_detailed(const contest_instance& inst, double eps,
                                            std::optional<double> delta_override = std::nullopt) {
    if (!(eps > 0.0 && eps < 1.0)) throw error("eps must lie in (0, 1)");
    search_report report;
    const regime_class reg = classify_regime(inst);
    report.rho = rho_bound(inst);
    report.delta = delta_override ? *delta_override : grid_delta(eps, report.rho, inst.size());

    if (reg.convex_players.empty()) {
        // Degenerate pipeline: only the concave-only region exists.
        equilibrium_certificate cert = solve_small_elasticity(inst, 1e-10);
        report.solutions.push_back(detail::to_eps_solution(cert, eps));
        report.exact_certificates.push_back(std::move(cert));
        return report;
    }

    std::vector<double> boundaries;
    double under = std::numeric_limits<double>::infinity();
    double bar = 0.0;
    for (int j : reg.convex_players) {
        const player_thresholds t = thresholds(inst.players[j], inst.reward);
        boundaries.push_back(t.lower);
        boundaries.push_back(t.upper);
        under = std::min(under, t.lower);
        bar = std::max(bar, t.upper);
    }
    std::sort(boundaries.begin(), boundaries.end());
    boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());

    // Region (0, under]: every convex player participates for sure.
    detail::append_region_solution(inst, reg.convex_players, 0.0, under, eps, report);
    // Region [bar, inf): no convex player participates.
    detail::append_region_solution(inst, {}, bar, std::numeric_limits<double>::infinity(), eps,
                                   report);

    detail::node_scan_state st = detail::make_scan_state(inst);
    auto visit = [&](double node) {
        ++report.nodes_total;
        ++report.nodes_verified;
        if (auto sol = detail::scan_node(inst, st, node, eps)) report.solutions.push_back(*sol);
    };

    for (std::size_t t = 0; t < boundaries.size(); ++t) {
        visit(boundaries[t]);
        if (t + 1 == boundaries.size()) break;
        const double left = boundaries[t];
        const double right = boundaries[t + 1];
        const double mid = 0.5 * (left + right);

        // Segment-level bounds: shares fall monotonically in A and the player
        // classification is constant on the open segment, so the reachable
        // share sums live in [base(right), everything(left)].
        double max_left = 0.0;
        double base_right = 0.0;
        for (int i = 0; i < inst.size(); ++i) {
            const player& p = inst.players[i];
            if (p.elasticity > 1.0) {
                const detail::node_player& np = st.players[i];
                if (mid > np.upper) continue;
                max_left += k2_share(p, inst.reward, left);
                if (mid < np.lower) base_right += k2_share(p, inst.reward, right);
            } else {
                max_left += k1_share(p, inst.reward, left);
                base_right += k1_share(p, inst.reward, right);
            }
        }

        long long k_first = static_cast<long long>(std::floor((left - under) / report.delta)) + 1;
        while (k_first > 1 && under + (k_first - 1) * report.delta > left) --k_first;
        while (under + k_first * report.delta <= left) ++k_first;
        const double right_guard = right - 1e-12 * std::max(1.0, right);
        long long k_last = static_cast<long long>(std::floor((right_guard - under) / report.delta));
        while (under + k_last * report.delta >= right_guard) --k_last;
        while (under + (k_last + 1) * report.delta < right_guard) ++k_last;
        const long long grid_count = std::max<long long>(0, k_last - k_first + 1);
        if (max_left <= 1.0 - eps || base_right >= 1.0 + eps) {
            report.nodes_total += grid_count;
            report.nodes_pruned += grid_count;
            continue;
        }
        for (long long kk = k_first; kk < k_first + grid_count; ++kk)
            visit(under + kk * report.delta);
    }

    detail::dedup_solutions(report.solutions, report.delta);
    return report;
}

inline std::vector<eps_solution> search_eps_ne(const contest_instance& inst, double eps) {
    return search_eps_ne_detailed(inst, eps).solutions;
}

}  // namespace tullock
