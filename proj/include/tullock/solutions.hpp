#pragma once

#include <utility>
#include <vector>

#include "tullock/contest.hpp"

namespace tullock {

/// Equilibrium triplet: aggregate action, active set, and the active players'
/// action shares, with the induced effort levels for the whole roster.
struct equilibrium_certificate {
    double aggregate = 0.0;
    std::vector<int> active;      // ascending player indices
    std::vector<double> shares;   // parallel to `active`
    std::vector<double> efforts;  // length n, zero for inactive players

    double share_sum() const {
        double s = 0.0;
        for (double v : shares) s += v;
        return s;
    }
};

/// Equilibrium triplet with the share sum relaxed to an open tolerance band.
struct eps_solution {
    double aggregate = 0.0;
    std::vector<int> active;
    std::vector<double> shares;
    double share_sum = 0.0;
    double epsilon = 0.0;
};

namespace detail {

inline equilibrium_certificate make_certificate(const contest_instance& inst, double aggregate,
                                                std::vector<std::pair<int, double>> active_shares) {
    equilibrium_certificate cert;
    cert.aggregate = aggregate;
    cert.efforts.assign(inst.players.size(), 0.0);
    for (auto& [index, sigma] : active_shares) {
        cert.active.push_back(index);
        cert.shares.push_back(sigma);
        cert.efforts[index] = cost_of_production(inst.players[index], sigma * aggregate);
    }
    return cert;
}

inline eps_solution to_eps_solution(const equilibrium_certificate& cert, double epsilon) {
    eps_solution sol;
    sol.aggregate = cert.aggregate;
    sol.active = cert.active;
    sol.shares = cert.shares;
    sol.share_sum = cert.share_sum();
    sol.epsilon = epsilon;
    return sol;
}

inline effort_profile efforts_of(const contest_instance& inst, const eps_solution& sol) {
    effort_profile x;
    x.levels.assign(inst.players.size(), 0.0);
    for (std::size_t k = 0; k < sol.active.size(); ++k)
        x.levels[sol.active[k]] =
            cost_of_production(inst.players[sol.active[k]], sol.shares[k] * sol.aggregate);
    return x;
}

}  // namespace detail
}  // namespace tullock
