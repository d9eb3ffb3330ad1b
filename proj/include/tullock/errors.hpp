#pragma once

#include <stdexcept>
#include <string>

namespace tullock {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Every player produced zero, so winning probabilities are undefined.
struct all_zero_profile : error {
    all_zero_profile() : error("all productions are zero: winning probability undefined") {}
};

/// A convex-player operation was called with elasticity <= 1.
struct not_convex_player : error {
    explicit not_convex_player(double elasticity)
        : error("operation requires elasticity > 1, got " + std::to_string(elasticity)) {}
};

/// The aggregate action exceeds the player's participation ceiling.
struct above_upper_threshold : error {
    above_upper_threshold(double aggregate, double upper)
        : error("aggregate " + std::to_string(aggregate) + " exceeds participation ceiling " +
                std::to_string(upper)) {}
};

/// The best-response share jumps at this aggregate value.
struct at_discontinuity : error {
    explicit at_discontinuity(double aggregate)
        : error("share correspondence is discontinuous at aggregate " + std::to_string(aggregate)) {}
};

/// Candidate-node construction needs at least one player with elasticity > 1.
struct no_convex_players : error {
    no_convex_players() : error("instance has no players with elasticity > 1") {}
};

/// SSLT input violates target >= 2 * max(elements).
struct invalid_sslt : error {
    using error::error;
};

/// The reduction's sentinel parameter must stay below min(Z)/target.
struct bad_eps_param : error {
    using error::error;
};

/// A brute-force enumeration guard was exceeded.
struct too_large : error {
    using error::error;
};

/// Regret is ill-defined when every opponent produces zero.
struct all_zero_opponents : error {
    all_zero_opponents() : error("all opponents produce zero: deviation supremum is not attained") {}
};

/// Document validation failure with the offending field path.
struct schema_error : error {
    std::string path;
    schema_error(std::string field_path, const std::string& what_happened)
        : error(field_path + ": " + what_happened), path(std::move(field_path)) {}
};

/// Structurally valid document carrying out-of-domain values.
struct domain_error : error {
    using error::error;
};

}  // namespace tullock
