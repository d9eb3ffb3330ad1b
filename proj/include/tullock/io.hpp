#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tullock/contest.hpp"
#include "tullock/hardness.hpp"
#include "tullock/solutions.hpp"
#include "tullock/verify.hpp"

namespace tullock {

using json = nlohmann::json;

namespace detail {

inline const json& require_field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw schema_error(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw schema_error(path + "." + key, "missing field");
    return *it;
}

inline double require_number(const json& value, const std::string& path) {
    if (!value.is_number()) throw schema_error(path, "expected a number");
    return value.get<double>();
}

}  // namespace detail

/// Parses and validates an instance document:
///   {"schemaVersion": 1, "R": ..., "players": [{"a": .., "r": ..}, ...]}
inline contest_instance parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw schema_error("$", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw schema_error("$", "expected a JSON object");
    if (doc.contains("schemaVersion") && doc["schemaVersion"] != 1)
        throw schema_error("$.schemaVersion", "unsupported schema version");

    contest_instance inst;
    inst.reward = detail::require_number(detail::require_field(doc, "R", "$"), "$.R");
    const json& players = detail::require_field(doc, "players", "$");
    if (!players.is_array()) throw schema_error("$.players", "expected an array");
    for (std::size_t i = 0; i < players.size(); ++i) {
        const std::string path = "$.players[" + std::to_string(i) + "]";
        const json& entry = players[i];
        if (!entry.is_object()) throw schema_error(path, "expected an object");
        player p;
        p.efficiency = detail::require_number(detail::require_field(entry, "a", path), path + ".a");
        p.elasticity = detail::require_number(detail::require_field(entry, "r", path), path + ".r");
        inst.players.push_back(p);
    }
    validate(inst);  // throws domain_error with a precise message
    return inst;
}

inline json instance_json(const contest_instance& inst, const json& metadata = json()) {
    json doc;
    doc["schemaVersion"] = 1;
    doc["R"] = inst.reward;
    doc["players"] = json::array();
    for (const player& p : inst.players) doc["players"].push_back({{"a", p.efficiency}, {"r", p.elasticity}});
    if (!metadata.is_null()) doc["metadata"] = metadata;
    return doc;
}

/// Canonical text form: sorted keys, two-space indent, trailing newline.
/// Numbers print in shortest round-trip form, so parse/serialize round trips
/// are byte-identical.
inline std::string canonical(const json& doc) { return doc.dump(2) + "\n"; }

inline std::string serialize_instance(const contest_instance& inst) {
    return canonical(instance_json(inst));
}

/// SSLT document: {"elements": [..], "target": ..}.
inline sslt_instance parse_sslt(const std::string& text, bool enforce_large_target = true) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw schema_error("$", std::string("invalid JSON: ") + e.what());
    }
    sslt_instance sslt;
    const json& elements = detail::require_field(doc, "elements", "$");
    if (!elements.is_array() || elements.empty())
        throw schema_error("$.elements", "expected a non-empty array");
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const double z = detail::require_number(elements[i], "$.elements[" + std::to_string(i) + "]");
        if (!(z > 0.0)) throw domain_error("elements[" + std::to_string(i) + "] must be positive");
        sslt.elements.push_back(z);
    }
    sslt.target = detail::require_number(detail::require_field(doc, "target", "$"), "$.target");
    if (!(sslt.target > 0.0)) throw domain_error("target must be positive");
    if (enforce_large_target) validate(sslt);
    return sslt;
}

inline json sslt_json(const sslt_instance& sslt) {
    return json{{"schemaVersion", 1}, {"elements", sslt.elements}, {"target", sslt.target}};
}

inline json violation_json(const violation& v) {
    return json{{"condition", v.condition}, {"player", v.player}, {"magnitude", v.magnitude}};
}

inline json report_json(const verification_report& report) {
    json doc;
    doc["passed"] = report.passed;
    doc["tolerance"] = report.tolerance;
    doc["violations"] = json::array();
    for (const violation& v : report.violations) doc["violations"].push_back(violation_json(v));
    return doc;
}

inline json certificate_json(const equilibrium_certificate& cert) {
    return json{{"aggregate", cert.aggregate},
                {"active", cert.active},
                {"shares", cert.shares},
                {"efforts", cert.efforts}};
}

inline json solution_json(const eps_solution& sol) {
    return json{{"aggregate", sol.aggregate},
                {"active", sol.active},
                {"shares", sol.shares},
                {"shareSum", sol.share_sum},
                {"epsilon", sol.epsilon}};
}

namespace detail {

inline const json& require_array(const json& obj, const char* key, const std::string& path) {
    const json& value = require_field(obj, key, path);
    if (!value.is_array()) throw schema_error(path + "." + key, "expected an array");
    return value;
}

}  // namespace detail

inline equilibrium_certificate certificate_from_json(const json& doc, const std::string& path) {
    equilibrium_certificate cert;
    cert.aggregate = detail::require_number(detail::require_field(doc, "aggregate", path), path + ".aggregate");
    for (const json& v : detail::require_array(doc, "active", path)) cert.active.push_back(v.get<int>());
    for (const json& v : detail::require_array(doc, "shares", path)) cert.shares.push_back(v.get<double>());
    for (const json& v : detail::require_array(doc, "efforts", path)) cert.efforts.push_back(v.get<double>());
    if (cert.active.size() != cert.shares.size())
        throw schema_error(path, "active and shares must have equal length");
    return cert;
}

inline eps_solution eps_solution_from_json(const json& doc, const std::string& path) {
    eps_solution sol;
    sol.aggregate = detail::require_number(detail::require_field(doc, "aggregate", path), path + ".aggregate");
    for (const json& v : detail::require_array(doc, "active", path)) sol.active.push_back(v.get<int>());
    for (const json& v : detail::require_array(doc, "shares", path)) sol.shares.push_back(v.get<double>());
    sol.share_sum = detail::require_number(detail::require_field(doc, "shareSum", path), path + ".shareSum");
    sol.epsilon = detail::require_number(detail::require_field(doc, "epsilon", path), path + ".epsilon");
    if (sol.active.size() != sol.shares.size())
        throw schema_error(path, "active and shares must have equal length");
    return sol;
}

}  // namespace tullock
