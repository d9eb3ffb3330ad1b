#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tullock/approx_solver.hpp"
#include "tullock/contest.hpp"
#include "tullock/exact_solvers.hpp"
#include "tullock/hardness.hpp"
#include "tullock/io.hpp"
#include "tullock/verify.hpp"

namespace tullock {

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw error("cannot write " + out_path);
    file << text;
}

inline std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw error("range must look like LO:HI");
    double lo = 0.0, hi = 0.0;
    try {
        lo = std::stod(text.substr(0, colon));
        hi = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw error("range must look like LO:HI");
    }
    if (!(lo > 0.0)) throw error("range start must be positive");
    if (!(hi > lo)) throw error("range end must exceed its start");
    return {lo, hi};
}

}  // namespace detail

/// Command-line front end. Exit codes: 0 success with a result, 2 verified
/// negative outcome (no equilibrium / no approximate solution / unsolvable
/// subset-sum), 1 usage or domain errors and failed verification.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tullock contest equilibrium toolkit"};
    app.require_subcommand(1);

    std::string instance_path, sslt_path, result_path, out_path, range_spec;
    double tol = 1e-10;
    double eps = 1e-3;
    double reward = 2.0;
    std::optional<double> delta_override;
    std::optional<double> eps_param;
    int samples = 100;

    auto* classify_cmd = app.add_subcommand("classify", "print the elasticity regime");
    classify_cmd->add_option("-i,--instance", instance_path, "instance document")->required();
    classify_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* solve_cmd = app.add_subcommand("solve", "compute exact equilibria");
    solve_cmd->add_option("-i,--instance", instance_path, "instance document")->required();
    solve_cmd->add_option("--tol", tol, "share-sum tolerance");
    solve_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* approx_cmd = app.add_subcommand("approx", "search approximate solutions");
    approx_cmd->add_option("-i,--instance", instance_path, "instance document")->required();
    approx_cmd->add_option("--eps", eps, "approximation tolerance");
    approx_cmd->add_option("--delta", delta_override, "override the node spacing");
    approx_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* verify_cmd = app.add_subcommand("verify", "check a result document");
    verify_cmd->add_option("-i,--instance", instance_path, "instance document")->required();
    verify_cmd->add_option("-r,--result", result_path, "result document")->required();
    verify_cmd->add_option("--tol", tol, "verification tolerance");
    verify_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* reduce_cmd = app.add_subcommand("reduce", "build the contest encoding an SSLT instance");
    reduce_cmd->add_option("-s,--sslt", sslt_path, "SSLT document")->required();
    reduce_cmd->add_option("--reward", reward, "contest reward (R > 1)");
    reduce_cmd->add_option("--eps-param", eps_param, "sentinel elasticity offset");
    reduce_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* demo_cmd = app.add_subcommand("subset-demo", "decide subset sum through an SSLT oracle");
    demo_cmd->add_option("-s,--sslt", sslt_path, "subset-sum document")->required();
    demo_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* curves_cmd = app.add_subcommand("curves", "emit per-player share/utility samples");
    curves_cmd->add_option("-i,--instance", instance_path, "instance document")->required();
    curves_cmd->add_option("--range", range_spec, "aggregate range LO:HI");
    curves_cmd->add_option("--samples", samples, "sample count")->check(CLI::Range(2, 10000000));
    curves_cmd->add_option("--out", out_path, "output file (default stdout)");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (classify_cmd->parsed()) {
            const contest_instance inst = parse_instance(detail::read_file(instance_path));
            const regime_class reg = classify_regime(inst);
            json doc;
            doc["schemaVersion"] = 1;
            doc["regime"] = to_string(reg.tag);
            doc["small"] = reg.small_players;
            doc["convex"] = reg.convex_players;
            doc["medium"] = reg.medium_players;
            doc["n1"] = reg.n1();
            doc["n2"] = reg.n2();
            detail::write_output(canonical(doc), out_path, out);
            return 0;
        }

        if (solve_cmd->parsed()) {
            const contest_instance inst = parse_instance(detail::read_file(instance_path));
            const regime_class reg = classify_regime(inst);
            json doc;
            doc["schemaVersion"] = 1;
            doc["parameters"] = {{"tol", tol}};
            if (reg.tag == regime_tag::has_medium) {
                doc["outcome"] = "not-applicable";
                doc["reason"] = "instance has medium-elasticity players";
                detail::write_output(canonical(doc), out_path, out);
                err << "error: exact solving does not cover medium elasticity; "
                       "run the approx command instead\n";
                return 1;
            }
            const auto start = std::chrono::steady_clock::now();
            std::vector<equilibrium_certificate> certificates;
            if (reg.tag == regime_tag::all_small) {
                certificates.push_back(solve_small_elasticity(inst, tol));
            } else {
                solve_outcome mixed = solve_mixed_regime(inst, tol);
                certificates = std::move(mixed.certificates);
            }
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            doc["timingSeconds"] = elapsed.count();
            doc["certificates"] = json::array();
            for (const equilibrium_certificate& cert : certificates) {
                json c = certificate_json(cert);
                c["verification"] = report_json(check_pne(inst, cert, 10.0 * tol));
                doc["certificates"].push_back(std::move(c));
            }
            doc["outcome"] = certificates.empty() ? "no-pne" : "exact";
            detail::write_output(canonical(doc), out_path, out);
            return certificates.empty() ? 2 : 0;
        }

        if (approx_cmd->parsed()) {
            const contest_instance inst = parse_instance(detail::read_file(instance_path));
            const auto start = std::chrono::steady_clock::now();
            const search_report report = search_eps_ne_detailed(inst, eps, delta_override);
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            json doc;
            doc["schemaVersion"] = 1;
            doc["outcome"] = "approx";
            doc["parameters"] = {{"eps", eps}, {"delta", report.delta}, {"rho", report.rho}};
            doc["search"] = {{"nodesTotal", report.nodes_total},
                             {"nodesVerified", report.nodes_verified},
                             {"nodesPruned", report.nodes_pruned}};
            doc["timingSeconds"] = elapsed.count();
            doc["approxSolutions"] = json::array();
            for (const eps_solution& sol : report.solutions) {
                json s = solution_json(sol);
                s["verification"] = report_json(check_eps_solution(inst, sol));
                doc["approxSolutions"].push_back(std::move(s));
            }
            doc["certificates"] = json::array();
            for (const equilibrium_certificate& cert : report.exact_certificates) {
                json c = certificate_json(cert);
                c["verification"] = report_json(check_pne(inst, cert, 1e-9));
                doc["certificates"].push_back(std::move(c));
            }
            detail::write_output(canonical(doc), out_path, out);
            return report.solutions.empty() ? 2 : 0;
        }

        if (verify_cmd->parsed()) {
            const contest_instance inst = parse_instance(detail::read_file(instance_path));
            json result;
            try {
                result = json::parse(detail::read_file(result_path));
            } catch (const json::parse_error& e) {
                throw schema_error("$", std::string("invalid JSON: ") + e.what());
            }
            json doc;
            doc["schemaVersion"] = 1;
            doc["outcome"] = "verify";
            doc["reports"] = json::array();
            bool all_passed = true;
            if (result.contains("certificates")) {
                const json& certs = result["certificates"];
                for (std::size_t k = 0; k < certs.size(); ++k) {
                    const auto cert = certificate_from_json(
                        certs[k], "$.certificates[" + std::to_string(k) + "]");
                    const verification_report rep = check_pne(inst, cert, tol);
                    all_passed = all_passed && rep.passed;
                    doc["reports"].push_back(report_json(rep));
                }
            }
            if (result.contains("approxSolutions")) {
                const json& sols = result["approxSolutions"];
                for (std::size_t k = 0; k < sols.size(); ++k) {
                    const auto sol = eps_solution_from_json(
                        sols[k], "$.approxSolutions[" + std::to_string(k) + "]");
                    const verification_report rep = check_eps_solution(inst, sol);
                    all_passed = all_passed && rep.passed;
                    doc["reports"].push_back(report_json(rep));
                }
            }
            doc["allPassed"] = all_passed;
            detail::write_output(canonical(doc), out_path, out);
            return all_passed ? 0 : 1;
        }

        if (reduce_cmd->parsed()) {
            const sslt_instance sslt = parse_sslt(detail::read_file(sslt_path));
            const double chosen_eps = eps_param ? *eps_param : default_eps_param(sslt);
            const reduction_result red = reduce_sslt_to_contest(sslt, reward, chosen_eps);
            json metadata;
            metadata["source"] = "sslt-reduction";
            metadata["sentinelIndex"] = red.sentinel_index;
            metadata["elementToPlayer"] = red.element_to_player;
            metadata["epsParam"] = red.eps_param;
            metadata["sentinelElasticityAboveTwo"] = red.sentinel_above_medium;
            detail::write_output(canonical(instance_json(red.contest, metadata)), out_path, out);
            return 0;
        }

        if (demo_cmd->parsed()) {
            const sslt_instance doc_in = parse_sslt(detail::read_file(sslt_path),
                                                    /*enforce_large_target=*/false);
            long long calls = 0;
            const bool solvable = subset_sum_via_sslt_oracle(
                doc_in.elements, doc_in.target, [&](const sslt_instance& query) {
                    ++calls;
                    return sslt_bruteforce(query).has_value();
                });
            json doc;
            doc["schemaVersion"] = 1;
            doc["solvable"] = solvable;
            doc["oracleCalls"] = calls;
            doc["elements"] = doc_in.elements;
            doc["target"] = doc_in.target;
            detail::write_output(canonical(doc), out_path, out);
            return solvable ? 0 : 2;
        }

        if (curves_cmd->parsed()) {
            const contest_instance inst = parse_instance(detail::read_file(instance_path));
            double lo = 0.0, hi = 0.0;
            if (!range_spec.empty()) {
                std::tie(lo, hi) = detail::parse_range(range_spec);
            } else {
                const auto [lo_default, hi_default] = detail::fptas_range(inst);
                lo = 0.5 * lo_default;
                hi = 1.25 * hi_default;
            }
            std::ostringstream csv;
            csv << std::setprecision(17);
            csv << "A,player,sigma,utility\n";
            for (int k = 0; k < samples; ++k) {
                const double a = lo + k * (hi - lo) / (samples - 1);
                for (int i = 0; i < inst.size(); ++i) {
                    const best_response_set br = best_response_share(inst.players[i], inst.reward, a);
                    const double sigma = br.kind == response_kind::zero ? 0.0 : br.share;
                    const double utility =
                        sigma > 0.0
                            ? sigma * inst.reward - cost_of_production(inst.players[i], sigma * a)
                            : 0.0;
                    csv << a << ',' << i << ',' << sigma << ',' << utility << '\n';
                }
            }
            detail::write_output(csv.str(), out_path, out);
            return 0;
        }
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace tullock
