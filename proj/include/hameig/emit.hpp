#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hameig/green_kernel.hpp"
#include "hameig/grid_function.hpp"
#include "hameig/problem.hpp"
#include "hameig/solver.hpp"

namespace hameig {

namespace detail {

inline std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace detail

inline void write_solution_csv(std::ostream& os, const GridFunction& u,
                               const VertexFunction& y) {
    os << "t,u,u_minus_y\n";
    for (std::size_t i = 0; i < u.nodes.size(); ++i) {
        double t = u.nodes[i];
        os << detail::num17(t) << ',' << detail::num17(u.values[i]) << ','
           << detail::num17(u.values[i] - y.eval(t)) << '\n';
    }
}

inline void write_scan_csv(std::ostream& os, const std::vector<ScanCell>& cells) {
    os << "lambda,n,converged,iterations,sliding_mode\n";
    for (const ScanCell& c : cells)
        os << detail::num17(c.lambda) << ',' << detail::num17(c.n) << ','
           << (c.converged ? 1 : 0) << ',' << c.iterations << ','
           << (c.sliding_mode ? 1 : 0) << '\n';
}

inline void write_pairs_csv(std::ostream& os, const std::vector<EigenPair>& pairs) {
    os << "lambda_star,norm_gap,residual,sliding_mode,cone_pass\n";
    for (const EigenPair& p : pairs)
        os << detail::num17(p.lambda_star) << ',' << detail::num17(p.norm_gap) << ','
           << detail::num17(p.residual) << ',' << (p.sliding_mode ? 1 : 0) << ','
           << (p.cone_cert.pass() ? 1 : 0) << '\n';
}

inline nlohmann::json cone_json(const ConeCertificate& c) {
    return {{"pass", c.pass()},
            {"history_pinned", c.history_pinned},
            {"nonneg", c.nonneg},
            {"harnack", c.harnack},
            {"history_margin", c.history_margin},
            {"nonneg_margin", c.nonneg_margin},
            {"harnack_margin", c.harnack_margin}};
}

inline nlohmann::json check_json(const CheckResult& c) {
    const char* st = c.status == CheckStatus::pass ? "pass"
                     : c.status == CheckStatus::fail ? "fail"
                                                     : "not_checkable";
    return {{"status", st},
            {"what", c.what},
            {"mode", c.mode},
            {"margin", c.margin},
            {"witness", {{"t", c.witness_t}, {"u", c.witness_u}, {"v", c.witness_v}}}};
}

inline nlohmann::json report_json(const HypothesisReport& rep) {
    nlohmann::json curves = nlohmann::json::array();
    for (const auto& c : rep.curve_checks) curves.push_back(check_json(c));
    nlohmann::json dchecks = nlohmann::json::array();
    for (const auto& c : rep.condition_D_checks) dchecks.push_back(check_json(c));
    return {{"schema", 1},
            {"delta_bar", rep.delta_bar},
            {"lambda_bar_threshold", rep.lambda_bar_threshold},
            {"lambda_bar", rep.lambda_bar},
            {"majorant", check_json(rep.majorant)},
            {"minorant", check_json(rep.minorant)},
            {"curve_checks", curves},
            {"condition_D_checks", dchecks},
            {"all_pass", rep.all_pass()},
            {"notes", rep.notes}};
}

inline nlohmann::json solve_json(const std::string& problem, double lambda, int grid_n,
                                 double tol, const SolveResult& sr,
                                 const ConeCertificate& cert) {
    return {{"schema", 1},
            {"problem", problem},
            {"lambda", lambda},
            {"grid_n", grid_n},
            {"tol", tol},
            {"converged", sr.converged},
            {"iterations", sr.iterations},
            {"residual", sr.residual},
            {"envelope_residual", sr.envelope_residual},
            {"sliding_mode", sr.sliding_mode},
            {"diagnostic", sr.diagnostic},
            {"cone", cone_json(cert)}};
}

inline nlohmann::json pair_json(const EigenPair& p) {
    return {{"lambda_star", p.lambda_star},
            {"norm_gap", p.norm_gap},
            {"residual", p.residual},
            {"sliding_mode", p.sliding_mode},
            {"cone", cone_json(p.cone_cert)}};
}

inline nlohmann::json scan_json(const std::string& problem, double rho, int grid_n,
                                const ScanResult& res) {
    nlohmann::json cells = nlohmann::json::array();
    for (const ScanCell& c : res.cells)
        cells.push_back({{"lambda", c.lambda},
                         {"n", c.n},
                         {"converged", c.converged},
                         {"iterations", c.iterations},
                         {"sliding_mode", c.sliding_mode}});
    nlohmann::json pairs = nlohmann::json::array();
    for (const EigenPair& p : res.pairs) pairs.push_back(pair_json(p));
    return {{"schema", 1},
            {"problem", problem},
            {"rho", rho},
            {"grid_n", grid_n},
            {"cells", cells},
            {"pairs", pairs},
            {"resolution_failure", res.resolution_failure},
            {"diagnostic", res.diagnostic}};
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace hameig
