#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <hameig/hameig.hpp>

namespace fs = std::filesystem;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string problem;
    double rho = 1.0;
    double lambda = 0.0;
    bool have_lambda = false;
    double lambda_max = 0.0; // 0 = derive from the hypothesis report
    int grid_n = 257;
    double tol = 1e-10;
    int threads = 0; // 0 = available parallelism; solves are deterministic either way
    std::string out = ".";
    std::string emit = "csv,json,svg";
    int lambda_cells = 16;
    std::optional<hameig::ConfigMap> file_cfg;
};

std::string g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::set<std::string> parse_emit(const std::string& s) {
    std::set<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok != "csv" && tok != "json" && tok != "svg")
            throw usage_error("unknown emit target '" + tok + "' (use csv,json,svg)");
        out.insert(tok);
    }
    return out;
}

void validate_run(const RunConfig& rc) {
    if (!(rc.rho > 0.0)) throw usage_error("--rho must be positive");
    if (!(rc.tol > 0.0)) throw usage_error("--tol must be positive");
    if (rc.grid_n < 2) throw usage_error("--grid-n must be at least 2");
    if (rc.threads < 0) throw usage_error("--threads must be >= 0");
}

bool is_catalog_name(const std::string& name) {
    auto names = hameig::catalog_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

hameig::CatalogProblem load_problem(const RunConfig& rc) {
    if (is_catalog_name(rc.problem))
        return hameig::make_catalog_problem(rc.problem, rc.rho);
    if (rc.file_cfg) return hameig::problem_from_config(*rc.file_cfg, rc.rho);
    throw usage_error("unknown problem '" + rc.problem +
                      "': not a catalog name and not a readable config file");
}

hameig::GridFunction vertex_start(const hameig::ProblemSpec& spec, int grid_n) {
    hameig::VertexFunction vf = spec.vertex();
    return hameig::GridFunction::sample(hameig::GridFunction::uniform_nodes(spec.r, grid_n),
                                        [&](double t) { return vf.eval(t); });
}

double sup_norm_above_y(const hameig::GridFunction& u, const hameig::VertexFunction& vf) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.nodes.size(); ++i)
        if (u.nodes[i] >= 0.0)
            m = std::max(m, std::abs(u.values[i] - vf.eval(u.nodes[i])));
    return m;
}

const char* status_tag(const hameig::CheckResult& c) {
    switch (c.status) {
    case hameig::CheckStatus::pass: return "PASS";
    case hameig::CheckStatus::fail: return "FAIL";
    default: return "SKIP";
    }
}

// pass iff nothing checkable failed; not_checkable items only warn
bool checkable_pass(const hameig::HypothesisReport& rep, bool expects_minorant) {
    if (rep.majorant.status == hameig::CheckStatus::fail) return false;
    if (rep.minorant.status == hameig::CheckStatus::fail) return false;
    for (const auto& c : rep.curve_checks)
        if (c.status == hameig::CheckStatus::fail) return false;
    for (const auto& c : rep.condition_D_checks)
        if (c.status == hameig::CheckStatus::fail) return false;
    if (expects_minorant && !(rep.delta_bar > 0.0)) return false;
    return true;
}

void print_check_line(const hameig::CheckResult& c, const std::string& kind) {
    std::cout << "[" << status_tag(c) << "] " << kind << " " << c.what << " [" << c.mode
              << "] margin=" << g12(c.margin);
    if (c.status == hameig::CheckStatus::fail)
        std::cout << " witness t=" << g12(c.witness_t) << " u=" << g12(c.witness_u)
                  << " v=" << g12(c.witness_v);
    std::cout << "\n";
}

int cmd_check(const RunConfig& rc) {
    hameig::CatalogProblem cp = load_problem(rc);
    hameig::HypothesisReport rep =
        hameig::run_hypothesis_report(cp.spec, cp.bounds, cp.quad);

    std::cout << "problem: " << cp.spec.name << "\n";
    std::cout << "rho = " << g12(rc.rho) << "\n";
    std::cout << "M_rho(t) = " << cp.majorant_display << "\n";
    std::cout << "delta_rho(t) = " << cp.minorant_display << "\n";
    std::cout << "delta_bar = " << g12(rep.delta_bar) << "\n";
    if (rep.delta_bar > 0.0) {
        std::cout << "rho/delta_bar = " << g12(rep.lambda_bar_threshold) << "\n";
        std::cout << "lambda_bar = " << g12(rep.lambda_bar) << "\n";
    } else {
        std::cout << "rho/delta_bar undefined: delta_bar is not positive\n";
    }
    print_check_line(rep.majorant, "(H2)");
    print_check_line(rep.minorant, "(H3)");
    for (const auto& c : rep.curve_checks) print_check_line(c, "curve");
    for (const auto& c : rep.condition_D_checks) print_check_line(c, "condition (D)");
    std::cout << "notes: " << rep.notes << "\n";

    bool ok = checkable_pass(rep, bool(cp.bounds.delta_rho));
    std::cout << "overall: " << (ok ? "PASS" : "FAIL") << "\n";

    auto targets = parse_emit(rc.emit);
    if (targets.count("json")) {
        fs::create_directories(rc.out);
        nlohmann::json j = hameig::report_json(rep);
        j["problem"] = cp.spec.name;
        j["rho"] = rc.rho;
        j["majorant_display"] = cp.majorant_display;
        j["minorant_display"] = cp.minorant_display;
        hameig::write_text_file((fs::path(rc.out) / "check.json").string(), j.dump(2) + "\n");
    }
    return ok ? 0 : 2;
}

int cmd_solve(const RunConfig& rc) {
    if (!rc.have_lambda) throw usage_error("solve requires --lambda");
    if (rc.lambda < 0.0) throw usage_error("--lambda must be >= 0");
    hameig::CatalogProblem cp = load_problem(rc);
    hameig::VertexFunction vf = cp.spec.vertex();
    hameig::GridFunction u0 = vertex_start(cp.spec, rc.grid_n);

    hameig::SolverOptions so;
    so.tol = rc.tol;
    so.quad = cp.quad;
    double L = hameig::estimate_lipschitz(cp.spec, rc.rho + vf.sup_history());
    if (std::isfinite(L) && rc.lambda * L / 8.0 < 0.9) so.theta = 1.0;

    hameig::SolveResult sr =
        hameig::fixed_point_solve(cp.spec, cp.spec.kernel(), rc.lambda, u0, so);
    hameig::ConeCertificate cert = hameig::cone_verify(sr.u, vf, 1e-8);
    double n = sup_norm_above_y(sr.u, vf);

    std::cout << "problem: " << cp.spec.name << "\n";
    std::cout << "lambda = " << g12(rc.lambda) << " theta = " << g12(so.theta)
              << " grid_n = " << rc.grid_n << "\n";
    std::cout << "converged = " << (sr.converged ? "yes" : "no")
              << " iterations = " << sr.iterations
              << " residual = " << g12(sr.residual) << "\n";
    if (sr.sliding_mode)
        std::cout << "sliding-mode solution, envelope residual = "
                  << g12(sr.envelope_residual) << "\n";
    if (!sr.diagnostic.empty()) std::cout << "diagnostic: " << sr.diagnostic << "\n";
    std::cout << "n(lambda) = ||u - y|| = " << g12(n) << "\n";
    std::cout << "cone: " << (cert.pass() ? "PASS" : "FAIL")
              << " history_margin=" << g12(cert.history_margin)
              << " nonneg_margin=" << g12(cert.nonneg_margin)
              << " harnack_margin=" << g12(cert.harnack_margin) << "\n";

    auto targets = parse_emit(rc.emit);
    fs::create_directories(rc.out);
    if (targets.count("csv")) {
        std::ostringstream os;
        hameig::write_solution_csv(os, sr.u, vf);
        hameig::write_text_file((fs::path(rc.out) / "solution.csv").string(), os.str());
    }
    if (targets.count("json")) {
        nlohmann::json j =
            hameig::solve_json(cp.spec.name, rc.lambda, rc.grid_n, rc.tol, sr, cert);
        j["n"] = n;
        j["theta"] = so.theta;
        hameig::write_text_file((fs::path(rc.out) / "solve.json").string(), j.dump(2) + "\n");
    }
    if (targets.count("svg")) {
        hameig::SvgPlot plot("u(t) at lambda = " + g12(rc.lambda), "t", "u");
        hameig::SvgPlot::Series su;
        su.x = sr.u.nodes;
        su.y = sr.u.values;
        hameig::SvgPlot::Series sy;
        sy.x = sr.u.nodes;
        sy.color = "#7f7f7f";
        for (double t : sr.u.nodes) sy.y.push_back(vf.eval(t));
        plot.add_series(sy);
        plot.add_series(su);
        hameig::write_text_file((fs::path(rc.out) / "solution.svg").string(),
                                plot.render());
    }
    return sr.converged ? 0 : 3;
}

int cmd_scan(const RunConfig& rc) {
    hameig::CatalogProblem cp = load_problem(rc);
    hameig::HypothesisReport rep =
        hameig::run_hypothesis_report(cp.spec, cp.bounds, cp.quad);

    double lam_max = rc.lambda_max;
    if (!(lam_max > 0.0)) {
        if (!(rep.lambda_bar > 0.0))
            throw usage_error("scan: no --lambda-max and delta_bar is not positive, "
                              "so no lambda ceiling can be derived");
        lam_max = rep.lambda_bar;
    }
    std::vector<double> grid;
    for (int i = 1; i <= rc.lambda_cells; ++i)
        grid.push_back(lam_max * double(i) / rc.lambda_cells);

    hameig::ScanOptions so;
    so.solver.tol = rc.tol;
    so.solver.quad = cp.quad;
    so.lambda_bar = rep.lambda_bar > 0.0 ? std::max(rep.lambda_bar, lam_max) : lam_max;

    hameig::GridFunction u0 = vertex_start(cp.spec, rc.grid_n);
    hameig::ScanResult res =
        hameig::boundary_scan(cp.spec, cp.spec.kernel(), cp.bounds, grid, u0, so);

    std::cout << "problem: " << cp.spec.name << " rho = " << g12(rc.rho)
              << " lambda grid: " << rc.lambda_cells << " cells up to "
              << g12(lam_max) << "\n";
    for (const auto& c : res.cells) {
        std::cout << "  lambda = " << g12(c.lambda);
        if (c.converged)
            std::cout << "  n = " << g12(c.n) << "  (" << c.iterations << " it"
                      << (c.sliding_mode ? ", sliding" : "") << ")\n";
        else
            std::cout << "  did not converge (" << c.iterations << " it)\n";
    }
    if (!res.diagnostic.empty()) std::cout << "note: " << res.diagnostic << "\n";
    for (const auto& p : res.pairs) {
        std::cout << "eigenpair: lambda* = " << g12(p.lambda_star)
                  << " residual = " << g12(p.residual)
                  << " |n-rho| = " << g12(p.norm_gap) << " cone "
                  << (p.cone_cert.pass() ? "PASS" : "FAIL")
                  << (p.sliding_mode ? " (sliding-mode)" : "") << "\n";
    }
    if (res.pairs.empty()) std::cout << "no eigenpairs located\n";

    auto targets = parse_emit(rc.emit);
    fs::create_directories(rc.out);
    hameig::VertexFunction vf = cp.spec.vertex();
    if (targets.count("csv")) {
        std::ostringstream cells;
        hameig::write_scan_csv(cells, res.cells);
        hameig::write_text_file((fs::path(rc.out) / "scan_cells.csv").string(),
                                cells.str());
        std::ostringstream pairs;
        hameig::write_pairs_csv(pairs, res.pairs);
        hameig::write_text_file((fs::path(rc.out) / "eigenpairs.csv").string(),
                                pairs.str());
        for (std::size_t i = 0; i < res.pairs.size(); ++i) {
            std::ostringstream os;
            hameig::write_solution_csv(os, res.pairs[i].u_star, vf);
            hameig::write_text_file(
                (fs::path(rc.out) / ("u_star_" + std::to_string(i + 1) + ".csv")).string(),
                os.str());
        }
    }
    if (targets.count("json")) {
        nlohmann::json j = hameig::scan_json(cp.spec.name, rc.rho, rc.grid_n, res);
        j["lambda_bar"] = rep.lambda_bar;
        j["delta_bar"] = rep.delta_bar;
        j["hypotheses_pass"] = checkable_pass(rep, bool(cp.bounds.delta_rho));
        hameig::write_text_file((fs::path(rc.out) / "scan.json").string(), j.dump(2) + "\n");
    }
    if (targets.count("svg")) {
        hameig::SvgPlot plot("norm response n(lambda), rho = " + g12(rc.rho), "lambda",
                             "n");
        hameig::SvgPlot::Series sn;
        for (const auto& c : res.cells) {
            if (!c.converged) continue;
            sn.x.push_back(c.lambda);
            sn.y.push_back(c.n);
        }
        plot.add_level(rc.rho);
        if (!sn.x.empty()) plot.add_series(sn);
        hameig::SvgPlot::Series marks;
        marks.color = "#2ca02c";
        marks.markers = true;
        for (const auto& p : res.pairs) {
            marks.x.push_back(p.lambda_star);
            marks.y.push_back(rc.rho);
        }
        if (!marks.x.empty()) plot.add_series(marks);
        hameig::write_text_file((fs::path(rc.out) / "scan.svg").string(), plot.render());

        for (std::size_t i = 0; i < res.pairs.size(); ++i) {
            const auto& p = res.pairs[i];
            hameig::SvgPlot up("u*(t) at lambda* = " + g12(p.lambda_star), "t", "u");
            hameig::SvgPlot::Series su;
            su.x = p.u_star.nodes;
            su.y = p.u_star.values;
            hameig::SvgPlot::Series sy;
            sy.x = p.u_star.nodes;
            sy.color = "#7f7f7f";
            for (double t : p.u_star.nodes) sy.y.push_back(vf.eval(t));
            up.add_series(sy);
            up.add_series(su);
            hameig::write_text_file(
                (fs::path(rc.out) / ("u_star_" + std::to_string(i + 1) + ".svg")).string(),
                up.render());
        }
    }

    if (!res.pairs.empty()) return 0;
    bool hyp_ok = checkable_pass(rep, bool(cp.bounds.delta_rho));
    if (hyp_ok) {
        std::cerr << "resolution failure: hypotheses pass but no eigenpair was "
                     "located\n";
        return 3;
    }
    std::cerr << "no eigenpair located and hypotheses fail\n";
    return 2;
}

int cmd_list_catalog() {
    for (const std::string& name : hameig::catalog_names()) {
        hameig::CatalogProblem cp = hameig::make_catalog_problem(name, 1.0);
        std::cout << name << "\n    " << cp.description << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hameig: perturbed Hammerstein equations on affine cones; hypothesis "
                 "checks, fixed-point solves, and boundary eigenpair scans"};
    app.require_subcommand(1);

    RunConfig rc;
    auto add_common = [&rc](CLI::App* cmd, bool needs_problem) {
        auto* p = cmd->add_option("--problem", rc.problem,
                                  "catalog name or config-file path");
        if (needs_problem) p->required();
        cmd->add_option("--rho", rc.rho, "affine-cone boundary radius");
        cmd->add_option("--grid-n", rc.grid_n, "nodes on [0,1] (history spacing matches)");
        cmd->add_option("--tol", rc.tol, "solver / acceptance tolerance");
        cmd->add_option("--threads", rc.threads,
                        "worker threads, 0 = available parallelism");
        cmd->add_option("--out", rc.out, "output directory");
        cmd->add_option("--emit", rc.emit, "comma-separated outputs: csv,json,svg");
    };

    CLI::App* check = app.add_subcommand("check", "verify the hypotheses for a problem");
    add_common(check, true);
    CLI::App* solve = app.add_subcommand("solve", "fixed-point solve at one lambda");
    add_common(solve, true);
    auto* lam_opt = solve->add_option("--lambda", rc.lambda, "parameter lambda");
    CLI::App* scan =
        app.add_subcommand("scan", "locate boundary eigenpairs over a lambda grid");
    add_common(scan, true);
    scan->add_option("--lambda-max", rc.lambda_max,
                     "lambda ceiling (default: derived lambda_bar)");
    scan->add_option("--lambda-cells", rc.lambda_cells, "lambda grid cells");
    CLI::App* list = app.add_subcommand("list-catalog", "list built-in problems");
    (void)list;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 4;
    }
    rc.have_lambda = lam_opt->count() > 0;

    try {
        if (list->parsed()) return cmd_list_catalog();

        // a config file may supply run parameters; explicit flags win
        CLI::App* active = check->parsed() ? check : solve->parsed() ? solve : scan;
        if (!is_catalog_name(rc.problem) && fs::exists(rc.problem)) {
            rc.file_cfg = hameig::ConfigMap::parse_file(rc.problem);
            const hameig::ConfigMap& fc = *rc.file_cfg;
            if (!active->count("--rho")) rc.rho = fc.get_double("rho", rc.rho);
            if (!active->count("--grid-n")) rc.grid_n = fc.get_int("grid_n", rc.grid_n);
            if (!active->count("--tol")) rc.tol = fc.get_double("tol", rc.tol);
            if (!active->count("--out")) rc.out = fc.get("out", rc.out);
            if (!active->count("--emit")) rc.emit = fc.get("emit", rc.emit);
            if (solve->parsed() && !rc.have_lambda && fc.has("lambda")) {
                rc.lambda = fc.require_double("lambda");
                rc.have_lambda = true;
            }
            if (scan->parsed() && !scan->count("--lambda-max"))
                rc.lambda_max = fc.get_double("lambda_max", rc.lambda_max);
        }
        validate_run(rc);
        parse_emit(rc.emit);

        if (check->parsed()) return cmd_check(rc);
        if (solve->parsed()) return cmd_solve(rc);
        return cmd_scan(rc);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const hameig::integration_error& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
