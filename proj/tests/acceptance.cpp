// Acceptance gate: each criterion prints one [PASS]/[FAIL] line with its wall
// time and budget; the exit code is the number of failed criteria.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <hameig/hameig.hpp>

#ifndef HAMEIG_CLI_PATH
#error "HAMEIG_CLI_PATH must point at the built executable"
#endif

namespace fs = std::filesystem;
using namespace hameig;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int g_failures = 0;

void criterion(int number, const std::string& name, double budget_s,
               const std::function<void(Outcome&)>& body) {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.ok && dt >= budget_s) {
        out.ok = false;
        out.detail = "runtime budget exceeded";
    }
    std::printf("[%s] criterion %d: %s (%.2f s / %.0f s)%s%s\n",
                out.ok ? "PASS" : "FAIL", number, name.c_str(), dt, budget_s,
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++g_failures;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, std::string& stdout_text) {
    fs::path out = fs::temp_directory_path() / "hameig_acceptance_stdout.txt";
    std::string cmd = std::string(HAMEIG_CLI_PATH) + " " + args + " >" + out.string() +
                      " 2>/dev/null";
    int raw = std::system(cmd.c_str());
    stdout_text = slurp(out);
    return (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
}

GridFunction vertex_start(const ProblemSpec& spec, int n01) {
    VertexFunction vf = spec.vertex();
    return GridFunction::sample(GridFunction::uniform_nodes(spec.r, n01),
                                [&](double t) { return vf.eval(t); });
}

// mirror of the scan command: lambda ceiling from the hypothesis report,
// sixteen uniform cells, vertex start
ScanResult report_scan(const CatalogProblem& cp, int grid_n) {
    HypothesisReport rep = run_hypothesis_report(cp.spec, cp.bounds, cp.quad);
    std::vector<double> grid;
    for (int i = 1; i <= 16; ++i) grid.push_back(rep.lambda_bar * i / 16.0);
    ScanOptions so;
    so.solver.tol = 1e-10;
    so.solver.quad = cp.quad;
    so.lambda_bar = rep.lambda_bar;
    GridFunction u0 = vertex_start(cp.spec, grid_n);
    return boundary_scan(cp.spec, cp.spec.kernel(), cp.bounds, grid, u0, so);
}

void c1_green_bounds(Outcome& out) {
    for (int i = 0; i <= 200; ++i) {
        double t = i / 200.0;
        for (int j = 0; j <= 200; ++j) {
            double s = j / 200.0;
            double g = green_eval(t, s);
            double phi = phi_upper(s);
            out.require(g <= phi + 1e-12, "G exceeds Phi");
            if (t >= 0.25 && t <= 0.75)
                out.require(g >= 0.25 * phi - 1e-12, "G below Phi/4 on [1/4,3/4]");
        }
    }
}

void c2_constant_forcing(Outcome& out) {
    CatalogProblem cp = make_catalog_problem("const-f", 1.0);
    GridFunction u0 = vertex_start(cp.spec, 257);
    GridFunction Tu = hammerstein_apply(u0, cp.spec, cp.spec.kernel(), QuadConfig{});
    double worst = 0.0;
    for (std::size_t i = 0; i < Tu.nodes.size(); ++i) {
        double t = Tu.nodes[i];
        worst = std::max(worst, std::abs(Tu.values[i] - t * (1.0 - t) / 2.0));
    }
    out.require(worst < 1e-8, "closed form missed by " + std::to_string(worst));
}

void c3_power_iteration(Outcome& out) {
    ProblemSpec spec;
    spec.f = [](double, double u, double) { return u; };
    spec.sigma = [](double t) { return t; };
    spec.sigma_slope = 1;
    spec.r = 0.0;
    GreenKernel kernel = spec.kernel();
    QuadConfig quad;

    auto nodes = GridFunction::uniform_nodes(0.0, 400);
    GridFunction v = GridFunction::sample(nodes, [](double t) { return t * (1.0 - t); });
    double mu = 0.0;
    for (int it = 0; it < 60; ++it) {
        GridFunction w = hammerstein_apply(v, spec, kernel, quad);
        double m = 0.0;
        for (double x : w.values) m = std::max(m, std::abs(x));
        out.require(m > 0.0, "power iteration collapsed");
        if (!(m > 0.0)) return;
        for (auto& x : w.values) x /= m;
        v = w;
        if (std::abs(m - mu) < 1e-12) {
            mu = m;
            break;
        }
        mu = m;
    }
    double target = 1.0 / (M_PI * M_PI);
    out.require(std::abs(mu - target) < 1e-4,
                "dominant value " + std::to_string(mu) + " vs 1/pi^2");
}

void c4_const_scan(Outcome& out) {
    for (double rho : {1.0, 2.0}) {
        CatalogProblem cp = make_catalog_problem("const-f", rho);
        ScanResult res = report_scan(cp, 257);
        out.require(res.pairs.size() == 1,
                    "rho=" + std::to_string(rho) + ": expected exactly one eigenpair");
        if (res.pairs.size() != 1) return;
        const EigenPair& ep = res.pairs[0];
        out.require(std::abs(ep.lambda_star - 8.0 * rho) < 1e-6,
                    "rho=" + std::to_string(rho) + ": lambda* off closed form");
        out.require(ep.cone_cert.pass(), "cone certificate failed");
    }
}

void c5_example_reproduction(Outcome& out) {
    fs::path dir = fs::temp_directory_path() / "hameig_acceptance_example";
    fs::remove_all(dir);
    fs::create_directories(dir);

    std::string text;
    int code = run_cli("check --problem example-delay-phi --out " + dir.string() +
                       " --emit json", text);
    out.require(code == 0, "check exited with " + std::to_string(code));
    out.require(text.find("M_rho(t) = 2/sqrt(t) + 8") != std::string::npos,
                "majorant display missing");
    out.require(text.find("delta_rho(t) = 1/sqrt(t)") != std::string::npos,
                "minorant display missing");
    out.require(text.find("overall: PASS") != std::string::npos, "check did not pass");

    CatalogProblem cp = make_catalog_problem("example-delay-phi", 1.0);
    double delta_bar = compute_delta_bar(cp.bounds, cp.spec.kernel(), cp.quad);
    out.require(std::abs(delta_bar - 0.136803621530588) < 1e-8,
                "delta_bar drifted: " + std::to_string(delta_bar));

    code = run_cli("scan --problem example-delay-phi --out " + dir.string(), text);
    out.require(code == 0, "scan exited with " + std::to_string(code));
    nlohmann::json j = nlohmann::json::parse(slurp(dir / "scan.json"));
    out.require(!j["pairs"].empty(), "no eigenpair located");
    if (j["pairs"].empty()) return;
    auto p0 = j["pairs"][0];
    double lam = p0["lambda_star"].get<double>();
    double lambda_bar = j["lambda_bar"].get<double>();
    out.require(p0["residual"].get<double>() < 1e-6, "residual too large");
    out.require(p0["norm_gap"].get<double>() < 1e-6, "norm gap too large");
    out.require(lam > 0.0 && lam < lambda_bar, "lambda* outside (0, lambda_bar)");
    out.require(std::abs(lam - 2.127635058144) < 1e-6,
                "frozen lambda* regression: " + std::to_string(lam));
}

void c6_envelope_properties(Outcome& out) {
    CatalogProblem cp = make_catalog_problem("example-delay-phi", 1.0);
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> td(0.01, 1.0), ud(0.0, 2.0);

    auto min_curve_dist = [&](const std::vector<DiscontinuityCurve>& curves, double t,
                              double x) {
        double d = 1e9;
        for (const auto& c : curves)
            if (t >= c.a && t <= c.b) d = std::min(d, std::abs(x - c.value(t)));
        return d;
    };

    for (int i = 0; i < 1000; ++i) {
        double t = td(rng), u = ud(rng), v = ud(rng);
        ValueInterval small = f_envelope(cp.spec, t, u, v, 1e-6);
        ValueInterval big = f_envelope(cp.spec, t, u, v, 1e-3);
        out.require(big.lo <= small.lo + 1e-13 && small.hi <= big.hi + 1e-13,
                    "nesting violated");
        if (min_curve_dist(cp.spec.gamma_curves, t, u) > 1e-3 &&
            min_curve_dist(cp.spec.Gamma_curves, t, v) > 1e-3) {
            double fv = cp.spec.f(t, u, v);
            ValueInterval tight = f_envelope(cp.spec, t, u, v, 1e-9);
            out.require(tight.contains(fv), "off-curve point value escaped");
        }
        if (!out.ok) return;
    }
}

void c7_phi_properties(Outcome& out) {
    StepAccumulator p40(40), p41(41);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::vector<double> xs(10000);
    for (auto& x : xs) x = dist(rng);
    std::sort(xs.begin(), xs.end());
    double prev = -1.0;
    const double tail = std::pow(2.0, -40);
    for (double x : xs) {
        double v = p40(x);
        out.require(v >= prev, "monotonicity violated");
        out.require(std::abs(v - p41(x)) <= tail, "truncation bound violated");
        if (!out.ok) return;
        prev = v;
    }
}

void c8_cone_invariance(Outcome& out) {
    CatalogProblem cp = make_catalog_problem("example-delay-phi", 1.0);
    GreenKernel kernel = cp.spec.kernel();
    VertexFunction vf = cp.spec.vertex();
    VertexFunction zero_vf([](double) { return 0.0; }, cp.spec.r);
    auto nodes = GridFunction::uniform_nodes(cp.spec.r, 257);
    GridFunction y = GridFunction::sample(nodes, [&](double t) { return vf.eval(t); });

    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> sd(0.05, 0.95), ed(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        int m = 1 + int(rng() % 4);
        std::vector<double> svals(m), etas(m);
        for (int j = 0; j < m; ++j) {
            svals[j] = sd(rng);
            etas[j] = ed(rng);
        }
        GridFunction u = y;
        double sup_w = 0.0;
        std::vector<double> w(nodes.size(), 0.0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i] < 0.0) continue;
            for (int j = 0; j < m; ++j) w[i] += etas[j] * green_eval(nodes[i], svals[j]);
            sup_w = std::max(sup_w, w[i]);
        }
        double scale = sup_w > 0.0 ? cp.bounds.rho * ed(rng) / sup_w : 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) u.values[i] += scale * w[i];

        GridFunction Tu = hammerstein_apply(u, cp.spec, kernel, cp.quad);
        ConeCertificate cert = cone_verify(Tu, zero_vf, 1e-8);
        out.require(cert.pass(), "Tu left the cone on trial " + std::to_string(trial));
        if (!out.ok) return;
    }
}

void c9_grid_refinement(Outcome& out) {
    CatalogProblem cp = make_catalog_problem("example-delay-phi", 1.0);
    ScanResult coarse = report_scan(cp, 257);
    ScanResult fine = report_scan(cp, 513);
    out.require(!coarse.pairs.empty() && !fine.pairs.empty(),
                "scan lost the eigenpair at one resolution");
    if (coarse.pairs.empty() || fine.pairs.empty()) return;
    double gap = std::abs(coarse.pairs[0].lambda_star - fine.pairs[0].lambda_star);
    out.require(gap < 1e-4, "lambda* moved by " + std::to_string(gap));
}

} // namespace

int main() {
    criterion(1, "kernel bounds G <= Phi and G >= Phi/4 on the middle band", 1.0,
              c1_green_bounds);
    criterion(2, "constant forcing reproduces t(1-t)/2", 1.0, c2_constant_forcing);
    criterion(3, "power iteration reaches 1/pi^2", 5.0, c3_power_iteration);
    criterion(4, "constant-forcing scans isolate lambda* = 8 rho", 5.0, c4_const_scan);
    criterion(5, "delay example: checks, displays, frozen scan", 60.0,
              c5_example_reproduction);
    criterion(6, "envelope nesting and point containment", 5.0, c6_envelope_properties);
    criterion(7, "step accumulator monotonicity and truncation", 1.0, c7_phi_properties);
    criterion(8, "random cone elements stay in the cone under T", 30.0,
              c8_cone_invariance);
    criterion(9, "eigenvalue stability under grid doubling", 120.0, c9_grid_refinement);

    if (g_failures == 0) std::printf("acceptance: all 9 criteria passed\n");
    else std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return g_failures;
}
