#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hameig/envelope.hpp"
#include "hameig/green_kernel.hpp"
#include "hameig/grid_function.hpp"
#include "hameig/hammerstein.hpp"
#include "hameig/problem.hpp"
#include "hameig/quadrature.hpp"

namespace hameig {

struct ConeCertificate {
    bool history_pinned = false;
    bool nonneg = false;
    bool harnack = false;
    double history_margin = 0.0; // max |u - y| on [-r,0], small is good
    double nonneg_margin = 0.0;  // min (u - y) on [0,1]
    double harnack_margin = 0.0; // min_mid (u-y) - sup|u-y|/4

    bool pass() const { return history_pinned && nonneg && harnack; }
};

inline ConeCertificate cone_verify(const GridFunction& u, const VertexFunction& y,
                                   double tol) {
    ConeCertificate cert;
    double hist_dev = 0.0;
    double min_pos = std::numeric_limits<double>::infinity();
    double min_mid = std::numeric_limits<double>::infinity();
    double sup_unit = 0.0;
    for (std::size_t i = 0; i < u.nodes.size(); ++i) {
        double t = u.nodes[i];
        double d = u.values[i] - y.eval(t);
        if (t <= 0.0) hist_dev = std::max(hist_dev, std::abs(d));
        if (t >= 0.0) {
            min_pos = std::min(min_pos, d);
            sup_unit = std::max(sup_unit, std::abs(d));
            if (t >= 0.25 && t <= 0.75) min_mid = std::min(min_mid, d);
        }
    }
    cert.history_margin = hist_dev;
    cert.nonneg_margin = min_pos;
    cert.harnack_margin = min_mid - 0.25 * sup_unit;
    cert.history_pinned = hist_dev <= tol;
    cert.nonneg = min_pos >= -tol;
    cert.harnack = cert.harnack_margin >= -tol;
    return cert;
}

struct EigenPair {
    double lambda_star = 0.0;
    GridFunction u_star;
    double residual = 0.0;
    double norm_gap = 0.0;
    ConeCertificate cone_cert;
    bool sliding_mode = false;
};

struct SolverOptions {
    double theta = 0.5;
    double tol = 1e-10;
    int max_iter = 600;
    double divergence_guard = 1e8;
    int sliding_rounds = 5;
    double envelope_eps = 1e-9;
    QuadConfig quad;
};

struct SolveResult {
    GridFunction u;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    bool sliding_mode = false;
    double envelope_residual = std::numeric_limits<double>::infinity();
    std::string diagnostic;
};

namespace detail {

inline GridFunction vertex_grid(const std::vector<double>& nodes,
                                const VertexFunction& y) {
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = y.eval(nodes[i]);
    return GridFunction(nodes, std::move(vals));
}

inline void pin_history(GridFunction& u, const GridFunction& y) {
    std::size_t i0 = u.first_nonneg_index();
    for (std::size_t i = 0; i < i0; ++i) u.values[i] = y.values[i];
    if (i0 < u.nodes.size() && u.nodes[i0] == 0.0) u.values[i0] = y.values[i0];
}

inline double sup_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

// distance from u to the interval operator y + lambda [T_lo, T_hi]; the
// acceptance residual for sliding-mode points
inline double envelope_residual(const GridFunction& u, const GridFunction& y,
                                double lambda, const ProblemSpec& spec,
                                const QuadPlan& plan, double eps) {
    std::vector<double> flo(plan.s.size()), fhi(plan.s.size());
    for (std::size_t j = 0; j < plan.s.size(); ++j) {
        double s = plan.s[j];
        ValueInterval iv = f_envelope(spec, s, u.eval(s), u.eval(spec.sigma(s)), eps, 5);
        flo[j] = iv.lo;
        fhi[j] = iv.hi;
    }
    GridFunction Tlo = apply_plan(u, plan, flo);
    GridFunction Thi = apply_plan(u, plan, fhi);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.nodes.size(); ++i) {
        double lo = y.values[i] + lambda * Tlo.values[i];
        double hi = y.values[i] + lambda * Thi.values[i];
        double d = 0.0;
        if (u.values[i] < lo) d = lo - u.values[i];
        else if (u.values[i] > hi) d = u.values[i] - hi;
        worst = std::max(worst, d);
    }
    return worst;
}

inline std::size_t nearest_node(const std::vector<double>& nodes, double s) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), s);
    if (it == nodes.begin()) return 0;
    if (it == nodes.end()) return nodes.size() - 1;
    std::size_t i = std::size_t(it - nodes.begin());
    return (s - nodes[i - 1] <= nodes[i] - s) ? i - 1 : i;
}

} // namespace detail

// sampled two-sided slope bound used by the contraction heuristic; a jump
// makes the difference quotient grow as the step shrinks, so scanning at two
// resolutions separates discontinuities (reported as +inf) from true slopes
inline double estimate_lipschitz(const ProblemSpec& spec, double box_edge) {
    const int nt = 9;
    auto scan = [&](int nu) {
        double L = 0.0;
        double du = box_edge / (nu - 1);
        for (int i = 0; i < nt; ++i) {
            double t = (i + 0.5) / nt;
            for (int a = 0; a < nu; ++a) {
                double u = box_edge * a / (nu - 1);
                for (int b = 0; b < nu; ++b) {
                    double v = box_edge * b / (nu - 1);
                    double f0 = spec.f(t, u, v);
                    if (a + 1 < nu)
                        L = std::max(L, std::abs(spec.f(t, u + du, v) - f0) / du);
                    if (b + 1 < nu)
                        L = std::max(L, std::abs(spec.f(t, u, v + du) - f0) / du);
                }
            }
        }
        return L;
    };
    double coarse = scan(33);
    double fine = scan(129);
    if (!std::isfinite(coarse) || !std::isfinite(fine))
        return std::numeric_limits<double>::infinity();
    if (fine > 2.5 * coarse + 1e-9) return std::numeric_limits<double>::infinity();
    return fine;
}

// damped Picard u <- (1-theta) u + theta (y + lambda Tu) with the history part
// pinned to omega; period-2 chattering resolved by envelope sliding selection
inline SolveResult fixed_point_solve(const ProblemSpec& spec, const GreenKernel& kernel,
                                     double lambda, const GridFunction& u0,
                                     const SolverOptions& opt = {}) {
    spec.validate();
    if (!(lambda >= 0.0))
        throw std::domain_error("fixed_point_solve: lambda >= 0 required");
    if (!(opt.theta > 0.0 && opt.theta <= 1.0))
        throw std::domain_error("fixed_point_solve: theta in (0,1] required");

    VertexFunction vf = spec.vertex();
    GridFunction y = detail::vertex_grid(u0.nodes, vf);
    SolveResult res;
    res.u = u0;
    detail::pin_history(res.u, y);

    if (lambda == 0.0) {
        res.u = y;
        res.residual = 0.0;
        res.envelope_residual = 0.0;
        res.converged = true;
        return res;
    }

    GridFunction u_prev = res.u, u_prev2 = res.u;
    int rounds = 0;
    for (int it = 0; it < opt.max_iter; ++it) {
        HammersteinEval he;
        try {
            he = hammerstein_eval(res.u, spec, kernel, opt.quad);
        } catch (const integration_error& e) {
            res.iterations = it;
            res.diagnostic = std::string("integration failure: ") + e.what();
            return res;
        }
        GridFunction g = res.u;
        for (std::size_t i = 0; i < g.values.size(); ++i)
            g.values[i] = y.values[i] + lambda * he.Tu.values[i];

        double r = detail::sup_diff(res.u, g);
        res.residual = r;
        res.iterations = it;
        if (!std::isfinite(r) || r > opt.divergence_guard) {
            res.diagnostic = "diverged";
            return res;
        }
        if (r < opt.tol) {
            res.converged = true;
            res.envelope_residual = r;
            return res;
        }

        bool stalled = it >= 2 && detail::sup_diff(res.u, u_prev2) < opt.tol;
        if (stalled && rounds < opt.sliding_rounds) {
            // iterates have settled while the residual has not: the integrand
            // flips across a curve; replace flipping samples with the envelope
            // element closest to zeroing the local residual
            ++rounds;
            std::vector<double> fa = he.fvals;
            std::vector<double> fb = integrand_values(g, spec, he.plan);
            bool any = false;
            for (std::size_t j = 0; j < he.plan.s.size(); ++j) {
                double jump = std::abs(fa[j] - fb[j]);
                if (jump <= 1e-6 * (1.0 + std::abs(fa[j]))) continue;
                any = true;
                double s = he.plan.s[j];
                std::size_t k = detail::nearest_node(res.u.nodes, s);
                double G = detail::green_unchecked(std::max(res.u.nodes[k], 0.0), s);
                double denom = lambda * he.plan.w[j] * G;
                double resk = res.u.values[k] - g.values[k];
                double target = denom > 1e-300 ? fa[j] + resk / denom : fa[j];
                ValueInterval iv = f_envelope(spec, s, res.u.eval(s),
                                              res.u.eval(spec.sigma(s)),
                                              opt.envelope_eps, 5);
                fa[j] = sliding_selection(iv, target);
            }
            if (any) {
                GridFunction Tu2 = apply_plan(res.u, he.plan, fa);
                for (std::size_t i = 0; i < g.values.size(); ++i)
                    g.values[i] = y.values[i] + lambda * Tu2.values[i];
                double r2 = detail::sup_diff(res.u, g);
                double er = detail::envelope_residual(res.u, y, lambda, spec, he.plan,
                                                      opt.envelope_eps);
                res.envelope_residual = er;
                if (er < opt.tol) {
                    res.converged = true;
                    res.sliding_mode = true;
                    res.residual = std::min(res.residual, r2);
                    return res;
                }
            }
        } else if (stalled && rounds >= opt.sliding_rounds) {
            double er = detail::envelope_residual(res.u, y, lambda, spec, he.plan,
                                                  opt.envelope_eps);
            res.envelope_residual = er;
            if (er < opt.tol) {
                res.converged = true;
                res.sliding_mode = true;
                return res;
            }
            res.diagnostic = "chattering persisted past sliding rounds";
            return res;
        }

        u_prev2 = u_prev;
        u_prev = res.u;
        for (std::size_t i = 0; i < res.u.values.size(); ++i)
            res.u.values[i] = (1.0 - opt.theta) * res.u.values[i] + opt.theta * g.values[i];
        detail::pin_history(res.u, y);
    }
    res.diagnostic = "max_iter exceeded";
    return res;
}

inline SolveResult fixed_point_solve(const ProblemSpec& spec, const GreenKernel& kernel,
                                     double lambda, const GridFunction& u0, double theta,
                                     double tol, int max_iter) {
    SolverOptions opt;
    opt.theta = theta;
    opt.tol = tol;
    opt.max_iter = max_iter;
    return fixed_point_solve(spec, kernel, lambda, u0, opt);
}

struct NormResponse {
    double value = std::numeric_limits<double>::quiet_NaN();
    SolveResult solve;
};

inline NormResponse norm_response(const ProblemSpec& spec, const GreenKernel& kernel,
                                  double lambda, const GridFunction& u0,
                                  const SolverOptions& opt = {}) {
    NormResponse nr;
    nr.solve = fixed_point_solve(spec, kernel, lambda, u0, opt);
    if (!nr.solve.converged) return nr;
    VertexFunction vf = spec.vertex();
    double m = 0.0;
    for (std::size_t i = 0; i < nr.solve.u.nodes.size(); ++i) {
        double t = nr.solve.u.nodes[i];
        if (t >= 0.0)
            m = std::max(m, std::abs(nr.solve.u.values[i] - vf.eval(t)));
    }
    nr.value = m;
    return nr;
}

// n(lambda) with the default 257-node grid and u0 = y; throws on
// non-convergence
inline double norm_response(const ProblemSpec& spec, const GreenKernel& kernel,
                            double lambda, double tol) {
    SolverOptions opt;
    opt.tol = tol;
    VertexFunction vf = spec.vertex();
    GridFunction u0 = GridFunction::sample(GridFunction::uniform_nodes(spec.r, 257),
                                           [&](double t) { return vf.eval(t); });
    NormResponse nr = norm_response(spec, kernel, lambda, u0, opt);
    if (!nr.solve.converged)
        throw std::runtime_error("norm_response: no convergence at lambda=" +
                                 std::to_string(lambda) + " (" +
                                 (nr.solve.diagnostic.empty() ? "max_iter"
                                                              : nr.solve.diagnostic) +
                                 ")");
    return nr.value;
}

struct ScanCell {
    double lambda = 0.0;
    double n = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    int iterations = 0;
    bool sliding_mode = false;
};

struct ScanOptions {
    SolverOptions solver;
    double scan_tol = 1e-9;         // |n(lambda) - rho| acceptance
    double lambda_bar = 0.0;        // 0 -> unknown; eigenpairs must stay below
    double cert_tol = 1e-8;
    bool auto_theta = true;         // theta=1 when the sampled contraction holds
    int refine_max_iter = 4000;     // amplitude-normalized fallback budget
};

struct ScanResult {
    std::vector<ScanCell> cells;
    std::vector<EigenPair> pairs;
    bool resolution_failure = false;
    std::string diagnostic;
};

namespace detail {

inline EigenPair make_pair_from_solve(const ProblemSpec& spec, const SolveResult& sr,
                                      double lambda, double rho, double cert_tol) {
    VertexFunction vf = spec.vertex();
    EigenPair ep;
    ep.lambda_star = lambda;
    ep.u_star = sr.u;
    ep.residual = sr.residual;
    ep.sliding_mode = sr.sliding_mode;
    double m = 0.0;
    for (std::size_t i = 0; i < sr.u.nodes.size(); ++i)
        if (sr.u.nodes[i] >= 0.0)
            m = std::max(m, std::abs(sr.u.values[i] - vf.eval(sr.u.nodes[i])));
    ep.norm_gap = std::abs(m - rho);
    ep.cone_cert = cone_verify(sr.u, vf, cert_tol);
    return ep;
}

// iterate w = Tu, lambda = rho/||w||, u <- (1-theta) u + theta (y + lambda w);
// follows the boundary sphere ||u-y|| = rho directly, so it converges where
// the lambda-parameterized branch folds back
inline std::optional<EigenPair> normalized_refine(const ProblemSpec& spec,
                                                  const GreenKernel& kernel, double rho,
                                                  const GridFunction& u0,
                                                  const ScanOptions& opt) {
    VertexFunction vf = spec.vertex();
    GridFunction y = vertex_grid(u0.nodes, vf);
    GridFunction u = u0;
    pin_history(u, y);
    double lambda = 0.0;
    double res = std::numeric_limits<double>::infinity();
    const double theta = opt.solver.theta;
    for (int it = 0; it < opt.refine_max_iter; ++it) {
        GridFunction Tu;
        try {
            Tu = hammerstein_apply(u, spec, kernel, opt.solver.quad);
        } catch (const integration_error&) {
            return std::nullopt;
        }
        double nw = 0.0;
        for (std::size_t i = 0; i < Tu.nodes.size(); ++i)
            if (Tu.nodes[i] >= 0.0) nw = std::max(nw, std::abs(Tu.values[i]));
        if (!(nw > 0.0) || !std::isfinite(nw)) return std::nullopt;
        lambda = rho / nw;
        GridFunction g = u;
        for (std::size_t i = 0; i < g.values.size(); ++i)
            g.values[i] = y.values[i] + lambda * Tu.values[i];
        res = sup_diff(u, g);
        if (!std::isfinite(res)) return std::nullopt;
        if (res < opt.solver.tol) {
            SolveResult sr;
            sr.u = u;
            sr.residual = res;
            sr.converged = true;
            sr.iterations = it;
            return make_pair_from_solve(spec, sr, lambda, rho, opt.cert_tol);
        }
        for (std::size_t i = 0; i < u.values.size(); ++i)
            u.values[i] = (1.0 - theta) * u.values[i] + theta * g.values[i];
        pin_history(u, y);
    }
    return std::nullopt;
}

} // namespace detail

// n(lambda) over the grid, bracket every sign change of n - rho, bisect; when
// the reachable branch never meets the sphere (fold below rho), fall back to
// the amplitude-normalized refinement
inline ScanResult boundary_scan(const ProblemSpec& spec, const GreenKernel& kernel,
                                const BoundData& bounds,
                                const std::vector<double>& lambda_grid,
                                const GridFunction& u_init, ScanOptions opt = {}) {
    spec.validate();
    bounds.validate();
    ScanResult out;
    VertexFunction vf = spec.vertex();
    GridFunction y = detail::vertex_grid(u_init.nodes, vf);
    const double rho = bounds.rho;

    if (opt.auto_theta) {
        double edge = rho + vf.sup_history();
        double L = estimate_lipschitz(spec, edge);
        double lam_hi = lambda_grid.empty() ? 1.0 : lambda_grid.back();
        if (std::isfinite(L) && lam_hi * L / 8.0 < 0.9) opt.solver.theta = 1.0;
    }

    GridFunction u_warm = y;
    std::vector<GridFunction> cell_solutions;
    for (double lam : lambda_grid) {
        SolverOptions so = opt.solver;
        SolveResult sr = fixed_point_solve(spec, kernel, lam, u_warm, so);
        ScanCell cell;
        cell.lambda = lam;
        cell.converged = sr.converged;
        cell.iterations = sr.iterations;
        cell.sliding_mode = sr.sliding_mode;
        if (sr.converged) {
            double m = 0.0;
            for (std::size_t i = 0; i < sr.u.nodes.size(); ++i)
                if (sr.u.nodes[i] >= 0.0)
                    m = std::max(m, std::abs(sr.u.values[i] - y.values[i]));
            cell.n = m;
            u_warm = sr.u;
        }
        out.cells.push_back(cell);
        cell_solutions.push_back(sr.converged ? sr.u : y);
    }

    // bracket + bisection between consecutive convergent cells
    for (std::size_t i = 0; i + 1 < out.cells.size(); ++i) {
        const ScanCell &c1 = out.cells[i], &c2 = out.cells[i + 1];
        if (!c1.converged || !c2.converged) continue;
        double d1 = c1.n - rho, d2 = c2.n - rho;
        if (d1 * d2 > 0.0) continue;
        double lo = c1.lambda, hi = c2.lambda;
        GridFunction u_lo = cell_solutions[i], u_hi = cell_solutions[i + 1];
        double dlo = d1;
        SolveResult accepted;
        double accepted_lambda = 0.0;
        bool ok = false;
        int bad = 0;
        for (int step = 0; step < 200; ++step) {
            double mid = 0.5 * (lo + hi);
            GridFunction u_start = (mid - lo <= hi - mid) ? u_lo : u_hi;
            SolveResult sr = fixed_point_solve(spec, kernel, mid, u_start, opt.solver);
            if (!sr.converged) {
                if (++bad > 3) break;
                hi = 0.5 * (mid + hi); // retreat toward the known-good side
                continue;
            }
            double m = 0.0;
            for (std::size_t k = 0; k < sr.u.nodes.size(); ++k)
                if (sr.u.nodes[k] >= 0.0)
                    m = std::max(m, std::abs(sr.u.values[k] - y.values[k]));
            double dm = m - rho;
            if (std::abs(dm) < opt.scan_tol || hi - lo < 1e-13 * std::max(1.0, hi)) {
                accepted = sr;
                accepted_lambda = mid;
                ok = true;
                break;
            }
            if (dlo * dm <= 0.0) { hi = mid; u_hi = sr.u; }
            else { lo = mid; dlo = dm; u_lo = sr.u; }
        }
        if (ok)
            out.pairs.push_back(detail::make_pair_from_solve(spec, accepted,
                                                             accepted_lambda, rho,
                                                             opt.cert_tol));
    }

    if (out.pairs.empty()) {
        auto ep = detail::normalized_refine(spec, kernel, rho, y, opt);
        if (ep) {
            if (opt.lambda_bar > 0.0 && !(ep->lambda_star < opt.lambda_bar)) {
                out.diagnostic = "refined eigenvalue exceeds the lambda ceiling";
            } else {
                out.diagnostic = "no bracket on the lambda grid; eigenpair located by "
                                 "amplitude-normalized refinement";
                out.pairs.push_back(*ep);
            }
        }
    }

    if (out.pairs.empty()) {
        out.resolution_failure = true;
        if (out.diagnostic.empty())
            out.diagnostic = "no sign change of n(lambda)-rho on the grid and the "
                             "normalized refinement did not converge";
    }
    return out;
}

} // namespace hameig
