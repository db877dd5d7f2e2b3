#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hameig/green_kernel.hpp"
#include "hameig/problem.hpp"
#include "hameig/quadrature.hpp"

namespace hameig {

struct SamplingPlan {
    int nt = 129;          // t samples per interval, midpoint placement
    int nu = 33;           // u samples across the box
    int nv = 33;           // v samples across the box
    int curve_nt = 512;    // t samples per curve interval
    double tol = 1e-9;     // relative slack on the sampled inequalities
    bool tail_probe = true; // extra z sample at 10x the box edge
};

// sup over a dense t-grid of the (H3) integral; 513-point grid fixed so the
// reported value is reproducible
inline double compute_delta_bar(const BoundData& bounds, const GreenKernel& kernel,
                                const QuadConfig& quad_cfg) {
    bounds.validate();
    if (!bounds.delta_rho) return 0.0;
    const int nt = 513;
    double best = 0.0;
    for (int i = 0; i < nt; ++i) {
        double t = 0.25 + 0.5 * double(i) / (nt - 1);
        auto g = [&](double s) { return kernel.eval(t, s) * bounds.delta_rho(s); };
        auto res = integrate_to_tol(g, 0.25, 0.75, {t}, quad_cfg);
        best = std::max(best, res.value);
    }
    return best;
}

inline double lambda_bar_threshold(double rho, double delta_bar) {
    if (!(rho > 0.0)) throw std::domain_error("lambda_bar_threshold: rho > 0 required");
    if (!(delta_bar > 0.0))
        throw std::domain_error("lambda_bar_threshold: delta_bar must be positive");
    return rho / delta_bar;
}

inline double abstract_lambda_threshold(double c, double sup_boundary_norm,
                                        double inf_envelope_norm) {
    if (!(inf_envelope_norm > 0.0))
        throw std::domain_error("abstract_lambda_threshold: zero denominator");
    return c * sup_boundary_norm / inf_envelope_norm;
}

namespace detail {

inline double box_edge(const ProblemSpec& spec, const BoundData& bounds) {
    return bounds.rho + spec.vertex().sup_history();
}

} // namespace detail

// f <= M_rho on [0,1] x box, sampled; t on midpoints so integrable endpoint
// blowups of both sides never collide at t=0 exactly
inline CheckResult check_majorant(const ProblemSpec& spec, const BoundData& bounds,
                                  const SamplingPlan& samples = {}) {
    CheckResult res;
    res.what = "majorant";
    if (!bounds.M_rho) {
        res.status = CheckStatus::not_checkable;
        res.mode = "no majorant supplied";
        return res;
    }
    double edge = detail::box_edge(spec, bounds);
    double worst = std::numeric_limits<double>::infinity();
    res.status = CheckStatus::pass;
    for (int i = 0; i < samples.nt; ++i) {
        double t = (i + 0.5) / samples.nt;
        double M = bounds.M_rho(t);
        for (int a = 0; a < samples.nu; ++a) {
            double u = edge * a / (samples.nu - 1);
            for (int b = 0; b < samples.nv; ++b) {
                double v = edge * b / (samples.nv - 1);
                double fv = spec.f(t, u, v);
                double slack = M * (1.0 + samples.tol) - fv;
                if (slack < worst) {
                    worst = slack;
                    res.witness_t = t; res.witness_u = u; res.witness_v = v;
                }
                if (!(slack >= 0.0)) res.status = CheckStatus::fail;
            }
        }
    }
    res.margin = worst;
    res.mode = "sampled";
    return res;
}

// f >= delta_rho on [1/4,3/4] x box, sampled
inline CheckResult check_minorant(const ProblemSpec& spec, const BoundData& bounds,
                                  const SamplingPlan& samples = {}) {
    CheckResult res;
    res.what = "minorant";
    if (!bounds.delta_rho) {
        res.status = CheckStatus::not_checkable;
        res.mode = "no minorant supplied";
        return res;
    }
    double edge = detail::box_edge(spec, bounds);
    double worst = std::numeric_limits<double>::infinity();
    res.status = CheckStatus::pass;
    for (int i = 0; i < samples.nt; ++i) {
        double t = 0.25 + 0.5 * (i + 0.5) / samples.nt;
        double d = bounds.delta_rho(t);
        for (int a = 0; a < samples.nu; ++a) {
            double u = edge * a / (samples.nu - 1);
            for (int b = 0; b < samples.nv; ++b) {
                double v = edge * b / (samples.nv - 1);
                double fv = spec.f(t, u, v);
                double slack = fv - d * (1.0 - samples.tol);
                if (slack < worst) {
                    worst = slack;
                    res.witness_t = t; res.witness_u = u; res.witness_v = v;
                }
                if (!(slack >= 0.0)) res.status = CheckStatus::fail;
            }
        }
    }
    res.margin = worst;
    res.mode = "sampled";
    return res;
}

namespace detail {

struct TransversalityGrid {
    double t_lo = 0.0, t_hi = 1.0;
    // maps curve-parameter t to the t at which f is evaluated (identity for
    // plain curves, sigma for the deviated family)
    std::function<double(double)> f_time;
};

// strict inequality eq_ad1 / eq_ad2 on a sampled (t,y,z) grid
inline CheckResult transversality_check(const DiscontinuityCurve& curve,
                                        const ProblemSpec& spec, double lambda,
                                        const SamplingPlan& samples,
                                        const BoundData* bounds,
                                        const TransversalityGrid& grid) {
    CheckResult res;
    res.what = curve.label.empty() ? "curve" : curve.label;

    // convexity shortcut: gamma'' > 0 everywhere sampled makes the curve
    // admissible for every lambda with psi = gamma''/2
    if (curve.second_derivative) {
        bool convex = true;
        double mind2 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < samples.curve_nt; ++i) {
            double t = grid.t_lo + (grid.t_hi - grid.t_lo) * (i + 0.5) / samples.curve_nt;
            double d2 = curve.second_derivative(t);
            mind2 = std::min(mind2, d2);
            if (!(d2 > 0.0)) { convex = false; break; }
        }
        if (convex) {
            res.status = CheckStatus::pass;
            res.mode = "convexity-shortcut";
            res.margin = mind2;
            return res;
        }
    }

    double edge = bounds ? box_edge(spec, *bounds) : 1.0;
    auto psi = [&](double t) -> double {
        if (curve.psi) return curve.psi(t);
        if (bounds && bounds->delta_rho) return lambda * bounds->delta_rho(t);
        return 0.0; // no usable psi; strict eq_ad1 then needs -gamma'' < lambda f
    };

    double worst1 = std::numeric_limits<double>::infinity();
    double worst2 = std::numeric_limits<double>::infinity();
    CheckResult w1, w2;
    for (int i = 0; i < samples.curve_nt; ++i) {
        double t = grid.t_lo + (grid.t_hi - grid.t_lo) * (i + 0.5) / samples.curve_nt;
        double ft = grid.f_time ? grid.f_time(t) : t;
        double g2 = curve.second_derivative ? curve.second_derivative(t) : 0.0;
        double ps = psi(t);
        double gv = curve.value(t);
        for (int a = 0; a < 9; ++a) {
            double yv = std::max(0.0, gv - curve.epsilon + 2.0 * curve.epsilon * a / 8.0);
            int zcount = samples.tail_probe ? 10 : 9;
            for (int b = 0; b < zcount; ++b) {
                double zv = b < 9 ? edge * b / 8.0 : 10.0 * edge;
                double fv = spec.f(ft, yv, zv);
                double s1 = lambda * fv - (-g2 + ps); // eq_ad1 wants > 0
                double s2 = (-g2 - ps) - lambda * fv; // eq_ad2 wants > 0
                if (s1 < worst1) {
                    worst1 = s1;
                    w1.witness_t = t; w1.witness_u = yv; w1.witness_v = zv;
                }
                if (s2 < worst2) {
                    worst2 = s2;
                    w2.witness_t = t; w2.witness_u = yv; w2.witness_v = zv;
                }
            }
        }
    }
    if (worst1 > 0.0) {
        res.status = CheckStatus::pass;
        res.mode = "eq_ad1";
        res.margin = worst1;
        return res;
    }
    if (worst2 > 0.0) {
        res.status = CheckStatus::pass;
        res.mode = "eq_ad2";
        res.margin = worst2;
        return res;
    }
    res.status = CheckStatus::fail;
    res.mode = "eq_ad1 and eq_ad2 both violated";
    if (worst1 >= worst2) {
        res.margin = worst1;
        res.witness_t = w1.witness_t; res.witness_u = w1.witness_u; res.witness_v = w1.witness_v;
    } else {
        res.margin = worst2;
        res.witness_t = w2.witness_t; res.witness_u = w2.witness_u; res.witness_v = w2.witness_v;
    }
    return res;
}

} // namespace detail

inline CheckResult check_admissible_curve(const DiscontinuityCurve& curve,
                                          const ProblemSpec& spec, double lambda,
                                          const SamplingPlan& samples = {},
                                          const BoundData* bounds = nullptr) {
    curve.validate();
    if (!(lambda > 0.0))
        throw std::domain_error("check_admissible_curve: lambda > 0 required");
    detail::TransversalityGrid grid;
    grid.t_lo = curve.a;
    grid.t_hi = curve.b;
    return detail::transversality_check(curve, spec, lambda, samples, bounds, grid);
}

// condition (D) per deviated-family curve: (a) no plateau where Gamma_j rides
// the history composition, (b) transversality with f composed with sigma
inline std::vector<CheckResult> check_condition_D(const ProblemSpec& spec, double lambda,
                                                  const SamplingPlan& samples = {},
                                                  const BoundData* bounds = nullptr) {
    std::vector<CheckResult> out;
    if (!spec.sigma_slope) {
        CheckResult res;
        res.what = "condition (D)";
        res.status = CheckStatus::not_checkable;
        res.mode = "sigma lacks constant-slope flag";
        out.push_back(res);
        return out;
    }
    int slope = *spec.sigma_slope;
    double s0 = spec.sigma(0.0);
    auto sigma_inv = [&](double x) { return (x - s0) / slope; };

    for (const auto& c : spec.Gamma_curves) {
        c.validate();
        CheckResult res;
        res.what = c.label.empty() ? "Gamma curve" : c.label;

        // preimage of [-r,0] under the affine sigma, clipped to the curve domain
        double p1 = sigma_inv(-spec.r), p2 = sigma_inv(0.0);
        double lo_a = std::max({std::min(p1, p2), c.a, 0.0});
        double hi_a = std::min({std::max(p1, p2), c.b, 1.0});

        bool part_a = true;
        double min_abs = std::numeric_limits<double>::infinity();
        double plateau_t = 0.0;
        if (lo_a < hi_a) {
            bool prev_zero = false;
            for (int i = 0; i < samples.curve_nt; ++i) {
                double t = lo_a + (hi_a - lo_a) * (i + 0.5) / samples.curve_nt;
                double d = c.value(t) - spec.omega(std::clamp(spec.sigma(t), -spec.r, 0.0));
                min_abs = std::min(min_abs, std::abs(d));
                bool is_zero = std::abs(d) <= 1e-9;
                if (is_zero && prev_zero) { part_a = false; plateau_t = t; break; }
                prev_zero = is_zero;
            }
        }

        // preimage of [0,1]
        double q1 = sigma_inv(0.0), q2 = sigma_inv(1.0);
        double lo_b = std::max({std::min(q1, q2), c.a, 0.0});
        double hi_b = std::min({std::max(q1, q2), c.b, 1.0});

        CheckResult part_b;
        part_b.status = CheckStatus::pass;
        part_b.mode = "vacuous (empty domain)";
        if (lo_b < hi_b) {
            detail::TransversalityGrid grid;
            grid.t_lo = lo_b;
            grid.t_hi = hi_b;
            grid.f_time = [&spec](double t) { return std::clamp(spec.sigma(t), 0.0, 1.0); };
            part_b = detail::transversality_check(c, spec, lambda, samples, bounds, grid);
        }

        if (part_a && part_b.passed()) {
            res.status = CheckStatus::pass;
            std::ostringstream ms;
            ms << "(a) ok";
            if (lo_a >= hi_a) ms << " (vacuous)";
            ms << "; (b) " << part_b.mode;
            res.mode = ms.str();
            res.margin = std::min(lo_a < hi_a ? min_abs : std::numeric_limits<double>::infinity(),
                                  part_b.margin);
        } else if (!part_a) {
            res.status = CheckStatus::fail;
            res.mode = "(a) plateau: curve equals omega(sigma(t)) on consecutive samples";
            res.witness_t = plateau_t;
            res.margin = 0.0;
        } else {
            res.status = CheckStatus::fail;
            res.mode = "(b) " + part_b.mode;
            res.witness_t = part_b.witness_t;
            res.witness_u = part_b.witness_u;
            res.witness_v = part_b.witness_v;
            res.margin = part_b.margin;
        }
        out.push_back(res);
    }
    return out;
}

struct ReportOptions {
    double lambda_bar_factor = 1.25; // lambda ceiling = factor * rho/delta_bar
    int lambda_samples = 16;         // lambda grid for the "each lambda" conditions
    SamplingPlan samples;
};

inline HypothesisReport run_hypothesis_report(const ProblemSpec& spec,
                                              const BoundData& bounds,
                                              const QuadConfig& quad_cfg,
                                              const ReportOptions& opt = {}) {
    spec.validate();
    bounds.validate();
    HypothesisReport rep;
    rep.delta_bar = compute_delta_bar(bounds, spec.kernel(), quad_cfg);
    if (rep.delta_bar > 0.0) {
        rep.lambda_bar_threshold = lambda_bar_threshold(bounds.rho, rep.delta_bar);
        rep.lambda_bar = opt.lambda_bar_factor * rep.lambda_bar_threshold;
    }
    rep.majorant = check_majorant(spec, bounds, opt.samples);
    rep.minorant = check_minorant(spec, bounds, opt.samples);

    bool lambda_sampled = false;
    double lb = rep.lambda_bar > 0.0 ? rep.lambda_bar : 1.0;
    for (const auto& c : spec.gamma_curves) {
        CheckResult agg;
        bool first = true;
        for (int k = 1; k <= opt.lambda_samples; ++k) {
            double lam = lb * k / opt.lambda_samples;
            CheckResult r = check_admissible_curve(c, spec, lam, opt.samples, &bounds);
            if (first || !r.passed() || r.margin < agg.margin) agg = r;
            first = false;
            if (r.mode == "convexity-shortcut") break; // lambda-independent
            lambda_sampled = true;
            if (!r.passed()) break;
        }
        rep.curve_checks.push_back(agg);
    }
    {
        CheckResult agg;
        bool have = false, done = false;
        std::vector<CheckResult> per_curve;
        for (int k = 1; k <= opt.lambda_samples && !done; ++k) {
            double lam = lb * k / opt.lambda_samples;
            auto rs = check_condition_D(spec, lam, opt.samples, &bounds);
            if (per_curve.empty()) per_curve = rs;
            bool all_shortcut = true;
            for (std::size_t i = 0; i < rs.size(); ++i) {
                if (!rs[i].passed() || rs[i].margin < per_curve[i].margin) per_curve[i] = rs[i];
                if (rs[i].mode.find("convexity-shortcut") == std::string::npos &&
                    rs[i].status != CheckStatus::not_checkable)
                    all_shortcut = false;
            }
            have = true;
            if (all_shortcut) done = true;
            else lambda_sampled = true;
        }
        if (have) rep.condition_D_checks = per_curve;
    }

    std::ostringstream notes;
    notes << "measurability (H1) assumed; inequalities verified on finite samples";
    if (lambda_sampled)
        notes << "; lambda-dependent conditions sampled at " << opt.lambda_samples
              << " points in (0,lambda_bar]";
    rep.notes = notes.str();
    return rep;
}

} // namespace hameig
