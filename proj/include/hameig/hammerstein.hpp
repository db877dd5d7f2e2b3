#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hameig/errors.hpp"
#include "hameig/green_kernel.hpp"
#include "hameig/grid_function.hpp"
#include "hameig/problem.hpp"
#include "hameig/quadrature.hpp"

namespace hameig {

// t-independent sample plan for integrating g(s) ds over [0,1]; weights carry
// rule coefficients and, on a flagged first segment, the tau^2 substitution
struct QuadPlan {
    std::vector<double> s;
    std::vector<double> w;
    std::vector<double> breakpoints;
};

namespace detail {

inline double curve_arg(const GridFunction& u, const ProblemSpec& spec, bool deviated,
                        double t) {
    if (!deviated) return u.eval(t);
    return u.eval(spec.sigma(t));
}

// roots of u(arg(t)) - curve(t) found by sign change between samples and
// refined by bisection; the PL representation makes this reliable
inline void curve_crossings(const GridFunction& u, const ProblemSpec& spec,
                            const DiscontinuityCurve& c, bool deviated,
                            std::vector<double>& out) {
    std::vector<double> pts;
    pts.push_back(c.a);
    for (double x : u.nodes)
        if (x > c.a && x < c.b && x >= 0.0) pts.push_back(x);
    pts.push_back(c.b);

    auto d = [&](double t) { return curve_arg(u, spec, deviated, t) - c.value(t); };

    double dprev = d(pts[0]);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double dnext = d(pts[i + 1]);
        if (std::isfinite(dprev) && std::isfinite(dnext) && dprev * dnext < 0.0) {
            double lo = pts[i], hi = pts[i + 1], dlo = dprev;
            for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
                double mid = 0.5 * (lo + hi);
                double dm = d(mid);
                if (!std::isfinite(dm)) break; // refinement failed, keep the node
                if (dlo * dm <= 0.0) hi = mid;
                else { lo = mid; dlo = dm; }
            }
            out.push_back(0.5 * (lo + hi));
        }
        dprev = dnext;
    }
}

} // namespace detail

// breakpoints: u's nonnegative nodes, sigma kinks, curve interval endpoints,
// and all detected crossings of u against the discontinuity curves
inline QuadPlan build_quad_plan(const GridFunction& u, const ProblemSpec& spec,
                                const QuadConfig& cfg) {
    cfg.validate();
    std::vector<double> bps;
    for (double x : u.nodes)
        if (x >= 0.0) bps.push_back(x);
    for (double x : spec.sigma_kinks)
        if (x > 0.0 && x < 1.0) bps.push_back(x);
    for (const auto& c : spec.gamma_curves) {
        if (c.a > 0.0 && c.a < 1.0) bps.push_back(c.a);
        if (c.b > 0.0 && c.b < 1.0) bps.push_back(c.b);
        detail::curve_crossings(u, spec, c, false, bps);
    }
    for (const auto& c : spec.Gamma_curves) {
        if (c.a > 0.0 && c.a < 1.0) bps.push_back(c.a);
        if (c.b > 0.0 && c.b < 1.0) bps.push_back(c.b);
        detail::curve_crossings(u, spec, c, true, bps);
    }

    QuadPlan plan;
    plan.breakpoints = detail::merge_breakpoints(0.0, 1.0, bps);
    double sing_at = std::numeric_limits<double>::quiet_NaN();
    for (const auto& sing : cfg.singularities)
        if (sing.endpoint <= 1e-15) sing_at = sing.endpoint;
    for (std::size_t i = 0; i + 1 < plan.breakpoints.size(); ++i) {
        double p = plan.breakpoints[i], q = plan.breakpoints[i + 1];
        detail::segment_points(p, q, cfg, cfg.panels, sing_at, plan.s, plan.w);
    }
    return plan;
}

// f(s, u(s), u(sigma(s))) at the plan points
inline std::vector<double> integrand_values(const GridFunction& u,
                                            const ProblemSpec& spec,
                                            const QuadPlan& plan) {
    std::vector<double> fv(plan.s.size());
    for (std::size_t j = 0; j < plan.s.size(); ++j) {
        double s = plan.s[j];
        double v = spec.f(s, u.eval(s), u.eval(spec.sigma(s)));
        if (!std::isfinite(v))
            throw integration_error("hammerstein: non-finite f sample", s);
        fv[j] = v;
    }
    return fv;
}

// Tu on u's nodes given precomputed integrand values; zero on history nodes
inline GridFunction apply_plan(const GridFunction& u, const QuadPlan& plan,
                               const std::vector<double>& fvals) {
    std::vector<double> vals(u.nodes.size(), 0.0);
    std::size_t i0 = u.first_nonneg_index();
    for (std::size_t k = i0; k < u.nodes.size(); ++k) {
        double t = u.nodes[k];
        double acc = 0.0;
        for (std::size_t j = 0; j < plan.s.size(); ++j)
            acc += plan.w[j] * detail::green_unchecked(t, plan.s[j]) * fvals[j];
        vals[k] = acc;
    }
    return GridFunction(u.nodes, std::move(vals));
}

struct HammersteinEval {
    QuadPlan plan;
    std::vector<double> fvals;
    GridFunction Tu;
};

inline HammersteinEval hammerstein_eval(const GridFunction& u, const ProblemSpec& spec,
                                        const GreenKernel& kernel,
                                        const QuadConfig& cfg) {
    (void)kernel; // r handled through u's node layout; kernel vanishes for t<0
    HammersteinEval he;
    he.plan = build_quad_plan(u, spec, cfg);
    he.fvals = integrand_values(u, spec, he.plan);
    he.Tu = apply_plan(u, he.plan, he.fvals);
    return he;
}

inline GridFunction hammerstein_apply(const GridFunction& u, const ProblemSpec& spec,
                                      const GreenKernel& kernel, const QuadConfig& cfg) {
    return hammerstein_eval(u, spec, kernel, cfg).Tu;
}

} // namespace hameig
