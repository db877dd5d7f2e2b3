#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hameig/green_kernel.hpp"
#include "hameig/hypothesis_checks.hpp"
#include "hameig/problem.hpp"
#include "hameig/quadrature.hpp"

namespace hameig {

struct ValueInterval {
    double lo = 0.0;
    double hi = 0.0;

    bool valid() const { return lo <= hi; }
    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

namespace detail {

// axis sample set: uniform lattice across the eps-box plus one-sided limits
// around every curve value falling inside
inline std::vector<double> envelope_axis(double center, double eps,
                                         const std::vector<DiscontinuityCurve>& curves,
                                         double t, int n_samples) {
    double lo = std::max(0.0, center - eps);
    double hi = center + eps;
    std::vector<double> pts;
    pts.reserve(std::size_t(n_samples) + 8);
    for (int i = 0; i < n_samples; ++i)
        pts.push_back(lo + (hi - lo) * i / (n_samples - 1));
    pts.push_back(center);
    const double off = 1e-9; // one-sided limit surrogate
    for (const auto& c : curves) {
        if (t < c.a || t > c.b) continue;
        double g = c.value(t);
        if (g >= lo - off && g <= hi + off) {
            pts.push_back(std::clamp(g - off, lo, hi));
            pts.push_back(std::clamp(g, lo, hi));
            pts.push_back(std::clamp(g + off, lo, hi));
        }
    }
    return pts;
}

} // namespace detail

// pointwise hull of f over the eps-box around (u,v); surrogate for the
// closed-convex envelope evaluated at one point
inline ValueInterval f_envelope(const ProblemSpec& spec, double t, double u, double v,
                                double eps, int n_samples = 33) {
    if (!(eps > 0.0)) throw std::domain_error("f_envelope: eps > 0 required");
    if (n_samples < 2) throw std::domain_error("f_envelope: n_samples >= 2 required");
    auto us = detail::envelope_axis(u, eps, spec.gamma_curves, t, n_samples);
    auto vs = detail::envelope_axis(v, eps, spec.Gamma_curves, t, n_samples);
    ValueInterval out;
    bool first = true;
    for (double uu : us)
        for (double vv : vs) {
            double fv = spec.f(t, uu, vv);
            if (first) { out.lo = out.hi = fv; first = false; }
            else {
                out.lo = std::min(out.lo, fv);
                out.hi = std::max(out.hi, fv);
            }
        }
    return out;
}

// certified lower bound for boundary envelope norms; shares the (H3) integral
// with compute_delta_bar bit-for-bit
inline double boundary_norm_lower_bound(const ProblemSpec& spec, const BoundData& bounds,
                                        const GreenKernel& kernel,
                                        const QuadConfig& quad_cfg) {
    (void)spec;
    return compute_delta_bar(bounds, kernel, quad_cfg);
}

// element of the interval closest to the residual-zeroing value
inline double sliding_selection(const ValueInterval& interval, double target) {
    if (!interval.valid())
        throw std::domain_error("sliding_selection: invalid interval");
    return std::clamp(target, interval.lo, interval.hi);
}

} // namespace hameig
