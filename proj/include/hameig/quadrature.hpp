#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hameig/errors.hpp"

namespace hameig {

struct EndpointSingularity {
    double endpoint = 0.0;
    double exponent = -0.5; // only s^(-1/2) handled; removed by s = e + tau^2
};

struct QuadConfig {
    enum class Rule { simpson, gauss7 };

    int panels = 4;
    Rule rule = Rule::simpson;
    std::vector<EndpointSingularity> singularities;
    double tol = 1e-10;

    void validate() const {
        if (panels < 4) throw std::domain_error("QuadConfig: panels >= 4 required");
        if (!(tol > 0.0)) throw std::domain_error("QuadConfig: tol > 0 required");
        for (const auto& s : singularities)
            if (s.exponent != -0.5)
                throw std::domain_error("QuadConfig: only exponent -1/2 singularities supported");
    }
};

struct IntegrateResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

namespace detail {

inline constexpr std::array<double, 7> kGauss7X = {
    0.0,
    -0.4058451513773972, 0.4058451513773972,
    -0.7415311855993945, 0.7415311855993945,
    -0.9491079123427585, 0.9491079123427585};
inline constexpr std::array<double, 7> kGauss7W = {
    0.4179591836734694,
    0.3818300505051189, 0.3818300505051189,
    0.2797053914892766, 0.2797053914892766,
    0.1294849661688697, 0.1294849661688697};

// abscissa/weight pairs of the composite rule on [p,q]
inline void rule_points(double p, double q, const QuadConfig& cfg, int panels,
                        std::vector<double>& xs, std::vector<double>& ws) {
    double h = (q - p) / panels;
    if (cfg.rule == QuadConfig::Rule::simpson) {
        for (int i = 0; i < panels; ++i) {
            double a = p + i * h;
            xs.push_back(a);
            ws.push_back(h / 6.0);
            xs.push_back(a + 0.5 * h);
            ws.push_back(4.0 * h / 6.0);
            xs.push_back(a + h);
            ws.push_back(h / 6.0);
        }
    } else {
        for (int i = 0; i < panels; ++i) {
            double c = p + (i + 0.5) * h;
            for (int j = 0; j < 7; ++j) {
                xs.push_back(c + 0.5 * h * kGauss7X[j]);
                ws.push_back(0.5 * h * kGauss7W[j]);
            }
        }
    }
}

// sample points for one segment. Segment endpoints are breakpoints, and
// breakpoints are where the integrand may jump (curve crossings) or blow up
// (flagged singularity), so every sample is pulled strictly inside the open
// segment; 2e-11 clears the 1e-12 crossing/merge noise while perturbing the
// weighted sums by O(w * nudge). A segment starting at the flagged s^(-1/2)
// endpoint e is mapped through s = e + tau^2, which makes the integrand smooth.
inline void segment_points(double p, double q, const QuadConfig& cfg, int panels,
                           double sing_at, std::vector<double>& xs,
                           std::vector<double>& ws) {
    bool substitute = std::isfinite(sing_at) && std::abs(p - sing_at) <= 1e-15;
    if (!substitute) {
        double nu = std::min(0.25 * (q - p), 2e-11);
        std::size_t base = xs.size();
        rule_points(p, q, cfg, panels, xs, ws);
        for (std::size_t i = base; i < xs.size(); ++i)
            xs[i] = std::clamp(xs[i], p + nu, q - nu);
        return;
    }
    double e = sing_at;
    double t0 = std::sqrt(std::max(0.0, p - e)), t1 = std::sqrt(q - e);
    double nu = std::min(0.25 * (t1 - t0), 2e-11);
    std::vector<double> txs, tws;
    rule_points(t0, t1, cfg, panels, txs, tws);
    for (std::size_t i = 0; i < txs.size(); ++i) {
        double tau = std::clamp(txs[i], t0 + nu, t1 - nu);
        xs.push_back(e + tau * tau);
        ws.push_back(tws[i] * 2.0 * tau);
    }
}

inline std::vector<double> merge_breakpoints(double a, double b,
                                             const std::vector<double>& bps) {
    std::vector<double> pts;
    pts.push_back(a);
    for (double x : bps)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    out.push_back(pts.front());
    for (double x : pts)
        if (x - out.back() > 1e-12) out.push_back(x);
    out.back() = b;
    return out;
}

} // namespace detail

// composite rule split at breakpoints; error estimate by panel halving
inline IntegrateResult integrate(const std::function<double(double)>& g, double a,
                                 double b, const std::vector<double>& breakpoints,
                                 const QuadConfig& cfg) {
    cfg.validate();
    if (!(a < b)) throw std::domain_error("integrate: need a < b");
    auto segs = detail::merge_breakpoints(a, b, breakpoints);

    double sing_at = std::numeric_limits<double>::quiet_NaN();
    for (const auto& sing : cfg.singularities)
        if (sing.endpoint <= a + 1e-15) sing_at = sing.endpoint;

    auto pass = [&](int panels) {
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
            double p = segs[i], q = segs[i + 1];
            std::vector<double> xs, ws;
            detail::segment_points(p, q, cfg, panels, sing_at, xs, ws);
            for (std::size_t j = 0; j < xs.size(); ++j) {
                double v = g(xs[j]);
                if (!std::isfinite(v))
                    throw integration_error("integrate: non-finite integrand", xs[j]);
                total += ws[j] * v;
            }
        }
        return total;
    };

    double coarse = pass(cfg.panels);
    double fine = pass(cfg.panels * 2);
    return {fine, std::abs(fine - coarse)};
}

// repeats with doubled panels until the halving estimate meets cfg.tol
inline IntegrateResult integrate_to_tol(const std::function<double(double)>& g,
                                        double a, double b,
                                        const std::vector<double>& breakpoints,
                                        QuadConfig cfg) {
    IntegrateResult res = integrate(g, a, b, breakpoints, cfg);
    while (res.error_estimate > cfg.tol * std::max(1.0, std::abs(res.value)) &&
           cfg.panels < 4096) {
        cfg.panels *= 2;
        res = integrate(g, a, b, breakpoints, cfg);
    }
    return res;
}

} // namespace hameig
