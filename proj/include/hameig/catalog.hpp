#pragma once

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hameig/problem.hpp"
#include "hameig/quadrature.hpp"
#include "hameig/rational_enum.hpp"

namespace hameig {

inline double phi_eval(double x, int N) {
    if (N < 1) throw std::domain_error("phi_eval: N >= 1 required");
    return StepAccumulator(N)(x);
}

struct CatalogProblem {
    ProblemSpec spec;
    BoundData bounds;
    QuadConfig quad;
    std::string description;
    std::string majorant_display;
    std::string minorant_display;
};

inline std::vector<std::string> catalog_names() {
    return {"example-delay-phi", "eigendir", "gh-split", "const-f"};
}

namespace detail {

inline std::string fmt_num(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// -u'' = lambda ((2 - phi(u - t^2))/sqrt(t) + phi(u(t - 1/2) - t^2) u^3),
// u(t) = sqrt(1 + 2t) on [-1/2, 0], u(1) = 0; phi sums 2^{-n} over q_n < x
inline CatalogProblem make_example_delay_phi(double rho, int N) {
    auto phi = std::make_shared<StepAccumulator>(N);
    CatalogProblem cp;
    cp.spec.name = "example-delay-phi";
    cp.spec.f = [phi](double t, double u, double v) {
        return (2.0 - (*phi)(u - t * t)) / std::sqrt(t) +
               (*phi)(v - t * t) * u * u * u;
    };
    cp.spec.sigma = [](double t) { return t - 0.5; };
    cp.spec.sigma_slope = 1;
    cp.spec.omega = [](double t) { return std::sqrt(1.0 + 2.0 * t); };
    cp.spec.r = 0.5;

    // jump locus of phi(u - t^2): u = t^2 + q_n, kept where it meets u >= 0
    const std::vector<double>& qs = phi->jump_points();
    std::vector<double> q_sorted = qs; // jump_points already sorted
    int idx = 0;
    for (double q : q_sorted) {
        ++idx;
        if (q <= -1.0) continue;
        DiscontinuityCurve c;
        c.a = std::sqrt(std::max(0.0, -q));
        c.b = 1.0;
        if (!(c.a < c.b)) continue;
        double qv = q;
        c.value = [qv](double t) { return t * t + qv; };
        c.second_derivative = [](double) { return 2.0; };
        c.label = "t^2 + " + fmt_num(q);
        cp.spec.gamma_curves.push_back(c);
        cp.spec.Gamma_curves.push_back(c);
        (void)idx;
    }

    double cube = (rho + 1.0) * (rho + 1.0) * (rho + 1.0);
    cp.bounds.rho = rho;
    cp.bounds.M_rho = [cube](double t) { return 2.0 / std::sqrt(t) + cube; };
    cp.bounds.delta_rho = [](double t) { return 1.0 / std::sqrt(t); };
    cp.quad.singularities.push_back(EndpointSingularity{0.0, -0.5});
    cp.majorant_display = "2/sqrt(t) + " + fmt_num(cube);
    cp.minorant_display = "1/sqrt(t)";
    cp.description =
        "delay BVP -u'' = lambda((2 - phi(u - t^2))/sqrt(t) + phi(u(t-1/2) - t^2) u^3), "
        "u = sqrt(1+2t) on [-1/2,0], u(1) = 0; phi(x) = sum 2^{-n} over enumerated "
        "rationals q_n < x, truncated at N=" + std::to_string(N) +
        " (Calkin-Wilf order, signs interleaved); results depend on this enumeration";
    return cp;
}

inline CatalogProblem make_const_f(double rho) {
    CatalogProblem cp;
    cp.spec.name = "const-f";
    cp.spec.f = [](double, double, double) { return 1.0; };
    cp.spec.sigma = [](double t) { return t; };
    cp.spec.sigma_slope = 1;
    cp.spec.omega = [](double) { return 0.0; };
    cp.spec.r = 0.0;
    cp.bounds.rho = rho;
    cp.bounds.M_rho = [](double) { return 1.0; };
    cp.bounds.delta_rho = [](double) { return 1.0; };
    cp.majorant_display = "1";
    cp.minorant_display = "1";
    cp.description = "-u'' = lambda, u(0) = u(1) = 0; closed form "
                     "u(t) = lambda t(1-t)/2, norm response n(lambda) = lambda/8";
    return cp;
}

inline CatalogProblem make_eigendir(double rho) {
    CatalogProblem cp = make_const_f(rho);
    cp.spec.name = "eigendir";
    cp.description = "u'' = lambda, u(0) = u(1) = 0, encoded through the kernel form "
                     "for w = -u, so reported values are the nonnegative branch; "
                     "numerically identical to const-f up to that sign convention";
    return cp;
}

// f = g + h with g(t,u,v) = 1 + v/2 continuous and h(u) a unit jump across u = 1
inline CatalogProblem make_gh_split(double rho) {
    CatalogProblem cp;
    cp.spec.name = "gh-split";
    cp.spec.f = [](double, double u, double v) {
        return 1.0 + 0.5 * v + (u > 1.0 ? 1.0 : 0.0);
    };
    cp.spec.sigma = [](double t) { return t; };
    cp.spec.sigma_slope = 1;
    cp.spec.omega = [](double) { return 0.0; };
    cp.spec.r = 0.0;
    DiscontinuityCurve c;
    c.a = 0.0;
    c.b = 1.0;
    c.value = [](double) { return 1.0; };
    c.second_derivative = [](double) { return 0.0; };
    c.label = "u = 1";
    cp.spec.gamma_curves.push_back(c);
    double m = 2.0 + 0.5 * rho;
    cp.bounds.rho = rho;
    cp.bounds.M_rho = [m](double) { return m; };
    cp.bounds.delta_rho = [](double) { return 0.5; };
    cp.majorant_display = "2 + rho/2 = " + detail::fmt_num(m);
    cp.minorant_display = "1/2";
    cp.description = "-u'' = lambda(1 + u/2 + step(u - 1)), u(0) = u(1) = 0; "
                     "continuous part plus a unit jump across the constant curve u = 1";
    return cp;
}

} // namespace detail

inline CatalogProblem make_catalog_problem(const std::string& name, double rho,
                                           int N = 40) {
    if (!(rho > 0.0)) throw std::domain_error("make_catalog_problem: rho > 0 required");
    if (name == "example-delay-phi") return detail::make_example_delay_phi(rho, N);
    if (name == "const-f") return detail::make_const_f(rho);
    if (name == "eigendir") return detail::make_eigendir(rho);
    if (name == "gh-split") return detail::make_gh_split(rho);
    throw std::domain_error("make_catalog_problem: unknown catalog name '" + name + "'");
}

} // namespace hameig
