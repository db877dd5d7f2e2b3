#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hameig {

namespace detail {
inline double green_unchecked(double t, double s) noexcept {
    // branches agree at t == s, no tolerance needed
    return t <= s ? t * (1.0 - s) : (1.0 - t) * s;
}
} // namespace detail

// Dirichlet Green's function of -u'' on [0,1], u(0)=u(1)=0
inline double green_eval(double t, double s) {
    if (!(t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0))
        throw std::domain_error("green_eval: (t,s) outside [0,1]^2");
    return detail::green_unchecked(t, s);
}

// envelope bound: G(t,s) <= phi(s) everywhere, G >= phi/4 for t in [1/4,3/4]
inline double phi_upper(double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::domain_error("phi_upper: s outside [0,1]");
    return s * (1.0 - s);
}

// zero-extension of G to history times t in [-r,0)
struct GreenKernel {
    double r = 0.0;

    explicit GreenKernel(double history_length = 0.0) : r(history_length) {
        if (!(r >= 0.0))
            throw std::domain_error("GreenKernel: r must be >= 0");
    }

    double eval(double t, double s) const {
        if (!(t >= -r - 1e-12 && t <= 1.0 + 1e-12))
            throw std::domain_error("GreenKernel::eval: t outside [-r,1]");
        if (t < 0.0) {
            if (!(s >= 0.0 && s <= 1.0))
                throw std::domain_error("GreenKernel::eval: s outside [0,1]");
            return 0.0;
        }
        return green_eval(std::min(t, 1.0), s);
    }
};

inline double kernel_eval(const GreenKernel& k, double t, double s) {
    return k.eval(t, s);
}

// glues the history omega on [-r,0] to the linear decay (1-t)*omega(0);
// omega(0) read once at construction so eval is continuous at 0
struct VertexFunction {
    std::function<double(double)> omega;
    double omega0 = 0.0;
    double r = 0.0;

    VertexFunction() = default;

    VertexFunction(std::function<double(double)> history, double history_length)
        : omega(std::move(history)), r(history_length) {
        if (!(r >= 0.0))
            throw std::domain_error("VertexFunction: r must be >= 0");
        omega0 = omega ? omega(0.0) : 0.0;
        cache_.reserve(kCacheSize);
        for (int i = 0; i < kCacheSize; ++i) {
            double t = r > 0.0 ? -r + r * double(i) / (kCacheSize - 1) : 0.0;
            cache_.push_back(omega ? omega(std::min(t, 0.0)) : 0.0);
        }
    }

    double eval(double t) const {
        if (!(t >= -r - 1e-12 && t <= 1.0 + 1e-12))
            throw std::domain_error("VertexFunction::eval: t outside [-r,1]");
        if (t <= 0.0)
            return (t == 0.0 || !omega) ? omega0 : omega(std::max(t, -r));
        return (1.0 - std::min(t, 1.0)) * omega0;
    }

    // sup of the history part, dense-sample surrogate for ||omega||_[-r,0]
    double sup_history() const {
        double m = 0.0;
        for (double v : cache_) m = std::max(m, std::abs(v));
        return m;
    }

    const std::vector<double>& history_samples() const { return cache_; }

private:
    static constexpr int kCacheSize = 1024;
    std::vector<double> cache_;
};

inline double vertex_eval(const VertexFunction& y, double t) { return y.eval(t); }

} // namespace hameig
