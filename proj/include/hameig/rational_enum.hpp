#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hameig {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return double(num) / double(den); }
};

// Calkin-Wilf walk c1 = 1, c_{k+1} = 1 / (2 floor(c_k) - c_k + 1); visits every
// positive rational exactly once
inline std::vector<Rational> calkin_wilf(int count) {
    if (count < 0) throw std::domain_error("calkin_wilf: count >= 0 required");
    std::vector<Rational> out;
    out.reserve(std::size_t(count));
    Rational c{1, 1};
    for (int k = 0; k < count; ++k) {
        out.push_back(c);
        // floor(p/q) with p,q > 0
        std::int64_t fl = c.num / c.den;
        // 1 / ((2 fl + 1) - p/q) = q / (q (2 fl + 1) - p)
        std::int64_t nden = c.den * (2 * fl + 1) - c.num;
        c = Rational{c.den, nden};
    }
    return out;
}

// signed interleaving q1 = 0, q_{2k} = c_k, q_{2k+1} = -c_k; enumerates all of
// Q when continued forever
inline std::vector<double> signed_rationals(int count) {
    if (count < 0) throw std::domain_error("signed_rationals: count >= 0 required");
    std::vector<double> out;
    out.reserve(std::size_t(count));
    if (count == 0) return out;
    out.push_back(0.0);
    std::vector<Rational> cw = calkin_wilf(count / 2 + 1);
    for (int n = 2; n <= count; ++n) {
        const Rational& c = cw[std::size_t(n / 2 - 1)];
        out.push_back(n % 2 == 0 ? c.value() : -c.value());
    }
    return out;
}

// phi(x) = sum over enumerated q_n < x of 2^{-n}; bounded, strictly increasing
// across every enumerated rational, left-continuous there
class StepAccumulator {
public:
    explicit StepAccumulator(int count) {
        std::vector<double> q = signed_rationals(count);
        std::vector<std::pair<double, double>> qw; // (q_n, 2^{-n})
        qw.reserve(q.size());
        double w = 1.0;
        for (std::size_t n = 0; n < q.size(); ++n) {
            w *= 0.5;
            qw.emplace_back(q[n], w);
        }
        std::sort(qw.begin(), qw.end());
        qs_.reserve(qw.size());
        prefix_.reserve(qw.size() + 1);
        prefix_.push_back(0.0);
        for (const auto& [qq, ww] : qw) {
            qs_.push_back(qq);
            prefix_.push_back(prefix_.back() + ww);
        }
    }

    double operator()(double x) const {
        // strict q_n < x: lower_bound gives the count of q_n < x
        auto it = std::lower_bound(qs_.begin(), qs_.end(), x);
        return prefix_[std::size_t(it - qs_.begin())];
    }

    const std::vector<double>& jump_points() const { return qs_; }

private:
    std::vector<double> qs_;
    std::vector<double> prefix_;
};

} // namespace hameig
