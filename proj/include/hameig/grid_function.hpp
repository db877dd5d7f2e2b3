#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hameig {

// piecewise-linear function on [-r,1]; node 0 always present so the history
// part [-r,0] and the solution part [0,1] can be addressed separately
struct GridFunction {
    std::vector<double> nodes;
    std::vector<double> values;

    GridFunction() = default;

    GridFunction(std::vector<double> ns, std::vector<double> vs)
        : nodes(std::move(ns)), values(std::move(vs)) {
        validate();
    }

    void validate() const {
        if (nodes.size() != values.size() || nodes.size() < 2)
            throw std::domain_error("GridFunction: need matching nodes/values, size >= 2");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1]))
                throw std::domain_error("GridFunction: nodes must be strictly increasing");
        if (nodes.back() != 1.0)
            throw std::domain_error("GridFunction: last node must be 1");
        if (!std::binary_search(nodes.begin(), nodes.end(), 0.0))
            throw std::domain_error("GridFunction: node 0 must be present");
    }

    double eval(double t) const {
        if (t <= nodes.front()) return values.front();
        if (t >= nodes.back()) return values.back();
        auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
        std::size_t i = std::size_t(it - nodes.begin());
        double x0 = nodes[i - 1], x1 = nodes[i];
        double w = (t - x0) / (x1 - x0);
        return values[i - 1] * (1.0 - w) + values[i] * w;
    }

    std::size_t first_nonneg_index() const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), 0.0);
        return std::size_t(it - nodes.begin());
    }

    double sup_on_unit() const {
        double m = 0.0;
        for (std::size_t i = first_nonneg_index(); i < nodes.size(); ++i)
            m = std::max(m, std::abs(values[i]));
        return m;
    }

    // uniform nodes: n01 points on [0,1]; history nodes at matching spacing,
    // ceil(r/h) intervals so -r and 0 are both nodes
    static std::vector<double> uniform_nodes(double r, int n01) {
        if (n01 < 2) throw std::domain_error("uniform_nodes: n01 >= 2 required");
        if (!(r >= 0.0)) throw std::domain_error("uniform_nodes: r >= 0 required");
        std::vector<double> ns;
        double h = 1.0 / (n01 - 1);
        if (r > 0.0) {
            int m = int(std::ceil(r / h - 1e-12));
            ns.reserve(std::size_t(m) + std::size_t(n01));
            for (int i = 0; i < m; ++i) ns.push_back(-r + r * double(i) / m);
        }
        for (int j = 0; j < n01; ++j) ns.push_back(double(j) / (n01 - 1));
        ns.back() = 1.0;
        return ns;
    }

    static GridFunction sample(const std::vector<double>& ns,
                               const std::function<double(double)>& fn) {
        std::vector<double> vs(ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i) vs[i] = fn(ns[i]);
        return GridFunction(ns, vs);
    }
};

} // namespace hameig
