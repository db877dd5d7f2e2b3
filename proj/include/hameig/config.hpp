#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hameig/catalog.hpp"
#include "hameig/expr.hpp"
#include "hameig/problem.hpp"

namespace hameig {

// Flat key = value text. '#' starts a comment, blank lines ignored, keys may
// contain dots, duplicates rejected. A "schema = 1" line is mandatory.
class ConfigMap {
public:
    static ConfigMap parse(std::istream& in) {
        ConfigMap cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string s = trim(line);
            if (s.empty()) continue;
            std::size_t eq = s.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": expected key = value");
            std::string key = trim(s.substr(0, eq));
            std::string val = trim(s.substr(eq + 1));
            if (key.empty())
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": empty key");
            if (!cfg.kv_.emplace(key, val).second)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": duplicate key '" + key + "'");
        }
        if (cfg.get_int("schema", -1) != 1)
            throw std::invalid_argument("config: missing or unsupported schema "
                                        "(expected schema = 1)");
        return cfg;
    }

    static ConfigMap parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
        return parse(in);
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get(const std::string& key, const std::string& fallback = {}) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }

    std::string require(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end())
            throw std::invalid_argument("config: missing required key '" + key + "'");
        return it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : to_double(key, it->second);
    }

    double require_double(const std::string& key) const {
        return to_double(key, require(key));
    }

    int get_int(const std::string& key, int fallback) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        double d = to_double(key, it->second);
        int i = int(d);
        if (double(i) != d)
            throw std::invalid_argument("config: key '" + key + "' must be an integer");
        return i;
    }

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;

    static std::string trim(const std::string& s) {
        std::size_t b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        std::size_t e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static double to_double(const std::string& key, const std::string& v) {
        char* end = nullptr;
        double d = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0')
            throw std::invalid_argument("config: key '" + key +
                                        "' is not a number: '" + v + "'");
        return d;
    }
};

namespace detail {

inline std::function<double(double)> expr_fn1(const Expr& e) {
    return [e](double t) { return e.eval({t}); };
}

} // namespace detail

// Problem config keys (rho is bound as a constant in M / delta expressions):
//   schema = 1                    name = my-problem (optional)
//   f = <expr in t,u,v>           sigma = <expr in t>
//   sigma_slope = 1 | -1          omega = <expr in t>   (required when r > 0)
//   r = <number>                  M = <expr in t,rho>   delta = <expr in t,rho>
//   sing0 = -0.5                  (optional sqrt singularity of f at s = 0)
//   curveK.family = gamma | Gamma | both   (K = 1,2,...)
//   curveK.value = <expr in t>    curveK.d2 = <expr in t> (optional)
//   curveK.a / curveK.b / curveK.eps = <numbers>
inline CatalogProblem problem_from_config(const ConfigMap& cfg, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("problem_from_config: rho > 0 required");
    CatalogProblem cp;
    cp.spec.name = cfg.get("name", "config-problem");

    Expr f = Expr::parse(cfg.require("f"), {"t", "u", "v"});
    cp.spec.f = [f](double t, double u, double v) { return f.eval({t, u, v}); };

    Expr sig = Expr::parse(cfg.get("sigma", "t"), {"t"});
    cp.spec.sigma = detail::expr_fn1(sig);
    if (cfg.has("sigma_slope")) {
        int s = cfg.get_int("sigma_slope", 1);
        cp.spec.sigma_slope = s;
    }

    cp.spec.r = cfg.get_double("r", 0.0);
    if (cfg.has("omega")) {
        Expr om = Expr::parse(cfg.require("omega"), {"t"});
        cp.spec.omega = detail::expr_fn1(om);
    }

    Expr M = Expr::parse(cfg.require("M"), {"t", "rho"});
    Expr delta = Expr::parse(cfg.require("delta"), {"t", "rho"});
    cp.bounds.rho = rho;
    cp.bounds.M_rho = [M, rho](double t) { return M.eval({t, rho}); };
    cp.bounds.delta_rho = [delta, rho](double t) { return delta.eval({t, rho}); };
    cp.majorant_display = M.source();
    cp.minorant_display = delta.source();

    for (int k = 1;; ++k) {
        std::string p = "curve" + std::to_string(k) + ".";
        if (!cfg.has(p + "value")) break;
        DiscontinuityCurve c;
        Expr val = Expr::parse(cfg.require(p + "value"), {"t"});
        c.value = detail::expr_fn1(val);
        if (cfg.has(p + "d2")) {
            Expr d2 = Expr::parse(cfg.require(p + "d2"), {"t"});
            c.second_derivative = detail::expr_fn1(d2);
        }
        c.a = cfg.get_double(p + "a", 0.0);
        c.b = cfg.get_double(p + "b", 1.0);
        c.epsilon = cfg.get_double(p + "eps", 1e-6);
        c.label = cfg.get(p + "label", "curve" + std::to_string(k));
        std::string fam = cfg.get(p + "family", "both");
        if (fam == "gamma" || fam == "both") cp.spec.gamma_curves.push_back(c);
        if (fam == "Gamma" || fam == "both") cp.spec.Gamma_curves.push_back(c);
        if (fam != "gamma" && fam != "Gamma" && fam != "both")
            throw std::invalid_argument("config: " + p +
                                        "family must be gamma, Gamma, or both");
    }

    if (cfg.has("sing0")) {
        double expo = cfg.require_double("sing0");
        cp.quad.singularities.push_back(EndpointSingularity{0.0, expo});
    }
    cp.quad.validate();
    cp.spec.validate();
    cp.bounds.validate();
    cp.description = "config-defined problem '" + cp.spec.name + "'";
    return cp;
}

} // namespace hameig
