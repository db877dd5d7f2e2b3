#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hameig/green_kernel.hpp"

namespace hameig {

// curve along which f may jump; psi and epsilon feed the transversality
// inequalities, second_derivative feeds the convexity shortcut
struct DiscontinuityCurve {
    double a = 0.0;
    double b = 1.0;
    std::function<double(double)> value;
    std::function<double(double)> second_derivative;
    double epsilon = 1e-6;
    std::function<double(double)> psi; // empty -> checker picks a default
    std::string label;

    void validate() const {
        if (!(a >= 0.0 && a < b && b <= 1.0))
            throw std::domain_error("DiscontinuityCurve: need 0 <= a < b <= 1");
        if (!(epsilon > 0.0))
            throw std::domain_error("DiscontinuityCurve: epsilon > 0 required");
        if (!value) throw std::domain_error("DiscontinuityCurve: value evaluator missing");
    }
};

struct ProblemSpec {
    std::function<double(double, double, double)> f; // f(t,u,v), t in [0,1], u,v >= 0
    std::function<double(double)> sigma;             // [0,1] -> [-r,1]
    std::function<double(double)> omega;             // [-r,0] -> [0,inf)
    double r = 0.0;
    std::optional<int> sigma_slope;                  // +1 or -1 when constant
    std::vector<double> sigma_kinks;                 // breakpoints of a piecewise sigma
    std::vector<DiscontinuityCurve> gamma_curves;    // jumps in the u argument
    std::vector<DiscontinuityCurve> Gamma_curves;    // jumps in the v argument
    std::string name;

    void validate() const {
        if (!f) throw std::domain_error("ProblemSpec: f missing");
        if (!sigma) throw std::domain_error("ProblemSpec: sigma missing");
        if (!(r >= 0.0)) throw std::domain_error("ProblemSpec: r >= 0 required");
        if (r > 0.0 && !omega) throw std::domain_error("ProblemSpec: omega missing");
        if (sigma_slope && *sigma_slope != 1 && *sigma_slope != -1)
            throw std::domain_error("ProblemSpec: sigma_slope must be +1 or -1");
        for (const auto& c : gamma_curves) c.validate();
        for (const auto& c : Gamma_curves) c.validate();
    }

    VertexFunction vertex() const {
        return VertexFunction(omega ? omega : [](double) { return 0.0; }, r);
    }

    GreenKernel kernel() const { return GreenKernel(r); }
};

struct BoundData {
    std::function<double(double)> M_rho;     // integrable majorant on [0,1]
    std::function<double(double)> delta_rho; // minorant on [1/4,3/4]
    double rho = 1.0;

    void validate() const {
        if (!(rho > 0.0)) throw std::domain_error("BoundData: rho > 0 required");
    }
};

enum class CheckStatus { pass, fail, not_checkable };

struct CheckResult {
    CheckStatus status = CheckStatus::not_checkable;
    std::string what;
    double witness_t = 0.0, witness_u = 0.0, witness_v = 0.0;
    double margin = 0.0;   // smallest slack seen; negative on fail
    std::string mode;      // which inequality/shortcut decided the result

    bool passed() const { return status == CheckStatus::pass; }
};

struct HypothesisReport {
    double delta_bar = 0.0;
    double lambda_bar_threshold = 0.0; // rho/delta_bar
    double lambda_bar = 0.0;           // the lambda ceiling actually used
    CheckResult majorant;
    CheckResult minorant;
    std::vector<CheckResult> curve_checks;       // one per gamma curve
    std::vector<CheckResult> condition_D_checks; // one per Gamma curve
    std::string notes; // sampling caveats, assumed measurability

    bool all_pass() const {
        if (!(delta_bar > 0.0)) return false;
        if (!majorant.passed() || !minorant.passed()) return false;
        for (const auto& c : curve_checks)
            if (!c.passed()) return false;
        for (const auto& c : condition_D_checks)
            if (!c.passed()) return false;
        return true;
    }
};

} // namespace hameig
