#include "netshield/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace netshield {

void add_monomial_equality(GpForm& gp, int variable, double value, const std::string& label) {
    if (!(value > 0.0)) {
        throw std::invalid_argument("add_monomial_equality: value must be positive (" + label +
                                    ")");
    }
    GpConstraint up;
    up.lhs.terms.push_back(GpTerm{1.0 / value, {{variable, 1.0}}});
    up.label = label + " (upper)";
    gp.constraints.push_back(std::move(up));
    GpConstraint down;
    down.lhs.terms.push_back(GpTerm{value, {{variable, -1.0}}});
    down.label = label + " (lower)";
    gp.constraints.push_back(std::move(down));
}

namespace {

// Canonical exponent row: indices sorted, repeats summed, zeros dropped.
std::vector<std::pair<int, double>> canonical_powers(const std::vector<std::pair<int, double>>& in,
                                                     int var_count, const std::string& label) {
    std::map<int, double> acc;
    for (const auto& [v, a] : in) {
        if (v < 0 || v >= var_count) {
            throw std::invalid_argument("log_transform: variable index out of range in " + label);
        }
        acc[v] += a;
    }
    std::vector<std::pair<int, double>> out;
    for (const auto& [v, a] : acc) {
        if (a != 0.0) out.emplace_back(v, a);
    }
    return out;
}

}  // namespace

ConvexForm log_transform(const GpForm& gp) {
    ConvexForm cf;
    cf.var_count_ = static_cast<int>(gp.variable_names.size());
    cf.objective_ = gp.objective_variable;
    if (cf.objective_ < 0 || cf.objective_ >= cf.var_count_) {
        throw std::invalid_argument("log_transform: objective variable out of range");
    }
    for (const GpConstraint& c : gp.constraints) {
        if (c.lhs.terms.empty()) {
            throw std::invalid_argument("log_transform: empty constraint " + c.label);
        }
        // Merge terms sharing an exponent row by summing their coefficients.
        std::map<std::vector<std::pair<int, double>>, double> merged;
        for (const GpTerm& t : c.lhs.terms) {
            if (!(t.coef > 0.0) || !std::isfinite(t.coef)) {
                throw std::invalid_argument(
                    "log_transform: non-posynomial term (coefficient must be positive) in " +
                    c.label);
            }
            merged[canonical_powers(t.powers, cf.var_count_, c.label)] += t.coef;
        }
        LseConstraint lse;
        lse.label = c.label;
        for (const auto& [powers, coef] : merged) {
            lse.terms.push_back(LseTerm{std::log(coef), powers});
        }
        cf.constraints_.push_back(std::move(lse));
    }
    return cf;
}

double ConvexForm::value(int k, const std::vector<double>& y) const {
    const LseConstraint& c = constraints_[static_cast<std::size_t>(k)];
    double zmax = -std::numeric_limits<double>::infinity();
    std::vector<double> z(c.terms.size());
    for (std::size_t t = 0; t < c.terms.size(); ++t) {
        double s = c.terms[t].log_coef;
        for (const auto& [v, a] : c.terms[t].exponents) s += a * y[static_cast<std::size_t>(v)];
        z[t] = s;
        zmax = std::max(zmax, s);
    }
    double sum = 0.0;
    for (double s : z) sum += std::exp(s - zmax);
    return zmax + std::log(sum);
}

std::vector<double> ConvexForm::term_weights(int k, const std::vector<double>& y) const {
    const LseConstraint& c = constraints_[static_cast<std::size_t>(k)];
    std::vector<double> z(c.terms.size());
    double zmax = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < c.terms.size(); ++t) {
        double s = c.terms[t].log_coef;
        for (const auto& [v, a] : c.terms[t].exponents) s += a * y[static_cast<std::size_t>(v)];
        z[t] = s;
        zmax = std::max(zmax, s);
    }
    double sum = 0.0;
    for (double& s : z) {
        s = std::exp(s - zmax);
        sum += s;
    }
    for (double& s : z) s /= sum;
    return z;
}

std::vector<double> ConvexForm::gradient(int k, const std::vector<double>& y) const {
    const LseConstraint& c = constraints_[static_cast<std::size_t>(k)];
    const std::vector<double> w = term_weights(k, y);
    std::vector<double> g(static_cast<std::size_t>(var_count_), 0.0);
    for (std::size_t t = 0; t < c.terms.size(); ++t) {
        for (const auto& [v, a] : c.terms[t].exponents) {
            g[static_cast<std::size_t>(v)] += w[t] * a;
        }
    }
    return g;
}

}  // namespace netshield
