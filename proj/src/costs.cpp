#include "netshield/costs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace netshield {

namespace {

void require_interval(double lo, double hi, const char* what) {
    if (!(lo > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw std::invalid_argument(std::string(what) +
                                    ": rate bounds must satisfy 0 < lo < hi and be finite");
    }
}

}  // namespace

CostFamily CostFamily::reciprocal_vaccine(double beta_lo, double beta_hi) {
    require_interval(beta_lo, beta_hi, "reciprocal_vaccine");
    CostFamily f;
    f.kind_ = CostFamilyKind::ReciprocalVaccine;
    f.correction_ = false;
    f.lo_ = beta_lo;
    f.hi_ = beta_hi;
    const double c = beta_lo * beta_hi / (beta_hi - beta_lo);
    f.terms_ = {PosyTerm{c, -1.0}};
    f.offset_ = -c / beta_hi;
    return f;
}

CostFamily CostFamily::workstation(double beta_lo, double beta_hi) {
    require_interval(beta_lo, beta_hi, "workstation");
    CostFamily f;
    f.kind_ = CostFamilyKind::Workstation;
    f.correction_ = false;
    f.lo_ = beta_lo;
    f.hi_ = beta_hi;
    // beta_lo*(beta_hi/beta - 1)/(beta_hi - beta_lo): same reciprocal shape,
    // and in fact the same normalized curve as the vaccine family.
    const double c = beta_lo * beta_hi / (beta_hi - beta_lo);
    f.terms_ = {PosyTerm{c, -1.0}};
    f.offset_ = -beta_lo / (beta_hi - beta_lo);
    return f;
}

CostFamily CostFamily::reciprocal_antidote(double delta_lo, double delta_hi, double cap) {
    require_interval(delta_lo, delta_hi, "reciprocal_antidote");
    if (!(delta_hi < cap)) {
        throw std::invalid_argument(
            "reciprocal_antidote: recovery bounds must stay below the saturation cap");
    }
    CostFamily f;
    f.kind_ = CostFamilyKind::ReciprocalAntidote;
    f.correction_ = true;
    f.lo_ = delta_lo;
    f.hi_ = delta_hi;
    f.cap_ = cap;
    const double x_lo = cap - delta_hi;  // most protective recovery
    const double x_hi = cap - delta_lo;  // cheapest recovery
    const double c = x_lo * x_hi / (x_hi - x_lo);
    f.terms_ = {PosyTerm{c, -1.0}};
    f.offset_ = -c / x_hi;
    return f;
}

namespace {

std::vector<PosyTerm> validate_custom_terms(std::vector<PosyTerm> terms, double* offset) {
    if (terms.empty()) throw std::invalid_argument("custom cost: at least one term required");
    std::vector<PosyTerm> kept;
    bool any_negative = false;
    for (const PosyTerm& t : terms) {
        if (!(t.coef > 0.0) || !std::isfinite(t.coef) || !std::isfinite(t.exponent)) {
            throw std::invalid_argument("custom cost: term coefficients must be positive and finite");
        }
        if (t.exponent > 0.0) {
            throw std::invalid_argument(
                "custom cost: exponents must be <= 0 so spend decreases in the program variable");
        }
        if (t.exponent == 0.0) {
            *offset += t.coef;
        } else {
            any_negative = true;
            kept.push_back(t);
        }
    }
    if (!any_negative) {
        throw std::invalid_argument("custom cost: at least one strictly negative exponent required");
    }
    return kept;
}

}  // namespace

CostFamily CostFamily::custom_prevention(std::vector<PosyTerm> terms, double beta_lo,
                                         double beta_hi) {
    require_interval(beta_lo, beta_hi, "custom_prevention");
    CostFamily f;
    f.kind_ = CostFamilyKind::CustomPosynomial;
    f.correction_ = false;
    f.lo_ = beta_lo;
    f.hi_ = beta_hi;
    f.offset_ = 0.0;
    f.terms_ = validate_custom_terms(std::move(terms), &f.offset_);
    return f;
}

CostFamily CostFamily::custom_correction(std::vector<PosyTerm> terms, double delta_lo,
                                         double delta_hi, double cap) {
    require_interval(delta_lo, delta_hi, "custom_correction");
    if (!(delta_hi < cap)) {
        throw std::invalid_argument(
            "custom_correction: recovery bounds must stay below the saturation cap");
    }
    CostFamily f;
    f.kind_ = CostFamilyKind::CustomPosynomial;
    f.correction_ = true;
    f.lo_ = delta_lo;
    f.hi_ = delta_hi;
    f.cap_ = cap;
    f.offset_ = 0.0;
    f.terms_ = validate_custom_terms(std::move(terms), &f.offset_);
    return f;
}

double CostFamily::value_in_var(double x) const {
    double v = offset_;
    for (const PosyTerm& t : terms_) v += t.coef * std::pow(x, t.exponent);
    return v;
}

double CostFamily::cost(double rate) const {
    const double x = correction_ ? cap_ - rate : rate;
    if (!(x > 0.0)) {
        throw std::invalid_argument(correction_
                                        ? "cost: recovery rate must lie below the saturation cap"
                                        : "cost: transmission rate must be positive");
    }
    return value_in_var(x);
}

double CostFamily::var_lo() const { return correction_ ? cap_ - hi_ : lo_; }
double CostFamily::var_hi() const { return correction_ ? cap_ - lo_ : hi_; }

double CostFamily::max_spend() const { return cost(correction_ ? hi_ : lo_); }

double CostFamily::rate_for_spend(double spend) const {
    if (!std::isfinite(spend)) throw std::invalid_argument("rate_for_spend: spend must be finite");
    double x;
    if (kind_ != CostFamilyKind::CustomPosynomial) {
        const double denom = spend - offset_;
        if (!(denom > 0.0)) throw std::invalid_argument("rate_for_spend: spend out of range");
        x = terms_[0].coef / denom;
    } else {
        // Spend is strictly decreasing in the program variable; bisect on it.
        double a = var_lo();
        double b = var_hi();
        const double fa = value_in_var(a);
        const double fb = value_in_var(b);
        const double slack = 1e-9 * std::max(1.0, std::abs(fa));
        if (spend > fa + slack || spend < fb - slack) {
            throw std::invalid_argument("rate_for_spend: spend outside the family's range");
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(a * b);
            if (value_in_var(mid) > spend) {
                a = mid;
            } else {
                b = mid;
            }
            if (b - a <= 1e-15 * b) break;
        }
        x = std::sqrt(a * b);
    }
    return correction_ ? cap_ - x : x;
}

double vaccine_cost(double beta, double beta_lo, double beta_hi) {
    return CostFamily::reciprocal_vaccine(beta_lo, beta_hi).cost(beta);
}

double antidote_cost(double delta, double delta_lo, double delta_hi) {
    return CostFamily::reciprocal_antidote(delta_lo, delta_hi, 1.0).cost(delta);
}

double workstation_cost(double beta, double beta_lo, double beta_hi) {
    return CostFamily::workstation(beta_lo, beta_hi).cost(beta);
}

double inverse_cost(const CostFamily& family, double spend) {
    return family.rate_for_spend(spend);
}

}  // namespace netshield
