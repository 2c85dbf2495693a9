#pragma once

#include <vector>

namespace netshield {

enum class CostFamilyKind {
    ReciprocalVaccine,   // prevention: affine-normalized 1/beta
    ReciprocalAntidote,  // correction: affine-normalized 1/(cap - delta)
    Workstation,         // prevention: beta_lo*(beta_hi/beta - 1)/(beta_hi - beta_lo)
    CustomPosynomial,    // caller-supplied posynomial in the program variable
};

// One monomial of a posynomial cost: coef * x^exponent with coef > 0.
struct PosyTerm {
    double coef = 0.0;
    double exponent = 0.0;
};

/* Price of holding a rate inside [lo, hi].
 *
 * Prevention families price transmission rates beta (spend decreases as
 * beta rises toward beta_hi, the unprotected value). Correction families
 * price recovery rates delta (spend increases as delta rises toward
 * delta_hi); their program variable is the complement x = cap - delta,
 * which keeps the spend a decreasing posynomial in x.
 *
 * The named families are normalized: zero spend at the cheapest admissible
 * rate, unit spend at the most protective one. Custom families supply
 * posynomial terms in the program variable directly (coef > 0,
 * exponent <= 0, at least one negative).
 */
class CostFamily {
public:
    static CostFamily reciprocal_vaccine(double beta_lo, double beta_hi);
    static CostFamily reciprocal_antidote(double delta_lo, double delta_hi, double cap = 1.0);
    static CostFamily workstation(double beta_lo, double beta_hi);
    static CostFamily custom_prevention(std::vector<PosyTerm> terms, double beta_lo, double beta_hi);
    static CostFamily custom_correction(std::vector<PosyTerm> terms, double delta_lo,
                                        double delta_hi, double cap);

    CostFamilyKind kind() const { return kind_; }
    bool is_correction() const { return correction_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double cap() const { return cap_; }

    // Spend needed to hold the given rate (beta or delta, by family role).
    double cost(double rate) const;

    // Inverse of cost(): the rate purchased by the given spend.
    double rate_for_spend(double spend) const;

    // Spend at the most protective admissible rate.
    double max_spend() const;

    // cost = sum_k coef_k * x^{exp_k} + offset in the program variable x
    // (x = beta for prevention, x = cap - delta for correction).
    const std::vector<PosyTerm>& gp_terms() const { return terms_; }
    double gp_offset() const { return offset_; }

    // Program-variable interval [x at most protective rate resp. cheapest].
    double var_lo() const;
    double var_hi() const;

private:
    CostFamily() = default;

    double value_in_var(double x) const;

    CostFamilyKind kind_ = CostFamilyKind::ReciprocalVaccine;
    bool correction_ = false;
    double lo_ = 0.0;   // rate interval (beta or delta)
    double hi_ = 0.0;
    double cap_ = 1.0;  // recovery saturation; unused by prevention families
    std::vector<PosyTerm> terms_;
    double offset_ = 0.0;
};

// Free-function forms of the named families.
double vaccine_cost(double beta, double beta_lo, double beta_hi);
double antidote_cost(double delta, double delta_lo, double delta_hi);
double workstation_cost(double beta, double beta_lo, double beta_hi);
double inverse_cost(const CostFamily& family, double spend);

}  // namespace netshield
