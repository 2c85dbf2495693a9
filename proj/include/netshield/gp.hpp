#pragma once

#include <string>
#include <utility>
#include <vector>

namespace netshield {

/// One monomial c * prod_v x_v^{a_v} over positive variables, c > 0.
struct GpTerm {
    double coef = 1.0;
    std::vector<std::pair<int, double>> powers;  // (variable index, exponent)
};

/// Sum of monomials.  Posynomial when every coefficient is positive.
struct GpPosynomial {
    std::vector<GpTerm> terms;
};

/// Standard-form record: lhs(x) <= 1.  A constraint written as
/// posynomial <= monomial arrives here already divided by its right-hand
/// monomial.
struct GpConstraint {
    GpPosynomial lhs;
    std::string label;
};

/// A geometric program in standard form: minimize one variable subject to
/// posynomial <= 1 constraints.  (A posynomial objective reduces to this
/// shape through an epigraph variable; the allocation problem's objective is
/// already a plain variable.)
struct GpForm {
    std::vector<std::string> variable_names;
    int objective_variable = 0;
    std::vector<GpConstraint> constraints;
};

/// Appends x == value as the two monomial constraints x / value <= 1 and
/// value / x <= 1.  Equality constraints of the general form are supported
/// this way; the allocation problem itself never produces any.
void add_monomial_equality(GpForm& gp, int variable, double value, const std::string& label);

struct LseTerm {
    double log_coef = 0.0;
    std::vector<std::pair<int, double>> exponents;  // sorted by variable index
};

/// log sum exp(log_coef_t + exponents_t . y) <= 0.
struct LseConstraint {
    std::vector<LseTerm> terms;
    std::string label;
};

/// Convex image of a GP under the change of variables y = log x.  Every
/// posynomial constraint becomes a log-sum-exp constraint; a single-term
/// constraint is affine.  The objective stays the bare variable y_obj.
class ConvexForm {
public:
    int variable_count() const { return var_count_; }
    int objective_variable() const { return objective_; }
    int constraint_count() const { return static_cast<int>(constraints_.size()); }
    const std::vector<LseConstraint>& constraints() const { return constraints_; }
    const LseConstraint& constraint(int k) const {
        return constraints_[static_cast<std::size_t>(k)];
    }

    /// Numerically stable log-sum-exp value of constraint k at y.
    double value(int k, const std::vector<double>& y) const;

    /// Gradient of constraint k at y (dense, length variable_count()).
    std::vector<double> gradient(int k, const std::vector<double>& y) const;

    /// Softmax weights of the terms of constraint k at y; they sum to 1 and
    /// are the building blocks of the constraint's Hessian
    ///   H = sum_t w_t a_t a_t^T - g g^T.
    std::vector<double> term_weights(int k, const std::vector<double>& y) const;

private:
    friend ConvexForm log_transform(const GpForm& gp);

    int var_count_ = 0;
    int objective_ = 0;
    std::vector<LseConstraint> constraints_;
};

/// Transforms a standard-form GP to its convex image.  Exponents on the same
/// variable are combined, zero exponents dropped, and terms with identical
/// exponent rows merged by summing coefficients before taking logs.
/// Throws std::invalid_argument (naming the constraint) on a non-positive
/// coefficient, since the program would not be posynomial.
ConvexForm log_transform(const GpForm& gp);

}  // namespace netshield
