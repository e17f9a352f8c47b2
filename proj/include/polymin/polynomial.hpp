#pragma once

#include <Eigen/Core>
#include <limits>
#include <map>
#include <vector>

#include "polymin/monomial.hpp"

namespace polymin {

/// Degree of the zero polynomial.
inline constexpr int kDegreeNegInf = std::numeric_limits<int>::min();

/// Relative threshold below which coefficients are pruned after arithmetic.
inline constexpr double kCoeffPruneEps = 1e-12;

/// Sparse multivariate polynomial with real coefficients.
///
/// Terms are kept in a graded-lex ordered map; no stored coefficient is
/// exactly zero, and every arithmetic operator prunes coefficients below
/// kCoeffPruneEps relative to the largest coefficient of the result.
class Polynomial {
public:
    explicit Polynomial(int n_vars) : n_vars_(n_vars) {}

    static Polynomial constant(int n_vars, double c);
    static Polynomial from_term(const Monomial& m, double c);
    static Polynomial variable(int n_vars, int index);

    int n_vars() const { return n_vars_; }
    const std::map<Monomial, double>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int term_count() const { return static_cast<int>(terms_.size()); }

    /// kDegreeNegInf when zero.
    int degree() const;
    double coeff(const Monomial& m) const;
    double max_abs_coeff() const;
    std::vector<Monomial> support() const;

    /// Accumulate `c` onto the coefficient of `m` (erases exact zeros).
    Polynomial& add_term(const Monomial& m, double c);

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(double scalar) const;
    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);

    Polynomial times_monomial(const Monomial& m, double scale = 1.0) const;

    Polynomial derivative(int var) const;
    double evaluate(const Eigen::VectorXd& point) const;

    /// Drop coefficients with |c| <= eps_rel * max_abs_coeff().
    Polynomial& prune(double eps_rel = kCoeffPruneEps);

    bool operator==(const Polynomial& other) const {
        return n_vars_ == other.n_vars_ && terms_ == other.terms_;
    }

private:
    int n_vars_;
    std::map<Monomial, double> terms_;
};

inline Polynomial operator*(double scalar, const Polynomial& p) { return p * scalar; }

struct GradientResult {
    std::vector<Polynomial> parts;
    /// Set when the input was constant; all parts are then zero.
    bool constant_input = false;
};

/// Partial derivatives (∂f/∂x_0, ..., ∂f/∂x_{n-1}).
GradientResult gradient(const Polynomial& f);

} // namespace polymin
