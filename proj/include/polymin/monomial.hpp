#pragma once

#include <Eigen/Core>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace polymin {

/// A monomial in n variables, stored as a dense exponent vector.
///
/// The total order is graded lexicographic: degree first, then
/// lexicographic on the exponent vector with x_0 heaviest. All ordered
/// containers in the library rely on this order for deterministic
/// iteration.
class Monomial {
public:
    /// The monomial 1 in `n_vars` variables.
    explicit Monomial(int n_vars);
    explicit Monomial(std::vector<int> exponents);

    static Monomial one(int n_vars) { return Monomial(n_vars); }
    static Monomial variable(int n_vars, int index);

    int n_vars() const { return static_cast<int>(exponents_.size()); }
    int degree() const { return degree_; }
    int exponent(int i) const { return exponents_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& exponents() const { return exponents_; }
    bool is_one() const { return degree_ == 0; }

    Monomial operator*(const Monomial& other) const;
    Monomial times_variable(int i) const;
    /// Precondition: exponent(i) > 0.
    Monomial divided_by_variable(int i) const;

    /// Coordinate-wise exponent comparison (divisibility).
    bool divides(const Monomial& other) const;
    /// Precondition: other.divides(*this).
    Monomial quotient_by(const Monomial& other) const;

    double evaluate(const Eigen::VectorXd& point) const;

    bool operator==(const Monomial& other) const { return exponents_ == other.exponents_; }
    std::strong_ordering operator<=>(const Monomial& other) const;

private:
    std::vector<int> exponents_;
    int degree_ = 0;
};

/// Raw "x^2*y" style rendering with default variable names x, y, z, x3, x4, ...
std::string to_string(const Monomial& m);

} // namespace polymin
