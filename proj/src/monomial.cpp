#include "polymin/monomial.hpp"

#include <numeric>

#include "polymin/errors.hpp"

namespace polymin {

Monomial::Monomial(int n_vars) : exponents_(static_cast<std::size_t>(n_vars), 0) {}

Monomial::Monomial(std::vector<int> exponents) : exponents_(std::move(exponents)) {
    degree_ = std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

Monomial Monomial::variable(int n_vars, int index) {
    Monomial m(n_vars);
    m.exponents_[static_cast<std::size_t>(index)] = 1;
    m.degree_ = 1;
    return m;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial result = *this;
    for (std::size_t i = 0; i < exponents_.size(); ++i)
        result.exponents_[i] += other.exponents_[i];
    result.degree_ = degree_ + other.degree_;
    return result;
}

Monomial Monomial::times_variable(int i) const {
    Monomial result = *this;
    ++result.exponents_[static_cast<std::size_t>(i)];
    ++result.degree_;
    return result;
}

Monomial Monomial::divided_by_variable(int i) const {
    Monomial result = *this;
    --result.exponents_[static_cast<std::size_t>(i)];
    --result.degree_;
    return result;
}

bool Monomial::divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exponents_.size(); ++i)
        if (exponents_[i] > other.exponents_[i]) return false;
    return true;
}

Monomial Monomial::quotient_by(const Monomial& other) const {
    Monomial result = *this;
    for (std::size_t i = 0; i < exponents_.size(); ++i)
        result.exponents_[i] -= other.exponents_[i];
    result.degree_ = degree_ - other.degree_;
    return result;
}

double Monomial::evaluate(const Eigen::VectorXd& point) const {
    if (point.size() != static_cast<Eigen::Index>(exponents_.size()))
        throw DimensionError("point dimension does not match monomial variables");
    double value = 1.0;
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        double x = point[static_cast<Eigen::Index>(i)];
        int e = exponents_[i];
        double p = 1.0;
        while (e > 0) {
            if (e & 1) p *= x;
            x *= x;
            e >>= 1;
        }
        value *= p;
    }
    return value;
}

std::strong_ordering Monomial::operator<=>(const Monomial& other) const {
    if (degree_ != other.degree_)
        return degree_ <=> other.degree_;
    // Same degree: lexicographic with the first variable heaviest.
    for (std::size_t i = 0; i < exponents_.size(); ++i)
        if (exponents_[i] != other.exponents_[i])
            return exponents_[i] <=> other.exponents_[i];
    return std::strong_ordering::equal;
}

std::string to_string(const Monomial& m) {
    if (m.is_one()) return "1";
    static const char* names[] = {"x", "y", "z"};
    std::string out;
    for (int i = 0; i < m.n_vars(); ++i) {
        int e = m.exponent(i);
        if (e == 0) continue;
        if (!out.empty()) out += "*";
        out += (i < 3) ? names[i] : ("x" + std::to_string(i));
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

} // namespace polymin
