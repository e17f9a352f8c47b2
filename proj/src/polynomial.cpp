#include "polymin/polynomial.hpp"

#include <cmath>

#include "polymin/errors.hpp"

namespace polymin {

Polynomial Polynomial::constant(int n_vars, double c) {
    Polynomial p(n_vars);
    if (c != 0.0) p.terms_.emplace(Monomial(n_vars), c);
    return p;
}

Polynomial Polynomial::from_term(const Monomial& m, double c) {
    Polynomial p(m.n_vars());
    if (c != 0.0) p.terms_.emplace(m, c);
    return p;
}

Polynomial Polynomial::variable(int n_vars, int index) {
    return from_term(Monomial::variable(n_vars, index), 1.0);
}

int Polynomial::degree() const {
    if (terms_.empty()) return kDegreeNegInf;
    return terms_.rbegin()->first.degree();
}

double Polynomial::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

std::vector<Monomial> Polynomial::support() const {
    std::vector<Monomial> s;
    s.reserve(terms_.size());
    for (const auto& [mono, c] : terms_) s.push_back(mono);
    return s;
}

Polynomial& Polynomial::add_term(const Monomial& m, double c) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    } else if (c == 0.0) {
        terms_.erase(it);
    }
    return *this;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    Polynomial result = *this;
    result += other;
    return result;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    Polynomial result = *this;
    result -= other;
    return result;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return prune();
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return prune();
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    Polynomial result(n_vars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : other.terms_)
            result.add_term(ma * mb, ca * cb);
    return result.prune();
}

Polynomial Polynomial::operator*(double scalar) const {
    Polynomial result(n_vars_);
    if (scalar == 0.0) return result;
    for (const auto& [m, c] : terms_) result.terms_.emplace(m, c * scalar);
    return result;
}

Polynomial Polynomial::operator-() const { return *this * -1.0; }

Polynomial Polynomial::times_monomial(const Monomial& m, double scale) const {
    Polynomial result(n_vars_);
    if (scale == 0.0) return result;
    for (const auto& [mono, c] : terms_) result.terms_.emplace(mono * m, c * scale);
    return result;
}

Polynomial Polynomial::derivative(int var) const {
    Polynomial result(n_vars_);
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(var);
        if (e == 0) continue;
        result.add_term(m.divided_by_variable(var), c * e);
    }
    return result;
}

double Polynomial::evaluate(const Eigen::VectorXd& point) const {
    if (point.size() != n_vars_)
        throw DimensionError("point dimension does not match polynomial variables");
    double value = 0.0;
    for (const auto& [m, c] : terms_) value += c * m.evaluate(point);
    return value;
}

Polynomial& Polynomial::prune(double eps_rel) {
    if (terms_.empty()) return *this;
    const double cutoff = eps_rel * max_abs_coeff();
    for (auto it = terms_.begin(); it != terms_.end();)
        it = (std::abs(it->second) <= cutoff) ? terms_.erase(it) : std::next(it);
    return *this;
}

GradientResult gradient(const Polynomial& f) {
    GradientResult result;
    result.constant_input = f.degree() <= 0;
    result.parts.reserve(static_cast<std::size_t>(f.n_vars()));
    for (int i = 0; i < f.n_vars(); ++i) result.parts.push_back(f.derivative(i));
    return result;
}

} // namespace polymin
