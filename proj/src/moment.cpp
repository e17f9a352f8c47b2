#include "polymin/moment.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "polymin/errors.hpp"

namespace polymin {

MomentVector::MomentVector(MonomialBasis index_set, std::map<Monomial, double> values)
    : index_set_(std::move(index_set)), values_(std::move(values)) {}

MomentVector MomentVector::evaluation(const MonomialBasis& index_set,
                                      const Eigen::VectorXd& point) {
    return mixture(index_set, {point}, {1.0});
}

MomentVector MomentVector::mixture(const MonomialBasis& index_set,
                                   const std::vector<Eigen::VectorXd>& points,
                                   const std::vector<double>& weights) {
    std::map<Monomial, double> values;
    for (int i = 0; i < index_set.size(); ++i) {
        for (int j = i; j < index_set.size(); ++j) {
            const Monomial m = index_set[i] * index_set[j];
            if (values.count(m)) continue;
            double v = 0.0;
            for (std::size_t k = 0; k < points.size(); ++k)
                v += weights[k] * m.evaluate(points[k]);
            values.emplace(m, v);
        }
    }
    return MomentVector(index_set, std::move(values));
}

double MomentVector::at(const Monomial& m) const {
    auto it = values_.find(m);
    if (it == values_.end()) throw MissingMomentError(to_string(m));
    return it->second;
}

double MomentVector::apply(const Polynomial& p) const {
    double v = 0.0;
    for (const auto& [m, c] : p.terms()) v += c * at(m);
    return v;
}

TruncatedHankel build_hankel(const MomentVector& moments, const MonomialBasis& basis) {
    const int n = basis.size();
    Eigen::MatrixXd H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = moments.at(basis[i] * basis[j]);
            H(i, j) = v;
            H(j, i) = v;
        }
    return TruncatedHankel{std::move(H), basis};
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigensolve(const TruncatedHankel& hankel) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hankel.matrix);
    if (es.info() != Eigen::Success)
        throw NumericalError("symmetric eigendecomposition failed on a Hankel matrix");
    return es;
}

double rank_cutoff(const Eigen::VectorXd& eigenvalues, double tau_rank) {
    const double emax = eigenvalues.cwiseAbs().maxCoeff();
    return tau_rank * std::max(emax, 1.0);
}

} // namespace

std::vector<Polynomial> hankel_kernel(const TruncatedHankel& hankel, double tau_rank) {
    if (hankel.basis.size() == 0) return {};
    auto es = eigensolve(hankel);
    const double cutoff = rank_cutoff(es.eigenvalues(), tau_rank);
    std::vector<Polynomial> kernel;
    for (int k = 0; k < hankel.basis.size(); ++k) {
        if (std::abs(es.eigenvalues()[k]) > cutoff) continue;
        Eigen::VectorXd v = es.eigenvectors().col(k);
        // Normalize the largest-magnitude coefficient to exactly 1.
        int arg = 0;
        for (int i = 1; i < v.size(); ++i)
            if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
        v /= v[arg];
        Polynomial p(hankel.basis.n_vars());
        for (int i = 0; i < v.size(); ++i) p.add_term(hankel.basis[i], v[i]);
        kernel.push_back(std::move(p));
    }
    return kernel;
}

int hankel_rank(const TruncatedHankel& hankel, double tau_rank) {
    if (hankel.basis.size() == 0) return 0;
    auto es = eigensolve(hankel);
    const double cutoff = rank_cutoff(es.eigenvalues(), tau_rank);
    int rank = 0;
    for (int k = 0; k < es.eigenvalues().size(); ++k)
        if (std::abs(es.eigenvalues()[k]) > cutoff) ++rank;
    return rank;
}

bool flat_extension_test(const MomentVector& moments, const MonomialBasis& basis,
                         double tau_rank) {
    const MonomialBasis plus = basis.prolonged();
    const int rank_base = hankel_rank(build_hankel(moments, basis), tau_rank);
    const int rank_plus = hankel_rank(build_hankel(moments, plus), tau_rank);
    return rank_plus == rank_base && rank_base == basis.size();
}

PositivityCheck check_positive(const TruncatedHankel& hankel, double tau_psd) {
    PositivityCheck result;
    if (hankel.basis.size() == 0) {
        result.positive = true;
        return result;
    }
    auto es = eigensolve(hankel);
    result.min_eigenvalue = es.eigenvalues().minCoeff();
    const double emax = es.eigenvalues().maxCoeff();
    result.positive = result.min_eigenvalue >= -tau_psd * std::max(1.0, emax);
    return result;
}

MomentVector extend_by_rewriting(const MomentVector& moments, const RewritingFamily& family,
                                 const std::vector<Monomial>& targets, int degree_bound) {
    NormalFormTable table(family);
    std::map<Monomial, double> values = moments.values();
    for (const auto& m : targets) {
        if (values.count(m)) continue;
        values.emplace(m, moments.apply(table.reduce(Polynomial::from_term(m, 1.0), degree_bound)));
    }
    return MomentVector(moments.index_set(), std::move(values));
}

} // namespace polymin
