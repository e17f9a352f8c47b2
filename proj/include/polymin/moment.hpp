#pragma once

#include <Eigen/Core>
#include <map>
#include <vector>

#include "polymin/border_basis.hpp"
#include "polymin/monomial_basis.hpp"
#include "polymin/polynomial.hpp"

namespace polymin {

/// A linear form on polynomials, stored as moments λ_α per monomial.
///
/// The index set records the basis whose pairwise products the form is
/// defined on; values may extend beyond it.
class MomentVector {
public:
    MomentVector(MonomialBasis index_set, std::map<Monomial, double> values);

    /// Evaluation form 1_ζ on index_set · index_set.
    static MomentVector evaluation(const MonomialBasis& index_set, const Eigen::VectorXd& point);
    /// Convex combination Σ w_i 1_{ζ_i} on index_set · index_set.
    static MomentVector mixture(const MonomialBasis& index_set,
                                const std::vector<Eigen::VectorXd>& points,
                                const std::vector<double>& weights);

    const MonomialBasis& index_set() const { return index_set_; }
    const std::map<Monomial, double>& values() const { return values_; }

    bool has(const Monomial& m) const { return values_.count(m) > 0; }
    /// Throws MissingMomentError when absent.
    double at(const Monomial& m) const;

    /// Λ(p); every support monomial must have a moment.
    double apply(const Polynomial& p) const;

private:
    MonomialBasis index_set_;
    std::map<Monomial, double> values_;
};

/// Symmetric matrix (λ_{α+β}) over a monomial basis.
struct TruncatedHankel {
    Eigen::MatrixXd matrix;
    MonomialBasis basis;
};

/// Throws MissingMomentError naming the first absent exponent sum.
TruncatedHankel build_hankel(const MomentVector& moments, const MonomialBasis& basis);

/// Kernel polynomials of H via symmetric eigendecomposition: eigenvalues
/// with |e| <= tau_rank * max(|e|_max, 1) count as zero. Each returned
/// polynomial has its largest-magnitude coefficient normalized to 1.
std::vector<Polynomial> hankel_kernel(const TruncatedHankel& hankel, double tau_rank);

/// |B| minus the kernel dimension under the same thresholding.
int hankel_rank(const TruncatedHankel& hankel, double tau_rank);

/// rank H^{B+} == rank H^B == |B| under tau_rank thresholding. The moment
/// vector must cover B+ · B+.
bool flat_extension_test(const MomentVector& moments, const MonomialBasis& basis,
                         double tau_rank);

struct PositivityCheck {
    bool positive = false;
    double min_eigenvalue = 0.0;
};

/// Min eigenvalue >= -tau_psd * max(1, max eigenvalue).
PositivityCheck check_positive(const TruncatedHankel& hankel, double tau_psd);

/// Extend Λ to every monomial of `targets` using λ(m) := Λ(π_{F,B}(m)).
/// `degree_bound` bounds the rewriting recursion.
MomentVector extend_by_rewriting(const MomentVector& moments, const RewritingFamily& family,
                                 const std::vector<Monomial>& targets, int degree_bound);

} // namespace polymin
