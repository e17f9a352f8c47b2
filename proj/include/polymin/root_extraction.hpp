#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "polymin/border_basis.hpp"

namespace polymin {

/// Matrices of the multiplication operators x_i on span(B) modulo the
/// family: column j of matrices[i] holds the B-coordinates of pi(x_i b_j).
struct MultiplicationMatrices {
    std::vector<Eigen::MatrixXd> matrices;
    MonomialBasis basis;
};

/// Requires the family to be a border basis for its monomial set.
MultiplicationMatrices build_multiplication_matrices(const RewritingFamily& family);

/// max over pairs of ||X_i X_j - X_j X_i||_max, relative to the matrix scale.
double commutation_residual(const MultiplicationMatrices& mm);

struct ExtractOptions {
    double tol_imag = 1e-6;
    double tol_sep = 1e-8;
    double tol_commute = 1e-6;
    double tol_dedup = 1e-6;
    int max_attempts = 5;
};

/// Eigenvalue method: a seeded random unit combination X_c = Σ c_i X_i is
/// formed, the eigenvectors of its transpose are evaluation vectors, and
/// each yields one candidate point. Eigenvectors with significant
/// imaginary parts are discarded; points are deduplicated and returned in
/// lexicographic order. Retries with a fresh combination when the spectrum
/// is not separated, then throws NumericalError("non-simple spectrum").
std::vector<Eigen::VectorXd> extract_points(const MultiplicationMatrices& mm, std::uint64_t seed,
                                            const ExtractOptions& options = {});

struct PointCertificate {
    double f_value = 0.0;
    double gradient_norm = 0.0;     // max-norm of the gradient at the point
    double max_rule_residual = 0.0; // max |rule polynomial| at the point
};

std::vector<PointCertificate> certify(const std::vector<Eigen::VectorXd>& points,
                                      const Polynomial& f, const RewritingFamily& family);

} // namespace polymin
