#include "polymin/root_extraction.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "polymin/errors.hpp"

namespace polymin {

MultiplicationMatrices build_multiplication_matrices(const RewritingFamily& family) {
    const MonomialBasis& basis = family.basis();
    const int r = basis.size();
    const int n = basis.n_vars();
    const int bound = basis.max_degree() + 1;
    NormalFormTable table(family);

    MultiplicationMatrices mm{std::vector<Eigen::MatrixXd>(
                                  static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(r, r)),
                              basis};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < r; ++j) {
            const Polynomial image =
                table.reduce_monomial(basis[j].times_variable(i), bound);
            for (const auto& [m, c] : image.terms()) {
                const int row = basis.index_of(m);
                if (row < 0)
                    throw NumericalError("normal form left the basis span at " + to_string(m));
                mm.matrices[static_cast<std::size_t>(i)](row, j) = c;
            }
        }
    }
    return mm;
}

double commutation_residual(const MultiplicationMatrices& mm) {
    double residual = 0.0;
    double scale = 1.0;
    for (const auto& x : mm.matrices) scale = std::max(scale, x.cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < mm.matrices.size(); ++i)
        for (std::size_t j = i + 1; j < mm.matrices.size(); ++j) {
            const Eigen::MatrixXd comm =
                mm.matrices[i] * mm.matrices[j] - mm.matrices[j] * mm.matrices[i];
            residual = std::max(residual, comm.cwiseAbs().maxCoeff());
        }
    return residual / (scale * scale);
}

std::vector<Eigen::VectorXd> extract_points(const MultiplicationMatrices& mm, std::uint64_t seed,
                                            const ExtractOptions& options) {
    const int r = mm.basis.size();
    const int n = mm.basis.n_vars();
    if (r == 0) return {};
    if (commutation_residual(mm) > options.tol_commute)
        throw NumericalError("multiplication matrices do not commute");

    const int one_index = mm.basis.index_of(Monomial::one(n));
    if (one_index < 0) throw Error("quotient basis does not contain 1");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;

    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        Eigen::VectorXd c(n);
        for (int i = 0; i < n; ++i) c[i] = gauss(rng);
        c.normalize();

        Eigen::MatrixXd xc = Eigen::MatrixXd::Zero(r, r);
        for (int i = 0; i < n; ++i) xc += c[i] * mm.matrices[static_cast<std::size_t>(i)];

        Eigen::EigenSolver<Eigen::MatrixXd> es(xc.transpose());
        if (es.info() != Eigen::Success)
            throw NumericalError("eigendecomposition of the combined multiplication matrix failed");

        const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        bool separated = true;
        for (int i = 0; i < r && separated; ++i)
            for (int j = i + 1; j < r; ++j)
                if (std::abs(es.eigenvalues()[i] - es.eigenvalues()[j]) <
                    options.tol_sep * scale) {
                    separated = false;
                    break;
                }
        if (!separated) continue;

        std::vector<Eigen::VectorXd> points;
        for (int k = 0; k < r; ++k) {
            if (std::abs(es.eigenvalues()[k].imag()) > options.tol_imag * scale) continue;
            Eigen::VectorXcd v = es.eigenvectors().col(k);
            if (std::abs(v[one_index]) < 1e-12 * v.norm()) continue;
            v /= v[one_index];
            if (v.imag().cwiseAbs().maxCoeff() >
                options.tol_imag * std::max(1.0, v.real().cwiseAbs().maxCoeff()))
                continue;

            Eigen::VectorXd z(n);
            for (int i = 0; i < n; ++i) {
                const int idx = mm.basis.index_of(Monomial::variable(n, i));
                if (idx >= 0) {
                    z[i] = v[idx].real();
                } else {
                    // coordinate = <pi(x_i), evaluation vector>
                    const Eigen::VectorXd coords =
                        mm.matrices[static_cast<std::size_t>(i)].col(one_index);
                    z[i] = coords.dot(v.real());
                }
            }
            bool duplicate = false;
            for (const auto& p : points)
                if ((p - z).norm() <= options.tol_dedup * (1.0 + z.norm())) {
                    duplicate = true;
                    break;
                }
            if (!duplicate) points.push_back(std::move(z));
        }
        std::sort(points.begin(), points.end(),
                  [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                      for (Eigen::Index i = 0; i < a.size(); ++i)
                          if (a[i] != b[i]) return a[i] < b[i];
                      return false;
                  });
        return points;
    }
    throw NumericalError("non-simple spectrum");
}

std::vector<PointCertificate> certify(const std::vector<Eigen::VectorXd>& points,
                                      const Polynomial& f, const RewritingFamily& family) {
    GradientResult grad = gradient(f);
    std::vector<PointCertificate> certificates;
    certificates.reserve(points.size());
    for (const auto& z : points) {
        PointCertificate cert;
        cert.f_value = f.evaluate(z);
        for (const auto& g : grad.parts)
            cert.gradient_norm = std::max(cert.gradient_norm, std::abs(g.evaluate(z)));
        for (const auto& [lead, tail] : family.rules())
            cert.max_rule_residual = std::max(
                cert.max_rule_residual, std::abs(family.rule_polynomial(lead).evaluate(z)));
        certificates.push_back(cert);
    }
    return certificates;
}

} // namespace polymin
