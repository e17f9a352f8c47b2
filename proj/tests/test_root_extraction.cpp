#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "polymin/border_basis.hpp"
#include "polymin/errors.hpp"
#include "polymin/parser.hpp"
#include "polymin/root_extraction.hpp"

using namespace polymin;

namespace {

const std::vector<std::string> kXY = {"x", "y"};

Monomial mono(int a, int b) { return Monomial(std::vector<int>{a, b}); }

Completion square_system() {
    return complete_in_degree(
        {parse_polynomial("x^2 - 1", kXY), parse_polynomial("y^2 - 1", kXY)}, 4);
}

bool contains_point(const std::vector<Eigen::VectorXd>& points, double x, double y,
                    double tol = 1e-9) {
    for (const auto& z : points)
        if (std::abs(z[0] - x) < tol && std::abs(z[1] - y) < tol) return true;
    return false;
}

} // namespace

TEST_CASE("multiplication matrix of the square system is a permutation") {
    Completion c = square_system();
    MultiplicationMatrices mm = build_multiplication_matrices(c.family);
    REQUIRE(mm.basis.size() == 4);

    // X_x maps 1->x, x->1, y->xy, xy->y.
    const int i1 = mm.basis.index_of(mono(0, 0));
    const int ix = mm.basis.index_of(mono(1, 0));
    const int iy = mm.basis.index_of(mono(0, 1));
    const int ixy = mm.basis.index_of(mono(1, 1));
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
    expected(ix, i1) = 1;
    expected(i1, ix) = 1;
    expected(ixy, iy) = 1;
    expected(iy, ixy) = 1;
    CHECK(mm.matrices[0].isApprox(expected, 1e-12));

    // permutation matrices commute here
    CHECK((mm.matrices[0] * mm.matrices[1] - mm.matrices[1] * mm.matrices[0]).norm() <= 1e-12);
    CHECK(commutation_residual(mm) <= 1e-12);
}

TEST_CASE("one-dimensional quotient gives 1x1 matrices") {
    Completion c = complete_in_degree(
        {parse_polynomial("x + 0.43636", kXY), parse_polynomial("y - 2.32727", kXY)}, 2);
    MultiplicationMatrices mm = build_multiplication_matrices(c.family);
    REQUIRE(mm.basis.size() == 1);
    CHECK(mm.matrices[0](0, 0) == doctest::Approx(-0.43636));
    CHECK(mm.matrices[1](0, 0) == doctest::Approx(2.32727));

    auto points = extract_points(mm, 0);
    REQUIRE(points.size() == 1);
    CHECK(points[0][0] == doctest::Approx(-0.43636));
    CHECK(points[0][1] == doctest::Approx(2.32727));
}

TEST_CASE("eigenvalue method recovers the four sign points") {
    Completion c = square_system();
    MultiplicationMatrices mm = build_multiplication_matrices(c.family);
    auto points = extract_points(mm, 7);
    REQUIRE(points.size() == 4);
    for (double sx : {-1.0, 1.0})
        for (double sy : {-1.0, 1.0}) CHECK(contains_point(points, sx, sy));
}

TEST_CASE("extraction is seed independent after sorting") {
    Completion c = square_system();
    MultiplicationMatrices mm = build_multiplication_matrices(c.family);
    auto a = extract_points(mm, 1);
    auto b = extract_points(mm, 2);
    auto d = extract_points(mm, 3);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == d.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK((a[i] - b[i]).norm() <= 1e-8);
        CHECK((a[i] - d[i]).norm() <= 1e-8);
    }
}

TEST_CASE("repeated spectrum is reported") {
    // (x - 1)^2 has a double root: X_x has a repeated eigenvalue for every
    // combination.
    MonomialBasis b(1, {Monomial::one(1), Monomial::variable(1, 0)});
    RewritingFamily family(b);
    Polynomial tail(1);
    tail.add_term(Monomial::variable(1, 0), 2.0);
    tail.add_term(Monomial::one(1), -1.0);
    family.add_rule(Monomial(std::vector<int>{2}), tail);
    MultiplicationMatrices mm = build_multiplication_matrices(family);
    CHECK_THROWS_AS(extract_points(mm, 0), NumericalError);
}

TEST_CASE("certify evaluates f, gradient and rules at the points") {
    Completion c = square_system();
    MultiplicationMatrices mm = build_multiplication_matrices(c.family);
    auto points = extract_points(mm, 0);
    Polynomial motzkin = parse_polynomial("1 + x^4*y^2 + x^2*y^4 - 3*x^2*y^2", kXY);
    auto certs = certify(points, motzkin, c.family);
    REQUIRE(certs.size() == points.size());
    for (const auto& cert : certs) {
        CHECK(std::abs(cert.f_value) <= 1e-6);
        CHECK(cert.gradient_norm <= 1e-6);
        CHECK(cert.max_rule_residual <= 1e-6);
    }
    CHECK(certify({}, motzkin, c.family).empty());
}

TEST_CASE("random zero-dimensional systems: commutation and coordinates") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        auto system = testing::random_line_system(rng, 2);
        Completion c = complete_in_degree(system.generators, 6);
        REQUIRE(c.basis.size() == static_cast<int>(system.roots.size()));

        MultiplicationMatrices mm = build_multiplication_matrices(c.family);
        CHECK(commutation_residual(mm) <= 1e-8);

        auto points = extract_points(mm, 5);
        REQUIRE(points.size() == system.roots.size());
        // every true root is recovered
        for (const auto& root : system.roots) {
            bool found = false;
            for (const auto& z : points)
                if ((z - root).norm() <= 1e-6 * (1.0 + root.norm())) found = true;
            CHECK(found);
        }
        // eigenvalues of X_i are the i-th coordinates
        for (int i = 0; i < 2; ++i) {
            Eigen::VectorXcd ev = mm.matrices[static_cast<std::size_t>(i)].eigenvalues();
            std::vector<double> eigs, coords;
            for (Eigen::Index k = 0; k < ev.size(); ++k) eigs.push_back(ev[k].real());
            for (const auto& z : points) coords.push_back(z[i]);
            std::sort(eigs.begin(), eigs.end());
            std::sort(coords.begin(), coords.end());
            for (std::size_t k = 0; k < coords.size(); ++k)
                CHECK(std::abs(eigs[k] - coords[k]) <= 1e-6 * (1.0 + std::abs(coords[k])));
        }
    }
}
