#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "polymin/border_basis.hpp"
#include "polymin/errors.hpp"
#include "polymin/moment.hpp"
#include "polymin/parser.hpp"
#include "polymin/sdp.hpp"
#include "polymin/sdpa_io.hpp"

using namespace polymin;

namespace {

const std::vector<std::string> kX = {"x"};
const std::vector<std::string> kXY = {"x", "y"};

MonomialBasis basis_1x() {
    return MonomialBasis(1, {Monomial::one(1), Monomial::variable(1, 0)});
}

Monomial mono1(int e) { return Monomial(std::vector<int>{e}); }

MomentSDP toy_sdp(const char* objective) {
    return assemble(parse_polynomial(objective, kX), basis_1x(), std::vector<Polynomial>{});
}

struct MotzkinStage {
    Completion completion;
    MonomialBasis basis_t;
    MomentSDP sdp;
};

MotzkinStage motzkin_stage(int t) {
    Polynomial f = parse_polynomial("1 + x^4*y^2 + x^2*y^4 - 3*x^2*y^2", kXY);
    auto grad = gradient(f);
    Completion comp = complete_in_degree(grad.parts, 2 * t);
    MonomialBasis bt = comp.basis.restricted_to_degree(t);
    MomentSDP sdp = assemble(f, bt, comp.family);
    return MotzkinStage{std::move(comp), std::move(bt), std::move(sdp)};
}

} // namespace

TEST_CASE("toy assembly structure") {
    MomentSDP sdp = toy_sdp("x^2 - 2*x");
    CHECK(sdp.hankel_size() == 2);
    CHECK(sdp.moment_monomials.size() == 3); // 1, x, x^2
    CHECK(sdp.equality_constraints.empty());
    CHECK(sdp.objective.coeff(mono1(2)) == 1.0);
    CHECK(sdp.objective.coeff(mono1(1)) == -2.0);

    // lambda_0 is folded as a fixed entry: one 2x2 block, F_0..F_2.
    MomentLmi red = reduce_to_lmi(sdp);
    CHECK(red.lmi.dim() == 2);
    CHECK(red.lmi.vars() == 2);
}

TEST_CASE("minimize E[x^2] over probability-normalized forms") {
    SDPSolution sol = solve(toy_sdp("x^2"));
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal_objective == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(std::abs(sol.moments.at(mono1(1))) < 1e-5);
    CHECK(std::abs(sol.moments.at(mono1(2))) < 1e-5);
}

TEST_CASE("minimize E[x^2 - 2x] reaches the boundary optimum") {
    SDPSolution sol = solve(toy_sdp("x^2 - 2*x"));
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal_objective == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(sol.moments.at(mono1(1)) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(sol.moments.at(mono1(2)) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(sol.dual_objective <= sol.primal_objective + 1e-6);
}

TEST_CASE("Motzkin relaxation sizes match the reference values") {
    CHECK(motzkin_stage(3).basis_t.size() == 10);
    CHECK(motzkin_stage(4).basis_t.size() == 15);
    CHECK(motzkin_stage(5).basis_t.size() == 19);
}

TEST_CASE("Motzkin at degree 3 is flagged as a duality gap") {
    MotzkinStage stage = motzkin_stage(3);
    SDPSolution sol = solve(stage.sdp);
    CHECK(sol.status == SolveStatus::GapDetected);
    CHECK(std::abs(sol.primal_objective + 216.0) <= 0.01 * 216.0);
}

TEST_CASE("Motzkin at degree 4 is optimal at zero") {
    SDPSolution sol = solve(motzkin_stage(4).sdp);
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(std::abs(sol.primal_objective) <= 1e-4);
    CHECK(check_positive(TruncatedHankel{sol.hankel, motzkin_stage(4).basis_t}, 1e-7).positive);
}

TEST_CASE("weak duality and positivity on random bounded moment programs") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    const MonomialBasis b(2, {Monomial::one(2), Monomial::variable(2, 0),
                              Monomial::variable(2, 1)});
    int solved = 0;
    for (int trial = 0; trial < 50; ++trial) {
        // SOS objective keeps the program bounded below.
        Polynomial q(2), r(2);
        q.add_term(Monomial::one(2), coeff(rng));
        q.add_term(Monomial::variable(2, 0), coeff(rng));
        q.add_term(Monomial::variable(2, 1), coeff(rng));
        r.add_term(Monomial::one(2), coeff(rng));
        r.add_term(Monomial::variable(2, 0), coeff(rng));
        r.add_term(Monomial::variable(2, 1), coeff(rng));
        Polynomial f = q * q + r * r;

        std::vector<Polynomial> constraints;
        if (trial % 2 == 0) {
            // random linear equality Λ(g) = 0
            Polynomial g(2);
            g.add_term(Monomial::variable(2, 0), coeff(rng));
            g.add_term(Monomial::variable(2, 1), coeff(rng));
            g.add_term(Monomial::one(2), 0.1 * coeff(rng));
            constraints.push_back(g);
        }
        SDPSolution sol = solve(assemble(f, b, constraints));
        if (sol.status != SolveStatus::Optimal) continue;
        ++solved;
        CHECK(sol.dual_objective <=
              sol.primal_objective + 1e-6 * (1.0 + std::abs(sol.primal_objective)));
        CHECK(check_positive(TruncatedHankel{sol.hankel, b}, 1e-7).positive);
    }
    CHECK(solved >= 45);
}

TEST_CASE("objective scaling leaves the argmin moments unchanged") {
    SDPSolution base = solve(toy_sdp("x^2 - 2*x"));
    MomentSDP scaled_sdp = toy_sdp("3.5*x^2 - 7*x");
    SDPSolution scaled = solve(scaled_sdp);
    CHECK(scaled.primal_objective == doctest::Approx(3.5 * base.primal_objective).epsilon(1e-6));
    for (const auto& [m, v] : base.moments.values())
        CHECK(std::abs(scaled.moments.at(m) - v) <= 1e-6 * (1.0 + std::abs(v)));
}

TEST_CASE("interior-point solutions have maximal Hankel rank (genericity proxy)") {
    // Final-stage Motzkin instance: quotient basis {1, x, y, xy}.
    std::vector<Polynomial> gens = {parse_polynomial("x^2 - 1", kXY),
                                    parse_polynomial("y^2 - 1", kXY)};
    Completion comp = complete_in_degree(gens, 4);
    Polynomial f = parse_polynomial("1 + x^4*y^2 + x^2*y^4 - 3*x^2*y^2", kXY);
    MomentSDP sdp = assemble(f, comp.basis, comp.family);

    SDPSolution center = solve(sdp);
    REQUIRE(center.status == SolveStatus::Optimal);
    const int center_rank =
        hankel_rank(TruncatedHankel{center.hankel, comp.basis}, 1e-7);

    // A tiny random tilt pushes the optimum to a vertex of the face.
    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> tilt(-1e-3, 1e-3);
    MomentSDP tilted = sdp;
    for (const auto& m : tilted.moment_monomials)
        tilted.objective.add_term(m, tilt(rng));
    SDPSolution vertex = solve(tilted);
    REQUIRE(vertex.status == SolveStatus::Optimal);
    const int vertex_rank =
        hankel_rank(TruncatedHankel{vertex.hankel, comp.basis}, 1e-7);

    CHECK(center_rank == 4);
    CHECK(center_rank >= vertex_rank);
}

TEST_CASE("SDPA export of the toy problem") {
    MomentSDP sdp = toy_sdp("x^2 - 2*x");
    SdpaProblem out = sdpa_from_lmi(reduce_to_lmi(sdp).lmi);
    CHECK(out.block_sizes == std::vector<int>{2});
    CHECK(out.objective.size() == 2);

    std::ostringstream os;
    write_sdpa(os, out);
    std::istringstream is(os.str());
    SdpaProblem in = read_sdpa(is);
    CHECK(in == out);
}

TEST_CASE("SDPA round trip through a file is exact") {
    MotzkinStage stage = motzkin_stage(3);
    const std::string path = (std::filesystem::temp_directory_path() /
                              "polymin_sdpa_roundtrip.dat-s").string();
    export_sdpa(stage.sdp, path);
    SdpaProblem in = import_sdpa(path);
    SdpaProblem expected = sdpa_from_lmi(reduce_to_lmi(stage.sdp).lmi);
    CHECK(in == expected);
    std::filesystem::remove(path);
}

TEST_CASE("SDPA parser rejects malformed input") {
    auto parse = [](const char* text) {
        std::istringstream is(text);
        return read_sdpa(is);
    };
    CHECK_THROWS_AS(parse("2\n0\n\n1 1\n"), SdpaParseError);              // nblocks = 0
    CHECK_THROWS_AS(parse("1\n1\n2\n1.0\n1 1 1\n"), SdpaParseError);       // bad entry line
    CHECK_THROWS_AS(parse("1\n1\n2\n1\n1 1 3 3 1.0\n"), SdpaParseError);  // out of range
    CHECK_THROWS_AS(parse(""), SdpaParseError);
    // comments and punctuation are tolerated
    SdpaProblem p = parse("\"comment\n2\n1\n{2}\n1.0, -1.0\n0 1 1 2 0.5\n");
    CHECK(p.block_sizes == std::vector<int>{2});
    CHECK(p.entries.size() == 1);
}

TEST_CASE("imported problems convert to a dense LMI") {
    std::istringstream is("1\n2\n2 -1\n1.5\n0 1 1 1 1\n1 2 1 1 2\n");
    SdpaProblem p = read_sdpa(is);
    LmiProblem lmi = lmi_from_sdpa(p);
    CHECK(lmi.dim() == 3);
    CHECK(lmi.vars() == 1);
    CHECK(lmi.F0(0, 0) == -1.0); // SDPA F_0 enters negated
    CHECK(lmi.F[0](2, 2) == 2.0);
}
