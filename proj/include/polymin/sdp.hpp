#pragma once

#include <vector>

#include "polymin/border_basis.hpp"
#include "polymin/interior_point.hpp"
#include "polymin/moment.hpp"

namespace polymin {

/// Moment minimization problem on a monomial basis M:
///   minimize Σ f_α λ_α  s.t.  H(λ) = (λ_{α+β}) ⪰ 0,  λ_0 = 1,  Λ(g) = 0.
///
/// Hankel symmetry is structural: there is one scalar unknown per distinct
/// exponent sum in M·M, so the only explicit equalities are λ_0 = 1 and the
/// listed constraints.
struct MomentSDP {
    MonomialBasis basis;                          // rows/columns of H
    std::vector<Monomial> moment_monomials;       // M·M, graded-lex ascending
    Polynomial objective;                          // support inside M·M
    std::vector<Polynomial> equality_constraints;  // each g with Λ(g) = 0

    int n_vars() const { return basis.n_vars(); }
    int hankel_size() const { return basis.size(); }
};

/// Instantiation used by the minimizer loop: G = { b - π(b) : b ∈ B·B }.
/// The objective is rewritten through π when its support exceeds M·M;
/// throws AssembleError if it still does not fit.
MomentSDP assemble(const Polynomial& f, const MonomialBasis& basis,
                   const RewritingFamily& family);

/// Raw form: keeps exactly the given constraints that fit inside M·M.
MomentSDP assemble(const Polynomial& f, const MonomialBasis& basis,
                   const std::vector<Polynomial>& constraints);

/// The SDP with λ_0 and the equality constraints eliminated:
/// λ = particular + null_basis · u, leaving min c·u s.t. F0 + Σ u_j F_j ⪰ 0.
struct MomentLmi {
    LmiProblem lmi;
    std::vector<Monomial> monomials;
    Eigen::VectorXd particular;
    Eigen::MatrixXd null_basis;
    bool consistent = true;
};

MomentLmi reduce_to_lmi(const MomentSDP& sdp);

struct SdpSolveOptions {
    IpmOptions ipm;
    /// Every solve adjoins a trace budget tr H ≤ R. Relaxations without a
    /// certified optimum drift along objective-decreasing curves of growing
    /// trace; the budget compactifies the feasible set so the interior-point
    /// method converges to a certified optimum at every rung. The solve
    /// exits at the first rung whose budget carries no shadow price
    /// (certified inactive, hence the true relaxation value).
    std::vector<double> trace_budgets = {1e5, 1e7};
    /// Final rung used when every smaller budget stays price-active; the
    /// result is then reported with status GapDetected.
    double gap_trace_budget = 7.9e8;
    /// Budget activity test: budget · price > tol_shadow · (1 + |obj|).
    double tol_shadow = 1e-2;
    /// Value-gap threshold |primal - dual| ≤ tol_gap · (1 + |primal|).
    double tol_gap = 1e-4;
};

struct SDPSolution {
    SolveStatus status;
    MomentVector moments;
    double primal_objective = 0.0; // moment side
    double dual_objective = 0.0;   // certificate side
    double duality_gap = 0.0;
    int iterations = 0;
    Eigen::MatrixXd hankel; // H(λ*)
};

SDPSolution solve(const MomentSDP& sdp, const SdpSolveOptions& options = {});

} // namespace polymin
