#pragma once

#include <Eigen/Core>
#include <ostream>
#include <string>
#include <vector>

namespace polymin {

/// Linear matrix inequality problem:  minimize c·x  s.t.  F0 + Σ x_j F_j ⪰ 0.
struct LmiProblem {
    Eigen::VectorXd c;
    Eigen::MatrixXd F0;
    std::vector<Eigen::MatrixXd> F;
    /// Added to both reported objectives.
    double objective_constant = 0.0;

    int dim() const { return static_cast<int>(F0.rows()); }
    int vars() const { return static_cast<int>(c.size()); }
};

enum class SolveStatus { Optimal, GapDetected, Infeasible, Unbounded, IterationLimit };

std::string to_string(SolveStatus status);

struct IpmOptions {
    int max_iterations = 200;
    double tol_feasibility = 1e-8;
    double tol_complementarity = 1e-9;
    /// Relative duality-gap threshold for the GapDetected classification.
    double tol_gap = 1e-4;
    double step_fraction = 0.98;
    /// Per-iteration trace sink (nullptr = silent).
    std::ostream* trace = nullptr;
};

struct IpmResult {
    SolveStatus status = SolveStatus::IterationLimit;
    Eigen::VectorXd x;      // LMI-side variables
    Eigen::MatrixXd S;      // slack F0 + Σ x_j F_j
    Eigen::MatrixXd X;      // multiplier matrix (the certificate side)
    double primal_objective = 0.0; // c·x + constant (the minimization side)
    double dual_objective = 0.0;   // -⟨F0, X⟩ + constant
    double gap = 0.0;              // ⟨X, S⟩
    double feas_lmi = 0.0;
    double feas_dual = 0.0;
    int iterations = 0;
};

/// Primal-dual path-following interior-point method with Nesterov-Todd
/// scaling and a Mehrotra predictor-corrector step. Converges to a point
/// in the relative interior of the optimal face (maximum-rank slack among
/// optimizers).
IpmResult solve_lmi(const LmiProblem& problem, const IpmOptions& options = {});

} // namespace polymin
