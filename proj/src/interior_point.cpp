#include "polymin/interior_point.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "polymin/errors.hpp"

namespace polymin {

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::GapDetected: return "gap";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::IterationLimit: return "iteration-limit";
    }
    return "unknown";
}

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

/// Largest step length alpha <= 1 with M + alpha*D staying positive definite,
/// damped by `fraction`.
double max_step(const Eigen::MatrixXd& m, const Eigen::MatrixXd& d, double fraction) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    Eigen::MatrixXd k;
    if (llt.info() == Eigen::Success) {
        const Eigen::MatrixXd l = llt.matrixL();
        k = l.triangularView<Eigen::Lower>().solve(d).transpose();
        k = l.triangularView<Eigen::Lower>().solve(k);
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(m);
        const double floor = 1e-14 * std::max(em.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
        const Eigen::VectorXd inv_sqrt =
            em.eigenvalues().cwiseMax(floor).cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd mi =
            em.eigenvectors() * inv_sqrt.asDiagonal() * em.eigenvectors().transpose();
        k = mi * d * mi;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(k));
    const double lambda_min = es.eigenvalues().minCoeff();
    if (lambda_min >= 0.0) return 1.0;
    return std::min(1.0, -fraction / lambda_min);
}

struct NtScaling {
    Eigen::MatrixXd w;
    Eigen::MatrixXd w_half;
    Eigen::MatrixXd w_half_inv;
    Eigen::MatrixXd v;        // w^{1/2} S w^{1/2} == w^{-1/2} X w^{-1/2}
    Eigen::MatrixXd v_vecs;   // eigenvectors of v
    Eigen::VectorXd v_vals;   // eigenvalues of v (positive)
};

// Eigenvalues are clamped at a relative floor so near-singular iterates
// keep producing usable directions instead of aborting the run.
Eigen::VectorXd clamped(const Eigen::VectorXd& values, double rel_floor) {
    const double floor = rel_floor * std::max(values.cwiseAbs().maxCoeff(), 1e-300);
    return values.cwiseMax(floor);
}

NtScaling compute_scaling(const Eigen::MatrixXd& x, const Eigen::MatrixXd& s) {
    NtScaling nt;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(x);
    if (ex.info() != Eigen::Success)
        throw NumericalError("interior-point iterate eigendecomposition failed");
    const Eigen::VectorXd xv = clamped(ex.eigenvalues(), 1e-14);
    const Eigen::MatrixXd g =
        ex.eigenvectors() * xv.cwiseSqrt().asDiagonal() * ex.eigenvectors().transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(g * s * g));
    if (es.info() != Eigen::Success)
        throw NumericalError("Nesterov-Todd scaling breakdown");
    const Eigen::VectorXd d_isqrt = clamped(es.eigenvalues(), 1e-16).cwiseSqrt().cwiseInverse();
    nt.w = symmetrized(g * es.eigenvectors() * d_isqrt.asDiagonal() *
                       es.eigenvectors().transpose() * g);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ew(nt.w);
    if (ew.info() != Eigen::Success)
        throw NumericalError("Nesterov-Todd scaling is not positive definite");
    const Eigen::VectorXd sq = clamped(ew.eigenvalues(), 1e-16).cwiseSqrt();
    nt.w_half = ew.eigenvectors() * sq.asDiagonal() * ew.eigenvectors().transpose();
    nt.w_half_inv =
        ew.eigenvectors() * sq.cwiseInverse().asDiagonal() * ew.eigenvectors().transpose();

    nt.v = symmetrized(nt.w_half * s * nt.w_half);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev(nt.v);
    if (ev.info() != Eigen::Success)
        throw NumericalError("scaled-space eigendecomposition failed");
    nt.v_vecs = ev.eigenvectors();
    nt.v_vals = clamped(ev.eigenvalues(), 1e-16);
    return nt;
}

/// Solve (V U + U V)/2 = r in the eigenbasis of V.
Eigen::MatrixXd lyapunov_solve(const NtScaling& nt, const Eigen::MatrixXd& r) {
    Eigen::MatrixXd rt = nt.v_vecs.transpose() * r * nt.v_vecs;
    for (Eigen::Index i = 0; i < rt.rows(); ++i)
        for (Eigen::Index j = 0; j < rt.cols(); ++j)
            rt(i, j) *= 2.0 / (nt.v_vals[i] + nt.v_vals[j]);
    return nt.v_vecs * rt * nt.v_vecs.transpose();
}

struct Direction {
    Eigen::VectorXd dx;
    Eigen::MatrixXd dX;
    Eigen::MatrixXd dS;
};

} // namespace

IpmResult solve_lmi(const LmiProblem& problem, const IpmOptions& options) {
    const int nb = problem.dim();
    const int m = problem.vars();
    if (static_cast<int>(problem.F.size()) != m)
        throw Error("LMI problem has inconsistent variable count");

    IpmResult result;
    result.x = Eigen::VectorXd::Zero(m);

    const Eigen::MatrixXd f0 = symmetrized(problem.F0);
    std::vector<Eigen::MatrixXd> fs(problem.F.size());
    for (std::size_t j = 0; j < problem.F.size(); ++j) fs[j] = symmetrized(problem.F[j]);

    // No variables: pure feasibility of F0.
    if (m == 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f0);
        const double emin = nb > 0 ? es.eigenvalues().minCoeff() : 0.0;
        result.S = f0;
        result.X = Eigen::MatrixXd::Zero(nb, nb);
        result.primal_objective = problem.objective_constant;
        result.dual_objective = problem.objective_constant;
        result.status = emin >= -options.tol_feasibility * std::max(1.0, f0.norm())
                            ? SolveStatus::Optimal
                            : SolveStatus::Infeasible;
        return result;
    }

    double fnorm_max = f0.norm();
    for (const auto& f : fs) fnorm_max = std::max(fnorm_max, f.norm());
    const double c_norm = problem.c.norm();

    // Cold start on the central ray.
    double xi = std::max({10.0, std::sqrt(static_cast<double>(nb))});
    for (int j = 0; j < m; ++j)
        xi = std::max(xi, static_cast<double>(nb) * (1.0 + std::abs(problem.c[j])) /
                              (1.0 + fs[static_cast<std::size_t>(j)].norm()));
    const double eta = std::max({10.0, std::sqrt(static_cast<double>(nb)), fnorm_max});
    Eigen::MatrixXd X = xi * Eigen::MatrixXd::Identity(nb, nb);
    Eigen::MatrixXd S = eta * Eigen::MatrixXd::Identity(nb, nb);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);

    const auto record = [&](int iter) {
        result.x = x;
        result.X = X;
        result.S = S;
        result.iterations = iter;
        result.primal_objective = problem.c.dot(x) + problem.objective_constant;
        result.dual_objective = -(f0.array() * X.array()).sum() + problem.objective_constant;
        result.gap = (X.array() * S.array()).sum();
    };

    // End-state classification when full convergence is out of reach.
    const auto classify = [&](double feas_lmi, double feas_dual, double pobj) -> SolveStatus {
        if (feas_lmi <= 1e-5 && pobj < -1e9 * (1.0 + c_norm)) return SolveStatus::Unbounded;
        if (feas_lmi > 1e-5 && feas_dual <= 1e-6) return SolveStatus::Infeasible;
        return SolveStatus::IterationLimit;
    };

    std::vector<double> mu_history;
    int tiny_steps = 0;

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        // Residuals.
        Eigen::MatrixXd lmi = f0;
        for (int j = 0; j < m; ++j) lmi += x[j] * fs[static_cast<std::size_t>(j)];
        const Eigen::MatrixXd rd = lmi - S; // want S = F0 + Σ x F
        Eigen::VectorXd rp(m);
        for (int j = 0; j < m; ++j)
            rp[j] = problem.c[j] - (fs[static_cast<std::size_t>(j)].array() * X.array()).sum();

        const double mu = (X.array() * S.array()).sum() / nb;
        const double pobj = problem.c.dot(x) + problem.objective_constant;
        const double dobj = -(f0.array() * X.array()).sum() + problem.objective_constant;
        const double feas_lmi = rd.norm() / (1.0 + fnorm_max);
        const double feas_dual = rp.norm() / (1.0 + c_norm);
        const double rel_gap = (X.array() * S.array()).sum() / (1.0 + std::abs(pobj) + std::abs(dobj));

        record(iter - 1);
        result.feas_lmi = feas_lmi;
        result.feas_dual = feas_dual;
        mu_history.push_back(mu);

        if (options.trace)
            (*options.trace) << "iter " << iter - 1 << " mu " << mu << " pobj " << pobj
                             << " dobj " << dobj << " feas_lmi " << feas_lmi << " feas_dual "
                             << feas_dual << " |X| " << X.norm() << " |x| " << x.norm()
                             << " |S| " << S.norm() << "\n";

        if (feas_lmi <= options.tol_feasibility && feas_dual <= options.tol_feasibility &&
            rel_gap <= options.tol_complementarity) {
            result.status = SolveStatus::Optimal;
            return result;
        }

        // Divergence-based classification.
        if (feas_lmi <= 1e-6 && pobj < -1e9 * (1.0 + c_norm)) {
            result.status = SolveStatus::Unbounded;
            return result;
        }
        if ((X.norm() / nb > 1e12 && feas_lmi <= 1e-6) ||
            (S.norm() / nb > 1e12 && feas_dual <= 1e-6)) {
            result.status = classify(feas_lmi, feas_dual, pobj);
            return result;
        }

        // Stall: complementarity not shrinking over a long window.
        const std::size_t window = 30;
        const bool mu_stuck = mu_history.size() > window &&
                              mu > 0.5 * mu_history[mu_history.size() - 1 - window];
        if (mu_stuck || tiny_steps >= 5 || iter == options.max_iterations) {
            result.status = classify(feas_lmi, feas_dual, pobj);
            return result;
        }

        NtScaling nt;
        try {
            nt = compute_scaling(X, S);
        } catch (const NumericalError&) {
            result.status = classify(feas_lmi, feas_dual, pobj);
            return result;
        }

        // Schur complement B_jk = ⟨F_j, W F_k W⟩ (positive definite).
        std::vector<Eigen::MatrixXd> wfw(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
            wfw[static_cast<std::size_t>(j)] =
                symmetrized(nt.w * fs[static_cast<std::size_t>(j)] * nt.w);
        Eigen::MatrixXd schur(m, m);
        for (int j = 0; j < m; ++j)
            for (int k = j; k < m; ++k) {
                const double v =
                    (fs[static_cast<std::size_t>(j)].array() * wfw[static_cast<std::size_t>(k)].array())
                        .sum();
                schur(j, k) = v;
                schur(k, j) = v;
            }
        Eigen::LLT<Eigen::MatrixXd> schur_llt(schur);
        {
            double reg = 1e-13 * (1.0 + schur.diagonal().maxCoeff());
            int tries = 0;
            while (schur_llt.info() != Eigen::Success && tries < 8) {
                schur_llt.compute(schur + reg * Eigen::MatrixXd::Identity(m, m));
                reg *= 100.0;
                ++tries;
            }
            if (schur_llt.info() != Eigen::Success) {
                result.status = SolveStatus::IterationLimit;
                return result;
            }
        }

        const Eigen::MatrixXd wrdw = symmetrized(nt.w * rd * nt.w);
        auto solve_direction = [&](const Eigen::MatrixXd& v_rhs) {
            Direction dir;
            Eigen::VectorXd q(m);
            for (int j = 0; j < m; ++j)
                q[j] = ((v_rhs - wrdw).array() * fs[static_cast<std::size_t>(j)].array()).sum() -
                       rp[j];
            dir.dx = schur_llt.solve(q);
            dir.dS = rd;
            for (int j = 0; j < m; ++j) dir.dS += dir.dx[j] * fs[static_cast<std::size_t>(j)];
            dir.dS = symmetrized(dir.dS);
            dir.dX = symmetrized(v_rhs - nt.w * dir.dS * nt.w);
            return dir;
        };

        // Predictor.
        Direction aff = solve_direction(-X);
        const double alpha_aff = max_step(X, aff.dX, 1.0);
        const double beta_aff = max_step(S, aff.dS, 1.0);
        const double mu_aff = ((X + alpha_aff * aff.dX).array() *
                               (S + beta_aff * aff.dS).array())
                                  .sum() /
                              nb;
        double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
        sigma = std::min(1.0, std::max(sigma, 1e-8));

        // Corrector with the scaled second-order term.
        const Eigen::MatrixXd dxh = nt.w_half_inv * aff.dX * nt.w_half_inv;
        const Eigen::MatrixXd dsh = nt.w_half * aff.dS * nt.w_half;
        const Eigen::MatrixXd rhat =
            sigma * mu * Eigen::MatrixXd::Identity(nb, nb) - nt.v * nt.v -
            symmetrized(dxh * dsh);
        const Eigen::MatrixXd v_rhs =
            symmetrized(nt.w_half * lyapunov_solve(nt, rhat) * nt.w_half);
        Direction dir = solve_direction(v_rhs);

        const double alpha = std::min(1.0, options.step_fraction * max_step(X, dir.dX, 1.0));
        const double beta = std::min(1.0, options.step_fraction * max_step(S, dir.dS, 1.0));
        tiny_steps = (alpha < 1e-9 && beta < 1e-9) ? tiny_steps + 1 : 0;
        if (options.trace)
            (*options.trace) << "   alpha " << alpha << " beta " << beta << " sigma " << sigma
                             << " aff " << alpha_aff << "/" << beta_aff << "\n";

        X = symmetrized(X + alpha * dir.dX);
        x += beta * dir.dx;
        S = symmetrized(S + beta * dir.dS);
    }

    result.status = SolveStatus::IterationLimit;
    return result;
}

} // namespace polymin
