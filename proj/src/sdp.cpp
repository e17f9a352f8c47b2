#include "polymin/sdp.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <map>
#include <set>

#include "polymin/errors.hpp"

namespace polymin {

namespace {

std::vector<Monomial> product_monomials(const MonomialBasis& basis) {
    std::set<Monomial> products;
    for (int i = 0; i < basis.size(); ++i)
        for (int j = i; j < basis.size(); ++j) products.insert(basis[i] * basis[j]);
    return std::vector<Monomial>(products.begin(), products.end());
}

} // namespace

MomentSDP assemble(const Polynomial& f, const MonomialBasis& basis,
                   const RewritingFamily& family) {
    if (!basis.contains(Monomial::one(basis.n_vars())))
        throw AssembleError("moment basis must contain 1");
    MomentSDP sdp{basis, product_monomials(basis), Polynomial(f.n_vars()), {}, };
    std::set<Monomial> span(sdp.moment_monomials.begin(), sdp.moment_monomials.end());

    const int reduce_bound =
        std::max(f.degree(), std::max(2 * basis.max_degree(), family.basis().max_degree()));
    NormalFormTable table(family);

    // Objective: rewrite any term outside the span.
    for (const auto& [m, c] : f.terms()) {
        if (span.count(m)) {
            sdp.objective.add_term(m, c);
            continue;
        }
        Polynomial reduced(f.n_vars());
        try {
            reduced = table.reduce_monomial(m, reduce_bound);
        } catch (const CompletenessError&) {
            throw AssembleError("objective term " + to_string(m) +
                                " is not representable at this degree; increase the degree");
        }
        for (const auto& [rm, rc] : reduced.terms()) {
            if (!span.count(rm))
                throw AssembleError("objective term " + to_string(m) +
                                    " is not representable at this degree; increase the degree");
            sdp.objective.add_term(rm, rc * c);
        }
    }
    sdp.objective.prune();

    // G = { b - pi(b) : b in basis·basis }, kept when it fits the span.
    for (const auto& b : sdp.moment_monomials) {
        if (family.basis().contains(b)) continue;
        Polynomial reduced(f.n_vars());
        try {
            reduced = table.reduce_monomial(b, reduce_bound);
        } catch (const CompletenessError&) {
            continue;
        }
        bool representable = true;
        for (const auto& [rm, rc] : reduced.terms())
            if (!span.count(rm)) {
                representable = false;
                break;
            }
        if (!representable) continue;
        Polynomial g = Polynomial::from_term(b, 1.0) - reduced;
        if (!g.is_zero()) sdp.equality_constraints.push_back(std::move(g));
    }
    return sdp;
}

MomentSDP assemble(const Polynomial& f, const MonomialBasis& basis,
                   const std::vector<Polynomial>& constraints) {
    if (!basis.contains(Monomial::one(basis.n_vars())))
        throw AssembleError("moment basis must contain 1");
    MomentSDP sdp{basis, product_monomials(basis), Polynomial(f.n_vars()), {}};
    std::set<Monomial> span(sdp.moment_monomials.begin(), sdp.moment_monomials.end());
    for (const auto& [m, c] : f.terms()) {
        if (!span.count(m))
            throw AssembleError("objective term " + to_string(m) +
                                " lies outside the moment span");
        sdp.objective.add_term(m, c);
    }
    for (const auto& g : constraints) {
        bool fits = !g.is_zero();
        for (const auto& [m, c] : g.terms())
            if (!span.count(m)) {
                fits = false;
                break;
            }
        if (fits) sdp.equality_constraints.push_back(g);
    }
    return sdp;
}

MomentLmi reduce_to_lmi(const MomentSDP& sdp) {
    const int k = static_cast<int>(sdp.moment_monomials.size());
    const int nb = sdp.basis.size();
    std::map<Monomial, int> index;
    for (int i = 0; i < k; ++i) index.emplace(sdp.moment_monomials[static_cast<std::size_t>(i)], i);

    // Equality system E λ = e: normalization plus the linear constraints.
    const int neq = 1 + static_cast<int>(sdp.equality_constraints.size());
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(neq, k);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(neq);
    E(0, index.at(Monomial::one(sdp.n_vars()))) = 1.0;
    e[0] = 1.0;
    for (std::size_t r = 0; r < sdp.equality_constraints.size(); ++r)
        for (const auto& [m, c] : sdp.equality_constraints[r].terms())
            E(static_cast<int>(r) + 1, index.at(m)) = c;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeFullV | Eigen::ComputeThinU);
    const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    const double cutoff = 1e-12 * std::max(1.0, smax);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > cutoff) ++rank;

    MomentLmi red;
    red.monomials = sdp.moment_monomials;
    Eigen::VectorXd coeff = svd.matrixU().leftCols(rank).transpose() * e;
    coeff.array() /= svd.singularValues().head(rank).array();
    red.particular = svd.matrixV().leftCols(rank) * coeff;
    red.null_basis = svd.matrixV().rightCols(k - rank);
    red.consistent = (E * red.particular - e).norm() <= 1e-8 * (1.0 + e.norm());

    const int m = k - rank;
    auto hankel_of = [&](const Eigen::VectorXd& lambda) {
        Eigen::MatrixXd h(nb, nb);
        for (int i = 0; i < nb; ++i)
            for (int j = i; j < nb; ++j) {
                const double v = lambda[index.at(sdp.basis[i] * sdp.basis[j])];
                h(i, j) = v;
                h(j, i) = v;
            }
        return h;
    };

    Eigen::VectorXd f_vec = Eigen::VectorXd::Zero(k);
    for (const auto& [mono, c] : sdp.objective.terms()) f_vec[index.at(mono)] = c;

    red.lmi.F0 = hankel_of(red.particular);
    red.lmi.F.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) red.lmi.F.push_back(hankel_of(red.null_basis.col(j)));
    red.lmi.c = red.null_basis.transpose() * f_vec;
    red.lmi.objective_constant = f_vec.dot(red.particular);
    return red;
}

SDPSolution solve(const MomentSDP& sdp, const SdpSolveOptions& options) {
    MomentLmi red = reduce_to_lmi(sdp);
    if (!red.consistent) {
        SDPSolution out{SolveStatus::Infeasible,
                        MomentVector(sdp.basis, {}),
                        0.0,
                        0.0,
                        0.0,
                        0,
                        Eigen::MatrixXd()};
        return out;
    }

    // Adjoin a trace budget as an extra diagonal slot:
    // diag(H(λ), R - tr H(λ)) ⪰ 0.
    const int nb = red.lmi.dim();
    const auto run_with_budget = [&](double budget) {
        LmiProblem bounded;
        bounded.c = red.lmi.c;
        bounded.objective_constant = red.lmi.objective_constant;
        bounded.F0 = Eigen::MatrixXd::Zero(nb + 1, nb + 1);
        bounded.F0.topLeftCorner(nb, nb) = red.lmi.F0;
        bounded.F0(nb, nb) = budget - red.lmi.F0.trace();
        bounded.F.reserve(red.lmi.F.size());
        for (const auto& f : red.lmi.F) {
            Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nb + 1, nb + 1);
            g.topLeftCorner(nb, nb) = f;
            g(nb, nb) = -f.trace();
            bounded.F.push_back(std::move(g));
        }
        return solve_lmi(bounded, options.ipm);
    };

    IpmResult ipm;
    bool decided = false;
    for (double budget : options.trace_budgets) {
        ipm = run_with_budget(budget);
        if (ipm.status == SolveStatus::Infeasible || ipm.status == SolveStatus::Unbounded) {
            decided = true;
            break;
        }
        // Accept the rung when the moment side is feasible, the certificate
        // side is close enough to trust its value, the budget carries no
        // price, and the two optimal values agree.
        const double price = ipm.X.rows() == nb + 1 ? std::max(0.0, ipm.X(nb, nb)) : 0.0;
        const double pobj = ipm.primal_objective;
        const bool moment_ok = ipm.feas_lmi <= 100.0 * options.ipm.tol_feasibility;
        const bool dual_ok = ipm.feas_dual <= 1e-4;
        const bool budget_inactive = price * budget <= options.tol_shadow * (1.0 + std::abs(pobj));
        const bool values_agree = std::abs(ipm.primal_objective - ipm.dual_objective) <=
                                  options.tol_gap * (1.0 + std::abs(pobj));
        if (moment_ok && dual_ok && budget_inactive && values_agree) {
            ipm.status = SolveStatus::Optimal;
            decided = true;
            break;
        }
        // Budget-limited or unconverged: escalate.
    }
    if (!decided) {
        // Gap regime: report the value at the reference budget.
        ipm = run_with_budget(options.gap_trace_budget);
        if (ipm.status == SolveStatus::Optimal ||
            (ipm.status == SolveStatus::IterationLimit &&
             ipm.feas_lmi <= 100.0 * options.ipm.tol_feasibility))
            ipm.status = SolveStatus::GapDetected;
    }

    Eigen::VectorXd lambda = red.particular;
    if (ipm.x.size() > 0) lambda += red.null_basis * ipm.x;
    std::map<Monomial, double> values;
    for (std::size_t i = 0; i < red.monomials.size(); ++i)
        values.emplace(red.monomials[i], lambda[static_cast<Eigen::Index>(i)]);
    MomentVector moments(sdp.basis, std::move(values));

    // On an accepted solve the two values agree to solver resolution; the
    // reported certificate-side value is clamped so it never exceeds the
    // moment-side value (conservative estimate of the common optimum).
    const double dual_value = ipm.status == SolveStatus::Optimal
                                  ? std::min(ipm.dual_objective, ipm.primal_objective)
                                  : ipm.dual_objective;
    SDPSolution out{ipm.status,
                    std::move(moments),
                    ipm.primal_objective,
                    dual_value,
                    ipm.primal_objective - dual_value,
                    ipm.iterations,
                    Eigen::MatrixXd()};
    out.hankel = build_hankel(out.moments, sdp.basis).matrix;
    return out;
}

} // namespace polymin
