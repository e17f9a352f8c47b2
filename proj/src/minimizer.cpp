#include "polymin/minimizer.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "polymin/errors.hpp"
#include "polymin/sdpa_io.hpp"

namespace polymin {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct SdpaDumper {
    std::string dir;
    int counter = 0;

    void dump(const MomentSDP& sdp) {
        if (dir.empty()) return;
        std::filesystem::create_directories(dir);
        char name[32];
        std::snprintf(name, sizeof(name), "solve_%03d.dat-s", counter++);
        export_sdpa(sdp, (std::filesystem::path(dir) / name).string());
    }
};

std::vector<Polynomial> normalized_gradient(const Polynomial& f) {
    std::vector<Polynomial> pool;
    for (auto& g : gradient(f).parts) {
        Polynomial p = g;
        p.prune();
        if (!p.is_zero()) pool.push_back(p * (1.0 / p.max_abs_coeff()));
    }
    return pool;
}

/// Newton iteration on the gradient system; returns the input point when
/// the iteration fails to improveit.
Eigen::VectorXd newton_refine(const std::vector<Polynomial>& grad,
                              const std::vector<std::vector<Polynomial>>& hessian,
                              Eigen::VectorXd z) {
    const int n = static_cast<int>(grad.size());
    const Eigen::VectorXd original = z;
    auto grad_norm = [&](const Eigen::VectorXd& point) {
        double norm = 0.0;
        for (const auto& g : grad) norm = std::max(norm, std::abs(g.evaluate(point)));
        return norm;
    };
    const double start_norm = grad_norm(z);
    double best_norm = start_norm;
    for (int iter = 0; iter < 25; ++iter) {
        Eigen::VectorXd g(n);
        for (int i = 0; i < n; ++i) g[i] = grad[static_cast<std::size_t>(i)].evaluate(z);
        if (g.cwiseAbs().maxCoeff() < 1e-14 * (1.0 + z.norm())) break;
        Eigen::MatrixXd jac(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                jac(i, j) = hessian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                                .evaluate(z);
        Eigen::VectorXd step = jac.partialPivLu().solve(-g);
        if (!step.allFinite() || step.norm() > 0.5 * (1.0 + z.norm())) break;
        const Eigen::VectorXd trial = z + step;
        const double trial_norm = grad_norm(trial);
        if (trial_norm >= best_norm) break;
        z = trial;
        best_norm = trial_norm;
    }
    // Only accept genuine refinements of a nearby critical point.
    if ((z - original).norm() > 0.05 * (1.0 + original.norm()) || best_norm > start_norm)
        return original;
    return z;
}

struct MainSolve {
    Completion completion;
    MonomialBasis basis_t;
    std::optional<SDPSolution> solution;
    IterationRecord record;
};

MainSolve run_main_solve(const Polynomial& f, const std::vector<Polynomial>& gen_pool, int t,
                         const MinimizeOptions& options, SdpaDumper& dumper) {
    const auto start = Clock::now();
    CompletionOptions comp_opts{options.eps_pivot, 1e-12};
    Completion comp = complete_in_degree(gen_pool, 2 * t, comp_opts);
    MonomialBasis bt = comp.basis.restricted_to_degree(t);

    MainSolve out{std::move(comp), std::move(bt), std::nullopt, IterationRecord{}};
    out.record.t = t;
    out.record.hankel_size = out.basis_t.size();
    try {
        MomentSDP sdp = assemble(f, out.basis_t, out.completion.family);
        dumper.dump(sdp);
        out.solution = solve(sdp, options.sdp);
        out.record.objective = out.solution->primal_objective;
        out.record.gap = out.solution->status != SolveStatus::Optimal;
    } catch (const AssembleError&) {
        // Objective not representable at this degree: escalate like a gap.
        out.record.objective = std::numeric_limits<double>::quiet_NaN();
        out.record.gap = true;
    }
    out.record.wall_ms = ms_since(start);
    return out;
}

struct TerminalState {
    Completion completion;
    SDPSolution solution;
};

} // namespace

MinimizerResult minimize(const Polynomial& f, const MinimizeOptions& options) {
    if (f.degree() <= 0)
        throw Error("minimize requires a non-constant objective");
    // F starts from the gradient and grows monotonically: every harvested
    // kernel polynomial stays in the generator pool.
    std::vector<Polynomial> gen_pool = normalized_gradient(f);
    SdpaDumper dumper{options.dump_sdpa_dir};

    std::vector<IterationRecord> trace;
    std::optional<double> f_tilde;
    double f_tilde_accuracy = 0.0;
    std::optional<double> best_bound;
    std::optional<TerminalState> terminal;
    int t_final = 0;

    // Two relaxation values count as equal up to the requested tolerance
    // plus the certified accuracy of both solves.
    const auto values_equal = [&](double a, double a_accuracy, double b, double b_accuracy) {
        return std::abs(a - b) <=
               options.tol_min * (1.0 + std::abs(a)) + a_accuracy + b_accuracy;
    };
    const auto accuracy_of = [](const SDPSolution& sol) {
        return std::abs(sol.duality_gap);
    };

    for (int t = (f.degree() + 1) / 2; t <= options.t_max && !terminal; ++t) {
        MainSolve main = run_main_solve(f, gen_pool, t, options, dumper);

        // (4a) duality gap, infeasible or unbounded relaxation: next degree.
        if (!main.solution || main.record.gap) {
            trace.push_back(main.record);
            continue;
        }
        const double objective = main.solution->primal_objective;
        best_bound = best_bound ? std::max(*best_bound, objective) : objective;

        // (4b) a new minimum: remember it and escalate.
        if (!f_tilde ||
            !values_equal(objective, accuracy_of(*main.solution), *f_tilde, f_tilde_accuracy)) {
            f_tilde = objective;
            f_tilde_accuracy = accuracy_of(*main.solution);
            trace.push_back(main.record);
            continue;
        }

        // (4c) harvest the Hankel kernel one degree down into the generator
        // pool. Kernel membership must hold against the full-size Hankel
        // form, not just the harvested block; directions that fail are
        // dropped.
        const auto harvest = [&](const MomentVector& moments, const MonomialBasis& block,
                                 const MonomialBasis& full_basis) {
            std::vector<Polynomial> kernel =
                hankel_kernel(build_hankel(moments, block), options.tau_rank);
            const TruncatedHankel full = build_hankel(moments, full_basis);
            const double moment_scale = std::max(1.0, full.matrix.cwiseAbs().maxCoeff());
            int kept = 0;
            for (auto& k : kernel) {
                double residual = 0.0;
                for (int q = 0; q < full_basis.size(); ++q)
                    residual = std::max(
                        residual, std::abs(moments.apply(k.times_monomial(full_basis[q]))));
                if (residual > 10.0 * options.tau_rank * moment_scale) continue;
                k.prune();
                if (k.is_zero()) continue;
                gen_pool.push_back(k * (1.0 / k.max_abs_coeff()));
                ++kept;
            }
            return kept;
        };

        auto start = Clock::now();
        const MonomialBasis basis_down = main.completion.basis.restricted_to_degree(t - 1);
        main.record.kernel_dim = harvest(main.solution->moments, basis_down, main.basis_t);
        trace.push_back(main.record);

        // (4c-4f) rebuild the border basis and re-solve; each pass feeds the
        // kernel of the re-solve back into the pool until either the kernel
        // is trivial (flat extension: stop) or no progress is possible at
        // this degree.
        const int max_passes = 6;
        for (int pass = 0; pass < max_passes && !terminal; ++pass) {
            CompletionOptions harvest_opts{options.eps_pivot, options.kernel_zero_tol};
            std::optional<Completion> reduced_opt;
            try {
                reduced_opt = complete_in_degree(gen_pool, 2 * (t - 1), harvest_opts);
            } catch (const Error&) {
                break; // inconsistent harvest: escalate the degree
            }
            Completion& reduced = *reduced_opt;

            // (4d) basis not yet closed below the current degree: escalate.
            if (reduced.basis.max_degree() >= t - 1) break;

            // (4e) re-solve on the reduced basis.
            IterationRecord rec2;
            rec2.t = t;
            rec2.hankel_size = reduced.basis.size();
            std::optional<SDPSolution> sol2;
            try {
                MomentSDP sdp2 = assemble(f, reduced.basis, reduced.family);
                dumper.dump(sdp2);
                sol2 = solve(sdp2, options.sdp);
                rec2.objective = sol2->primal_objective;
                rec2.gap = sol2->status != SolveStatus::Optimal;
            } catch (const AssembleError&) {
                rec2.objective = std::numeric_limits<double>::quiet_NaN();
                rec2.gap = true;
            }
            if (!sol2 || rec2.gap) {
                rec2.wall_ms = ms_since(start);
                trace.push_back(rec2);
                break;
            }

            // (4f) same minimum and trivial kernel: accept.
            const double noise =
                check_border_basis(reduced.family, 2 * (t - 1)).max_residual;
            const double tol_extra = 50.0 * noise + accuracy_of(*sol2) + f_tilde_accuracy;
            const bool same_minimum =
                std::abs(rec2.objective - *f_tilde) <=
                options.tol_min * (1.0 + std::abs(rec2.objective)) + tol_extra;
            int new_info = 0;
            if (same_minimum) {
                std::vector<Polynomial> kernel2 = hankel_kernel(
                    build_hankel(sol2->moments, reduced.basis.restricted_to_degree(t - 1)),
                    options.tau_rank);
                rec2.kernel_dim = static_cast<int>(kernel2.size());
                if (kernel2.empty()) {
                    terminal = TerminalState{std::move(reduced), std::move(*sol2)};
                    t_final = t;
                } else {
                    new_info = harvest(sol2->moments,
                                       reduced.basis.restricted_to_degree(t - 1), reduced.basis);
                }
            }
            rec2.wall_ms = ms_since(start);
            trace.push_back(rec2);
            start = Clock::now();
            if (!same_minimum || (!terminal && new_info == 0)) break;
        }
    }

    if (!terminal)
        throw DegreeLimitError("degree limit reached without flat-extension termination",
                               best_bound, trace);

    // Recover the minimizers.
    MultiplicationMatrices mm = build_multiplication_matrices(terminal->completion.family);
    std::vector<Eigen::VectorXd> points = extract_points(mm, options.seed, options.extract);
    double minimum = terminal->solution.primal_objective;
    Completion final_completion = std::move(terminal->completion);

    if (options.polish && !points.empty()) {
        // Newton-refine each point on the gradient system, then rebuild the
        // border basis from the kernel of the exact atomic moment matrix.
        std::vector<Polynomial> grad;
        std::vector<std::vector<Polynomial>> hessian;
        for (int i = 0; i < f.n_vars(); ++i) {
            grad.push_back(f.derivative(i));
            hessian.emplace_back();
            for (int j = 0; j < f.n_vars(); ++j)
                hessian.back().push_back(grad.back().derivative(j));
        }
        std::vector<Eigen::VectorXd> refined;
        for (const auto& z : points) refined.push_back(newton_refine(grad, hessian, z));

        bool distinct = true;
        for (std::size_t i = 0; i < refined.size() && distinct; ++i)
            for (std::size_t j = i + 1; j < refined.size(); ++j)
                if ((refined[i] - refined[j]).norm() <=
                    options.extract.tol_dedup * (1.0 + refined[j].norm())) {
                    distinct = false;
                    break;
                }

        if (distinct) {
            try {
                const MonomialBasis plus = final_completion.basis.prolonged();
                std::vector<double> weights(refined.size(), 1.0 / refined.size());
                MomentVector atomic = MomentVector::mixture(plus, refined, weights);
                std::vector<Polynomial> exact_kernel =
                    hankel_kernel(build_hankel(atomic, plus), 1e-9);
                Completion polished = complete_in_degree(
                    exact_kernel, 2 * (t_final - 1), CompletionOptions{options.eps_pivot, 1e-10});
                if (polished.basis == final_completion.basis) {
                    MomentSDP sdp_final = assemble(f, polished.basis, polished.family);
                    SDPSolution sol_final = solve(sdp_final, options.sdp);
                    std::vector<Eigen::VectorXd> repoints = extract_points(
                        build_multiplication_matrices(polished.family), options.seed,
                        options.extract);
                    if (sol_final.status == SolveStatus::Optimal &&
                        repoints.size() == points.size()) {
                        final_completion = std::move(polished);
                        minimum = sol_final.primal_objective;
                        points = std::move(repoints);
                    }
                }
            } catch (const Error&) {
                // Polishing is best-effort; the unpolished family stands.
            }
        }
    }

    std::vector<PointCertificate> certificates = certify(points, f, final_completion.family);
    return MinimizerResult{minimum,
                           final_completion.basis,
                           std::move(final_completion.family),
                           std::move(points),
                           std::move(certificates),
                           std::move(trace)};
}

BoundResult lower_bound_at_degree(const Polynomial& f, int t, const MinimizeOptions& options) {
    if (f.degree() <= 0) throw Error("lower bound requires a non-constant objective");
    if (t < (f.degree() + 1) / 2)
        throw Error("relaxation degree must be at least ceil(deg(f)/2)");
    SdpaDumper dumper{options.dump_sdpa_dir};
    const std::vector<Polynomial> gen_pool = normalized_gradient(f);
    MainSolve main = run_main_solve(f, gen_pool, t, options, dumper);
    if (!main.solution)
        throw NumericalError("relaxation could not be assembled at this degree");
    if (main.solution->status == SolveStatus::IterationLimit)
        throw NumericalError("SDP solver failed to converge at degree " + std::to_string(t));
    return BoundResult{main.solution->primal_objective, main.record.gap, main.record};
}

} // namespace polymin
