#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polymin/errors.hpp"
#include "polymin/root_extraction.hpp"
#include "polymin/sdp.hpp"

namespace polymin {

struct MinimizeOptions {
    /// Degree escalation stops here; most problems finish within a few steps.
    int t_max = 12;
    /// Two objectives count as equal within tol_min * (1 + |objective|).
    double tol_min = 1e-6;
    /// Hankel rank/kernel threshold.
    double tau_rank = 1e-7;
    /// Border-basis completion pivot threshold.
    double eps_pivot = 1e-9;
    /// Noise floor for completions that consume SDP kernel polynomials
    /// (their coefficients carry solver-level noise).
    double kernel_zero_tol = 1e-7;
    /// Feeds only the eigenvalue extraction.
    std::uint64_t seed = 0;
    /// Newton-refine the recovered points on the gradient system and
    /// rebuild the final border basis from the refined points.
    bool polish = true;
    SdpSolveOptions sdp;
    ExtractOptions extract;
    /// When set, every solved SDP is written here as solve_NNN.dat-s.
    std::string dump_sdpa_dir;
};

struct IterationRecord {
    int t = 0;
    int hankel_size = 0;
    double objective = 0.0;
    bool gap = false;
    /// -1 when no kernel was computed at this solve.
    int kernel_dim = -1;
    double wall_ms = 0.0;
};

struct MinimizerResult {
    double minimum = 0.0;
    MonomialBasis quotient_basis;
    RewritingFamily border_basis;
    std::vector<Eigen::VectorXd> points;
    std::vector<PointCertificate> certificates;
    std::vector<IterationRecord> trace;
};

/// Raised when the degree limit is hit; the best certified (gap-free)
/// lower bound found so far is still valid.
class DegreeLimitError : public Error {
public:
    DegreeLimitError(const std::string& what, std::optional<double> best_bound,
                     std::vector<IterationRecord> trace)
        : Error(what), best_lower_bound(best_bound), trace(std::move(trace)) {}
    std::optional<double> best_lower_bound;
    std::vector<IterationRecord> trace;
};

/// Global minimization of f: degree escalation over moment relaxations of
/// the gradient ideal, kernel harvesting into a border basis, and the
/// flat-extension stopping test; minimizers recovered by the eigenvalue
/// method. Requires f non-constant, attaining its minimum on real space
/// with a zero-dimensional minimizer ideal (otherwise the degree limit is
/// reached and DegreeLimitError is thrown).
MinimizerResult minimize(const Polynomial& f, const MinimizeOptions& options = {});

struct BoundResult {
    double lower_bound = 0.0;
    bool gap = false;
    IterationRecord record;
};

/// One fixed-degree relaxation solve; the result is a certified lower
/// bound for the global minimum when no gap is flagged.
BoundResult lower_bound_at_degree(const Polynomial& f, int t,
                                  const MinimizeOptions& options = {});

} // namespace polymin
