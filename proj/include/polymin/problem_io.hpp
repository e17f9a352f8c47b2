#pragma once

#include <map>
#include <string>
#include <vector>

#include "polymin/minimizer.hpp"
#include "polymin/polynomial.hpp"

namespace polymin {

/// Line-oriented problem description:
///   vars: x, y
///   minimize: <expression>
///   option <name> = <value>      (t_max, seed, tol_rank, tol_gap, tol_min,
///                                 eps_pivot)
/// '#' starts a comment; vars must precede minimize.
struct ProblemFile {
    std::vector<std::string> vars;
    std::string objective_text;
    Polynomial objective;
    std::map<std::string, std::string> options;
};

ProblemFile parse_problem_file(const std::string& text);
ProblemFile load_problem_file(const std::string& path);

/// Fold `option` lines into solver options; unknown names are an error.
void apply_problem_options(const ProblemFile& problem, MinimizeOptions& options);

struct ResultDocument {
    std::string problem_path;
    std::vector<std::string> vars;
    std::string objective_text;
    std::string status; // converged | degree-limit | bound
    bool gap = false;   // for bound documents
    double minimum = 0.0;
    std::vector<std::string> quotient_basis;
    std::vector<std::string> generators;
    std::vector<std::vector<double>> points;
    std::vector<PointCertificate> certificates;
    std::vector<IterationRecord> trace;
};

ResultDocument make_result_document(const std::string& problem_path, const ProblemFile& problem,
                                    const MinimizerResult& result);

std::string to_text(const ResultDocument& doc);
std::string to_json(const ResultDocument& doc);

/// Accepts both the text and the JSON form.
ResultDocument parse_result_document(const std::string& content);

struct CheckReport {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Independent re-verification: f, its gradient and every generator are
/// re-evaluated at the recorded points and compared against the recorded
/// minimum at the stated tolerances.
CheckReport check_result(const ResultDocument& doc, const ProblemFile& problem);

} // namespace polymin
