// polymin: global polynomial minimization from the command line.
//
// Subcommands:
//   minimize <file>            run the full minimizer on a problem file
//   bound <file> --degree t    one fixed-degree relaxation (lower bound)
//   check <result>             re-verify a previously emitted result
//
// Exit codes: 0 success, 2 parse error, 3 degree limit reached (a document
// with the best lower bound is still emitted), 4 numerical failure,
// 5 failed verification.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "polymin/errors.hpp"
#include "polymin/parser.hpp"
#include "polymin/problem_io.hpp"

using namespace polymin;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitDegreeLimit = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitCheckFailed = 5;

struct OutputOptions {
    std::string out_path;
    bool as_json = false;
};

void emit(const ResultDocument& doc, const OutputOptions& output) {
    const std::string rendered = output.as_json ? to_json(doc) : to_text(doc);
    std::cout << rendered;
    if (!output.out_path.empty()) {
        std::ofstream os(output.out_path);
        if (!os) throw Error("cannot open " + output.out_path + " for writing");
        os << rendered;
    }
}

int run_minimize(const std::string& path, MinimizeOptions options, const OutputOptions& output) {
    ProblemFile problem = load_problem_file(path);
    apply_problem_options(problem, options);

    try {
        MinimizerResult result = minimize(problem.objective, options);
        emit(make_result_document(path, problem, result), output);
        return 0;
    } catch (const DegreeLimitError& e) {
        ResultDocument doc;
        doc.problem_path = path;
        doc.vars = problem.vars;
        doc.objective_text = format_polynomial(problem.objective, problem.vars);
        doc.status = "degree-limit";
        doc.minimum = e.best_lower_bound.value_or(std::numeric_limits<double>::quiet_NaN());
        doc.trace = e.trace;
        emit(doc, output);
        std::cerr << "polymin: " << e.what() << "\n";
        return kExitDegreeLimit;
    }
}

int run_bound(const std::string& path, int degree, MinimizeOptions options,
              const OutputOptions& output) {
    ProblemFile problem = load_problem_file(path);
    apply_problem_options(problem, options);
    BoundResult bound = lower_bound_at_degree(problem.objective, degree, options);

    ResultDocument doc;
    doc.problem_path = path;
    doc.vars = problem.vars;
    doc.objective_text = format_polynomial(problem.objective, problem.vars);
    doc.status = "bound";
    doc.gap = bound.gap;
    doc.minimum = bound.lower_bound;
    doc.trace = {bound.record};
    emit(doc, output);
    return 0;
}

int run_check(const std::string& result_path, const std::string& problem_override) {
    std::ifstream is(result_path);
    if (!is) throw Error("cannot open result document " + result_path);
    std::stringstream buffer;
    buffer << is.rdbuf();
    ResultDocument doc = parse_result_document(buffer.str());

    std::string problem_path = problem_override.empty() ? doc.problem_path : problem_override;
    if (!std::filesystem::exists(problem_path)) {
        // also try next to the result document
        const auto sibling =
            std::filesystem::path(result_path).parent_path() /
            std::filesystem::path(problem_path).filename();
        if (std::filesystem::exists(sibling)) problem_path = sibling.string();
    }
    ProblemFile problem = load_problem_file(problem_path);

    CheckReport report = check_result(doc, problem);
    if (report.ok) {
        std::cout << "check passed: " << doc.points.size() << " point(s), "
                  << doc.generators.size() << " generator(s)\n";
        return 0;
    }
    for (const auto& failure : report.failures) std::cout << "check failed: " << failure << "\n";
    return kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"global polynomial minimization via moment relaxations and border bases"};
    app.require_subcommand(1);

    std::string file;
    int degree = 0;
    std::string problem_override;
    OutputOptions output;
    MinimizeOptions options;

    const auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--t-max", options.t_max, "degree escalation limit");
        cmd->add_option("--seed", options.seed, "seed for the eigenvalue extraction");
        cmd->add_option("--tol-rank", options.tau_rank, "Hankel rank threshold");
        cmd->add_option("--tol-gap", options.sdp.tol_gap, "duality-gap threshold");
        cmd->add_option("--tol-min", options.tol_min, "equal-minima threshold");
        cmd->add_option("--eps-pivot", options.eps_pivot, "completion pivot threshold");
        cmd->add_option("--dump-sdpa", options.dump_sdpa_dir,
                        "directory for SDPA dumps of every solved program");
        cmd->add_option("--out", output.out_path, "write the result document here");
        cmd->add_flag("--json", output.as_json, "emit JSON instead of the text document");
    };

    CLI::App* cmd_minimize = app.add_subcommand("minimize", "compute the global minimum");
    cmd_minimize->add_option("file", file, "problem file")->required();
    add_solver_flags(cmd_minimize);

    CLI::App* cmd_bound = app.add_subcommand("bound", "one fixed-degree lower bound");
    cmd_bound->add_option("file", file, "problem file")->required();
    cmd_bound->add_option("--degree", degree, "relaxation degree t")->required();
    add_solver_flags(cmd_bound);

    CLI::App* cmd_check = app.add_subcommand("check", "re-verify a result document");
    cmd_check->add_option("result", file, "result document")->required();
    cmd_check->add_option("--problem", problem_override, "problem file override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (cmd_minimize->parsed()) return run_minimize(file, options, output);
        if (cmd_bound->parsed()) return run_bound(file, degree, options, output);
        return run_check(file, problem_override);
    } catch (const ParseError& e) {
        std::cerr << "polymin: " << e.what() << "\n";
        return kExitParse;
    } catch (const NumericalError& e) {
        std::cerr << "polymin: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "polymin: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "polymin: " << e.what() << "\n";
        return kExitNumerical;
    }
}
