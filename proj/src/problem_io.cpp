#include "polymin/problem_io.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "polymin/errors.hpp"
#include "polymin/parser.hpp"

namespace polymin {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trimmed(item));
    return out;
}

double parse_number_option(const std::string& name, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error("bad value for option " + name + ": '" + value + "'");
    }
}

} // namespace

ProblemFile parse_problem_file(const std::string& text) {
    std::vector<std::string> vars;
    std::string objective_text;
    std::map<std::string, std::string> options;
    bool saw_minimize = false;

    std::size_t offset = 0;
    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw)) {
        const std::size_t line_offset = offset;
        offset += raw.size() + 1;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        line = trimmed(line);
        if (line.empty()) continue;

        if (line.rfind("vars:", 0) == 0) {
            if (!vars.empty()) throw ParseError("duplicate vars: line", line_offset);
            vars = split(line.substr(5), ',');
            if (vars.empty() || (vars.size() == 1 && vars[0].empty()))
                throw ParseError("vars: line lists no variables", line_offset);
            for (const auto& v : vars)
                if (!is_valid_identifier(v))
                    throw ParseError("bad variable name '" + v + "'", line_offset);
        } else if (line.rfind("minimize:", 0) == 0) {
            if (saw_minimize) throw ParseError("duplicate minimize: line", line_offset);
            if (vars.empty())
                throw ParseError("vars: must precede minimize:", line_offset);
            objective_text = trimmed(line.substr(9));
            saw_minimize = true;
        } else if (line.rfind("option", 0) == 0) {
            std::string rest = trimmed(line.substr(6));
            auto eq = rest.find('=');
            if (eq == std::string::npos)
                throw ParseError("option line is missing '='", line_offset);
            std::string name = trimmed(rest.substr(0, eq));
            std::string value = trimmed(rest.substr(eq + 1));
            if (name.empty() || value.empty())
                throw ParseError("malformed option line", line_offset);
            options[name] = value;
        } else {
            throw ParseError("unrecognized line: '" + line + "'", line_offset);
        }
    }
    if (!saw_minimize) throw ParseError("missing minimize: line", offset);

    ProblemFile problem{vars, objective_text, parse_polynomial(objective_text, vars),
                        std::move(options)};
    return problem;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open problem file " + path);
    std::stringstream buffer;
    buffer << is.rdbuf();
    return parse_problem_file(buffer.str());
}

void apply_problem_options(const ProblemFile& problem, MinimizeOptions& options) {
    for (const auto& [name, value] : problem.options) {
        if (name == "t_max")
            options.t_max = static_cast<int>(parse_number_option(name, value));
        else if (name == "seed")
            options.seed = static_cast<std::uint64_t>(parse_number_option(name, value));
        else if (name == "tol_rank")
            options.tau_rank = parse_number_option(name, value);
        else if (name == "tol_gap")
            options.sdp.tol_gap = parse_number_option(name, value);
        else if (name == "tol_min")
            options.tol_min = parse_number_option(name, value);
        else if (name == "eps_pivot")
            options.eps_pivot = parse_number_option(name, value);
        else
            throw Error("unknown option '" + name + "' in problem file");
    }
}

ResultDocument make_result_document(const std::string& problem_path, const ProblemFile& problem,
                                    const MinimizerResult& result) {
    ResultDocument doc;
    doc.problem_path = problem_path;
    doc.vars = problem.vars;
    doc.objective_text = format_polynomial(problem.objective, problem.vars);
    doc.status = "converged";
    doc.minimum = result.minimum;
    for (const auto& m : result.quotient_basis.monomials())
        doc.quotient_basis.push_back(format_monomial(m, problem.vars));
    for (const auto& [lead, tail] : result.border_basis.rules())
        doc.generators.push_back(
            format_polynomial(result.border_basis.rule_polynomial(lead), problem.vars));
    for (const auto& z : result.points)
        doc.points.emplace_back(z.data(), z.data() + z.size());
    doc.certificates = result.certificates;
    doc.trace = result.trace;
    return doc;
}

std::string to_text(const ResultDocument& doc) {
    std::ostringstream os;
    os << "polymin result v1\n";
    os << "problem: " << doc.problem_path << "\n";
    os << "vars: ";
    for (std::size_t i = 0; i < doc.vars.size(); ++i) os << (i ? ", " : "") << doc.vars[i];
    os << "\n";
    os << "objective: " << doc.objective_text << "\n";
    os << "status: " << doc.status << "\n";
    if (doc.status == "bound") os << "gap: " << (doc.gap ? 1 : 0) << "\n";
    os << "minimum: " << format_double(doc.minimum) << "\n";
    os << "quotient_basis: ";
    for (std::size_t i = 0; i < doc.quotient_basis.size(); ++i)
        os << (i ? ", " : "") << doc.quotient_basis[i];
    os << "\n";
    os << "generators: " << doc.generators.size() << "\n";
    for (const auto& g : doc.generators) os << "  " << g << "\n";
    os << "points: " << doc.points.size() << "\n";
    for (const auto& z : doc.points) {
        os << " ";
        for (double c : z) os << " " << format_double(c);
        os << "\n";
    }
    os << "certificates: " << doc.certificates.size() << "\n";
    for (const auto& c : doc.certificates)
        os << "  f= " << format_double(c.f_value) << " grad= " << format_double(c.gradient_norm)
           << " residual= " << format_double(c.max_rule_residual) << "\n";
    os << "trace: " << doc.trace.size() << "\n";
    for (const auto& r : doc.trace)
        os << "  t= " << r.t << " hankel= " << r.hankel_size << " objective= "
           << format_double(r.objective) << " gap= " << (r.gap ? 1 : 0) << " kernel_dim= "
           << r.kernel_dim << " wall_ms= " << format_double(r.wall_ms) << "\n";
    return os.str();
}

std::string to_json(const ResultDocument& doc) {
    nlohmann::ordered_json j;
    j["format"] = "polymin result v1";
    j["problem"] = doc.problem_path;
    j["vars"] = doc.vars;
    j["objective"] = doc.objective_text;
    j["status"] = doc.status;
    if (doc.status == "bound") j["gap"] = doc.gap;
    j["minimum"] = doc.minimum;
    j["quotient_basis"] = doc.quotient_basis;
    j["generators"] = doc.generators;
    j["points"] = doc.points;
    nlohmann::ordered_json certs = nlohmann::ordered_json::array();
    for (const auto& c : doc.certificates)
        certs.push_back({{"f", c.f_value},
                         {"grad", c.gradient_norm},
                         {"residual", c.max_rule_residual}});
    j["certificates"] = std::move(certs);
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (const auto& r : doc.trace)
        trace.push_back({{"t", r.t},
                         {"hankel", r.hankel_size},
                         {"objective", r.objective},
                         {"gap", r.gap},
                         {"kernel_dim", r.kernel_dim},
                         {"wall_ms", r.wall_ms}});
    j["trace"] = std::move(trace);
    return j.dump(2) + "\n";
}

namespace {

ResultDocument parse_result_json(const std::string& content) {
    nlohmann::json j = nlohmann::json::parse(content);
    ResultDocument doc;
    doc.problem_path = j.at("problem").get<std::string>();
    doc.vars = j.at("vars").get<std::vector<std::string>>();
    doc.objective_text = j.at("objective").get<std::string>();
    doc.status = j.at("status").get<std::string>();
    if (j.contains("gap")) doc.gap = j.at("gap").get<bool>();
    doc.minimum = j.at("minimum").get<double>();
    doc.quotient_basis = j.at("quotient_basis").get<std::vector<std::string>>();
    doc.generators = j.at("generators").get<std::vector<std::string>>();
    doc.points = j.at("points").get<std::vector<std::vector<double>>>();
    for (const auto& c : j.at("certificates")) {
        PointCertificate cert;
        cert.f_value = c.at("f").get<double>();
        cert.gradient_norm = c.at("grad").get<double>();
        cert.max_rule_residual = c.at("residual").get<double>();
        doc.certificates.push_back(cert);
    }
    for (const auto& r : j.at("trace")) {
        IterationRecord rec;
        rec.t = r.at("t").get<int>();
        rec.hankel_size = r.at("hankel").get<int>();
        rec.objective = r.at("objective").get<double>();
        rec.gap = r.at("gap").get<bool>();
        rec.kernel_dim = r.at("kernel_dim").get<int>();
        rec.wall_ms = r.at("wall_ms").get<double>();
        doc.trace.push_back(rec);
    }
    return doc;
}

class TextDocReader {
public:
    explicit TextDocReader(const std::string& content) : ss_(content) {}

    ResultDocument run() {
        ResultDocument doc;
        expect_line("polymin result v1");
        doc.problem_path = value_of("problem:");
        for (auto& v : split(value_of("vars:"), ',')) doc.vars.push_back(v);
        doc.objective_text = value_of("objective:");
        doc.status = value_of("status:");
        if (doc.status == "bound") doc.gap = std::stoi(value_of("gap:")) != 0;
        doc.minimum = to_double(value_of("minimum:"));
        for (auto& b : split(value_of("quotient_basis:"), ','))
            if (!b.empty()) doc.quotient_basis.push_back(b);
        const int n_gens = std::stoi(value_of("generators:"));
        for (int i = 0; i < n_gens; ++i) doc.generators.push_back(next_line());
        const int n_points = std::stoi(value_of("points:"));
        for (int i = 0; i < n_points; ++i) {
            std::istringstream ls(next_line());
            std::vector<double> z;
            double v;
            while (ls >> v) z.push_back(v);
            doc.points.push_back(std::move(z));
        }
        const int n_certs = std::stoi(value_of("certificates:"));
        for (int i = 0; i < n_certs; ++i) {
            std::istringstream ls(next_line());
            std::string key;
            PointCertificate cert;
            ls >> key >> cert.f_value >> key >> cert.gradient_norm >> key >>
                cert.max_rule_residual;
            doc.certificates.push_back(cert);
        }
        const int n_trace = std::stoi(value_of("trace:"));
        for (int i = 0; i < n_trace; ++i) {
            std::istringstream ls(next_line());
            std::string key;
            IterationRecord rec;
            int gap = 0;
            ls >> key >> rec.t >> key >> rec.hankel_size >> key >> rec.objective >> key >> gap >>
                key >> rec.kernel_dim >> key >> rec.wall_ms;
            rec.gap = gap != 0;
            doc.trace.push_back(rec);
        }
        return doc;
    }

private:
    std::string next_line() {
        std::string line;
        if (!std::getline(ss_, line))
            throw ParseError("result document ended early", line_no_);
        ++line_no_;
        return trimmed(line);
    }
    void expect_line(const std::string& what) {
        if (next_line() != what) throw ParseError("not a polymin result document", line_no_);
    }
    std::string value_of(const std::string& key) {
        std::string line = next_line();
        if (line.rfind(key, 0) != 0)
            throw ParseError("expected '" + key + "' in result document", line_no_);
        return trimmed(line.substr(key.size()));
    }
    static double to_double(const std::string& s) { return std::stod(s); }

    std::stringstream ss_;
    std::size_t line_no_ = 0;
};

} // namespace

ResultDocument parse_result_document(const std::string& content) {
    for (char c : content) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return parse_result_json(content);
        break;
    }
    return TextDocReader(content).run();
}

CheckReport check_result(const ResultDocument& doc, const ProblemFile& problem) {
    CheckReport report;
    const auto fail = [&](const std::string& what) {
        report.ok = false;
        report.failures.push_back(what);
    };

    if (doc.vars != problem.vars) fail("variable lists differ");
    Polynomial f = problem.objective;
    GradientResult grad = gradient(f);
    std::vector<Polynomial> generators;
    for (const auto& g : doc.generators) {
        try {
            generators.push_back(parse_polynomial(g, problem.vars));
        } catch (const ParseError&) {
            fail("generator does not parse: " + g);
        }
    }

    const double tol_value = 1e-4 * (1.0 + std::abs(doc.minimum));
    for (std::size_t i = 0; i < doc.points.size(); ++i) {
        if (doc.points[i].size() != problem.vars.size()) {
            fail("point " + std::to_string(i) + " has the wrong dimension");
            continue;
        }
        Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(
            doc.points[i].data(), static_cast<Eigen::Index>(doc.points[i].size()));
        const double fz = f.evaluate(z);
        if (std::abs(fz - doc.minimum) > tol_value)
            fail("f at point " + std::to_string(i) + " is " + format_double(fz) +
                 ", not the recorded minimum");
        double gnorm = 0.0;
        for (const auto& g : grad.parts) gnorm = std::max(gnorm, std::abs(g.evaluate(z)));
        if (gnorm > 1e-4)
            fail("gradient at point " + std::to_string(i) + " has max-norm " +
                 format_double(gnorm));
        for (const auto& g : generators) {
            const double residual = std::abs(g.evaluate(z));
            if (residual > 1e-6 * (1.0 + g.max_abs_coeff()) * (1.0 + z.norm()))
                fail("generator '" + format_polynomial(g, problem.vars) +
                     "' does not vanish at point " + std::to_string(i));
        }
        if (i < doc.certificates.size() &&
            std::abs(doc.certificates[i].f_value - fz) > tol_value)
            fail("certificate f-value at point " + std::to_string(i) + " is inconsistent");
    }
    return report;
}

} // namespace polymin
