#include "polymin/sdpa_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "polymin/errors.hpp"
#include "polymin/parser.hpp"

namespace polymin {

void write_sdpa(std::ostream& os, const SdpaProblem& problem) {
    os << problem.objective.size() << "\n";
    os << problem.block_sizes.size() << "\n";
    for (std::size_t i = 0; i < problem.block_sizes.size(); ++i)
        os << (i ? " " : "") << problem.block_sizes[i];
    os << "\n";
    for (Eigen::Index i = 0; i < problem.objective.size(); ++i)
        os << (i ? " " : "") << format_double(problem.objective[i]);
    os << "\n";
    for (const auto& entry : problem.entries)
        os << entry.matrix << " " << entry.block << " " << entry.row << " " << entry.col << " "
           << format_double(entry.value) << "\n";
}

void write_sdpa_file(const std::string& path, const SdpaProblem& problem) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_sdpa(os, problem);
}

namespace {

// Comment lines start with '"' or '*'; brace/comma punctuation is blank.
bool next_data_line(std::istream& is, std::string& line, int& line_no) {
    while (std::getline(is, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '"' || line[first] == '*') continue;
        for (char& c : line)
            if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',') c = ' ';
        return true;
    }
    return false;
}

} // namespace

SdpaProblem read_sdpa(std::istream& is) {
    SdpaProblem problem;
    std::string line;
    int line_no = 0;

    if (!next_data_line(is, line, line_no)) throw SdpaParseError("missing constraint count", line_no);
    long m = -1;
    {
        std::istringstream ss(line);
        if (!(ss >> m) || m < 0) throw SdpaParseError("bad constraint count", line_no);
    }
    if (!next_data_line(is, line, line_no)) throw SdpaParseError("missing block count", line_no);
    long nblocks = -1;
    {
        std::istringstream ss(line);
        if (!(ss >> nblocks)) throw SdpaParseError("bad block count", line_no);
        if (nblocks <= 0) throw SdpaParseError("block count must be positive", line_no);
    }
    if (!next_data_line(is, line, line_no)) throw SdpaParseError("missing block sizes", line_no);
    {
        std::istringstream ss(line);
        for (long b = 0; b < nblocks; ++b) {
            int size = 0;
            if (!(ss >> size) || size == 0)
                throw SdpaParseError("bad block size", line_no);
            problem.block_sizes.push_back(size);
        }
    }
    if (!next_data_line(is, line, line_no)) throw SdpaParseError("missing objective vector", line_no);
    {
        std::istringstream ss(line);
        problem.objective.resize(m);
        for (long i = 0; i < m; ++i)
            if (!(ss >> problem.objective[i]))
                throw SdpaParseError("objective vector is too short", line_no);
    }
    while (next_data_line(is, line, line_no)) {
        std::istringstream ss(line);
        SdpaEntry entry{};
        if (!(ss >> entry.matrix >> entry.block >> entry.row >> entry.col >> entry.value))
            throw SdpaParseError("bad entry line", line_no);
        if (entry.matrix < 0 || entry.matrix > m)
            throw SdpaParseError("entry matrix index out of range", line_no);
        if (entry.block < 1 || entry.block > static_cast<int>(problem.block_sizes.size()))
            throw SdpaParseError("entry block index out of range", line_no);
        const int bsize = std::abs(problem.block_sizes[static_cast<std::size_t>(entry.block - 1)]);
        if (entry.row < 1 || entry.col < 1 || entry.row > bsize || entry.col > bsize)
            throw SdpaParseError("entry position out of range", line_no);
        if (problem.block_sizes[static_cast<std::size_t>(entry.block - 1)] < 0 &&
            entry.row != entry.col)
            throw SdpaParseError("off-diagonal entry in a diagonal block", line_no);
        if (entry.row > entry.col) std::swap(entry.row, entry.col);
        problem.entries.push_back(entry);
    }
    return problem;
}

SdpaProblem read_sdpa_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path);
    return read_sdpa(is);
}

SdpaProblem sdpa_from_lmi(const LmiProblem& lmi) {
    SdpaProblem problem;
    problem.block_sizes = {lmi.dim()};
    problem.objective = lmi.c;
    auto push = [&](int mat, const Eigen::MatrixXd& f, double sign) {
        for (int i = 0; i < f.rows(); ++i)
            for (int j = i; j < f.cols(); ++j)
                if (f(i, j) != 0.0)
                    problem.entries.push_back(SdpaEntry{mat, 1, i + 1, j + 1, sign * f(i, j)});
    };
    push(0, lmi.F0, -1.0); // SDPA orientation: Σ x_i F_i − F_0 ⪰ 0
    for (std::size_t k = 0; k < lmi.F.size(); ++k)
        push(static_cast<int>(k) + 1, lmi.F[k], 1.0);
    return problem;
}

LmiProblem lmi_from_sdpa(const SdpaProblem& problem) {
    int total = 0;
    std::vector<int> offsets;
    for (int s : problem.block_sizes) {
        offsets.push_back(total);
        total += std::abs(s);
    }
    LmiProblem lmi;
    lmi.c = problem.objective;
    lmi.F0 = Eigen::MatrixXd::Zero(total, total);
    lmi.F.assign(static_cast<std::size_t>(problem.objective.size()),
                 Eigen::MatrixXd::Zero(total, total));
    for (const auto& entry : problem.entries) {
        const int off = offsets[static_cast<std::size_t>(entry.block - 1)];
        const int i = off + entry.row - 1;
        const int j = off + entry.col - 1;
        const double sign = entry.matrix == 0 ? -1.0 : 1.0;
        Eigen::MatrixXd& target =
            entry.matrix == 0 ? lmi.F0 : lmi.F[static_cast<std::size_t>(entry.matrix - 1)];
        target(i, j) = sign * entry.value;
        target(j, i) = sign * entry.value;
    }
    return lmi;
}

void export_sdpa(const MomentSDP& sdp, const std::string& path) {
    write_sdpa_file(path, sdpa_from_lmi(reduce_to_lmi(sdp).lmi));
}

SdpaProblem import_sdpa(const std::string& path) { return read_sdpa_file(path); }

} // namespace polymin
