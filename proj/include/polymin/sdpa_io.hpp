#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polymin/interior_point.hpp"
#include "polymin/sdp.hpp"

namespace polymin {

struct SdpaEntry {
    int matrix; // 0 = F_0, then 1..m
    int block;  // 1-based
    int row;    // 1-based, row <= col
    int col;
    double value;

    bool operator==(const SdpaEntry&) const = default;
};

/// SDPA sparse-format problem:  min c·x  s.t.  Σ x_i F_i − F_0 ⪰ 0,
/// block-diagonal with negative block sizes meaning diagonal blocks.
struct SdpaProblem {
    std::vector<int> block_sizes;
    Eigen::VectorXd objective;
    std::vector<SdpaEntry> entries;

    bool operator==(const SdpaProblem& other) const {
        return block_sizes == other.block_sizes && objective == other.objective &&
               entries == other.entries;
    }
};

void write_sdpa(std::ostream& os, const SdpaProblem& problem);
void write_sdpa_file(const std::string& path, const SdpaProblem& problem);

/// Throws SdpaParseError with a 1-based line number on malformed input.
SdpaProblem read_sdpa(std::istream& is);
SdpaProblem read_sdpa_file(const std::string& path);

/// Single dense block; the LMI's F0 maps to -F_0 in SDPA orientation.
SdpaProblem sdpa_from_lmi(const LmiProblem& lmi);
LmiProblem lmi_from_sdpa(const SdpaProblem& problem);

/// Writes the moment SDP in its eliminated standard form (λ_0 and the
/// equality constraints folded into F_0 / the variable change).
void export_sdpa(const MomentSDP& sdp, const std::string& path);
SdpaProblem import_sdpa(const std::string& path);

} // namespace polymin
