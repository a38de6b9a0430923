#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "dpc/trellis.hpp"

namespace dpc {

// Squared Euclidean distance between a received sample and a candidate
// point. Single definition shared with the exhaustive reference in the
// tests, mirroring branch_metric on the encoder side.
inline double point_sq_distance(cplx y, cplx point) {
    return std::norm(y - point);
}

struct DecodedBlock {
    std::vector<int> labels;            // closest-path label per symbol
    std::vector<cplx> u;                // corresponding points
    std::vector<std::uint8_t> message;  // bin indices unpacked to n*r bits
    std::vector<int> state_path;        // n+1 states
    double distance = 0.0;              // summed squared distance of the path
};

// Minimum-Euclidean-distance decoding over the full trellis (every edge open,
// bins ignored during the search). Message bits are read back as the bin
// index of each decoded edge. Starts in state 0, no termination, ties resolve
// exactly as in the encoder.
DecodedBlock medd_decode(const DpcSpec& spec, const std::vector<cplx>& y);

// s_hat = (y - u_hat) / (1 - alpha). Exact inverse of the effective channel
// y = u + (1-alpha)s when the decoded codeword is correct and noise is zero.
std::vector<cplx> recover_dirt(const std::vector<cplx>& y, const std::vector<cplx>& u_hat,
                               double alpha);

}  // namespace dpc
