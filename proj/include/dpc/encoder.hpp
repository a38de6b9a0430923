#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "dpc/trellis.hpp"

namespace dpc {

// Cost of signaling codeword symbol u over dirt sample s: |u - alpha*s| * |s|,
// the magnitude of the product of the transmitted sample (u - alpha*s) with
// the conjugated dirt sample. Summed over a block it upper-bounds the inner
// product between the transmit block and the dirt, so minimizing it drives the
// transmit block toward orthogonality with the dirt; the selected codeword u
// itself then carries a positive dirt correlation near alpha.
//
// Kept as the single definition shared by the trellis search and the
// exhaustive reference in the tests so both sides sum bit-identical terms.
inline double branch_metric(cplx u, double alpha, cplx s) {
    return std::sqrt(std::norm(u - alpha * s)) * std::sqrt(std::norm(s));
}

struct EncodedBlock {
    std::vector<std::uint8_t> message;  // n*r bits, as given
    std::vector<int> labels;            // chosen constellation label per symbol
    std::vector<cplx> u;                // codeword samples
    std::vector<cplx> x;                // transmitted samples, u - alpha*s
    std::vector<int> state_path;        // n+1 trellis states
    double metric = 0.0;                // accumulated branch metric of `labels`
};

// Selects, among the codewords indexed by `message` under the bin scheme, the
// one minimizing the summed branch metric against the dirt block `s`, then
// presubtracts alpha*s. Starts in state 0; the block is not terminated.
EncodedBlock pip_encode(const DpcSpec& spec, const std::vector<std::uint8_t>& message,
                        const std::vector<cplx>& s);

// Plain trellis-coded modulation: unit-bin path through the same machinery,
// one edge per message symbol and no presubtraction.
EncodedBlock tcm_encode(const DpcSpec& spec, const std::vector<std::uint8_t>& message);

// Projection coefficient of a sequence onto the dirt block:
// Re(sum conj(s_t) v_t) / sum |s_t|^2. Diagnostic for how much of the dirt a
// chosen codeword carries; returns 0 for an all-zero dirt block.
double dirt_alignment(const std::vector<cplx>& v, const std::vector<cplx>& s);

}  // namespace dpc
