#pragma once

#include <cstdint>
#include <vector>

#include "dpc/decoder.hpp"
#include "dpc/encoder.hpp"
#include "dpc/trellis.hpp"

namespace dpc {

// Two-user downlink: both messages ride on one transmit signal. The weak
// user's plain TCM codeword doubles as the dirt for the strong user's
// presubtracting encoder, so the strong receiver can strip it and even read
// the weak message after dirt recovery.
struct BroadcastScenario {
    DpcSpec strong;           // binned code, power budget P1 = its design power
    DpcSpec weak;             // unit-bin code at power P2
    double sigma_w1_2 = 0.0;  // strong receiver noise (must stay below weak's)
    double sigma_w2_2 = 1.0;
    std::uint64_t seed = 0;
};

BroadcastScenario make_broadcast(TrellisPreset strong_preset, double strong_power, int strong_r,
                                 BinStrategy strategy, double alpha, TrellisPreset weak_preset,
                                 double weak_power, double sigma_w1_2, double sigma_w2_2,
                                 std::uint64_t seed = 0);

struct BroadcastBlock {
    std::vector<cplx> x_weak;   // weak user's codeword, already at power P2
    EncodedBlock strong;        // strong user's presubtracted block, dirt = x_weak
    std::vector<cplx> x_sum;    // transmitted signal, strong.x + x_weak
};

// Identity maintained by construction: x_sum = u_strong + (1 - alpha) * x_weak.
BroadcastBlock broadcast_encode(const BroadcastScenario& sc,
                                const std::vector<std::uint8_t>& m_weak,
                                const std::vector<std::uint8_t>& m_strong);

struct StrongRxResult {
    std::vector<std::uint8_t> m_strong;
    std::vector<cplx> u_strong;
    std::vector<cplx> s_hat;                   // recovered weak-signal estimate
    std::vector<std::uint8_t> m_weak_via_strong;  // weak message read off s_hat
};

// Strong receiver: adds its own noise (role Noise of block_index), decodes the
// strong code, inverts the effective channel, then decodes the recovered dirt
// with the weak user's decoder.
StrongRxResult strong_user_receive(const BroadcastScenario& sc, const std::vector<cplx>& x_sum,
                                   std::uint64_t block_index);

// Weak receiver: adds its (larger) noise (role WeakNoise) and decodes its own
// code directly, treating the strong user's contribution as extra noise.
std::vector<std::uint8_t> weak_user_receive(const BroadcastScenario& sc,
                                            const std::vector<cplx>& x_sum,
                                            std::uint64_t block_index);

// Sum power of independent zero-mean signals.
double superposition_power(double p1, double p2);

// Whether every pairwise sum of points from the two constellations is
// distinct, i.e. the sum set has full cardinality |c1|*|c2|. Uses exact
// integer arithmetic on the underlying grids, so near-collisions from
// floating-point scaling cannot flip the answer.
bool uniquely_decodable(const Constellation& c1, const Constellation& c2);

}  // namespace dpc
