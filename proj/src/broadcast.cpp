#include "dpc/broadcast.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "dpc/channel.hpp"

namespace dpc {
namespace {

// A double split into an exact integer significand and binary exponent.
struct ExactReal {
    std::uint64_t mant = 0;
    int exp = 0;
};

ExactReal split_double(double v) {
    ExactReal r;
    if (v == 0.0) return r;
    int e = 0;
    const double m = std::frexp(v, &e);  // m in [0.5, 1)
    r.mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
    r.exp = e - 53;
    return r;
}

// Exact equality of a * 2^ea and b * 2^eb for positive integers a, b:
// strip trailing zero bits, then both significand and exponent must match.
bool exact_pow2_equal(unsigned __int128 a, int ea, unsigned __int128 b, int eb) {
    while ((a & 1) == 0) {
        a >>= 1;
        ++ea;
    }
    while ((b & 1) == 0) {
        b >>= 1;
        ++eb;
    }
    return a == b && ea == eb;
}

// Whether d1 * A1 + d2 * A2 == 0 exactly, for integer grid deltas d1, d2 and
// scales A_i = sqrt(P_i / k_i). Nonzero solutions need opposite signs and
// d1^2 * P1 * k2 == d2^2 * P2 * k1, compared in exact integer arithmetic.
bool component_cancels(int d1, int d2, const ExactReal& p1, int k1, const ExactReal& p2, int k2) {
    if (d1 == 0 || d2 == 0) return d1 == 0 && d2 == 0;
    if ((d1 > 0) == (d2 > 0)) return false;
    const unsigned __int128 lhs = static_cast<unsigned __int128>(static_cast<std::int64_t>(d1) * d1) *
                                  p1.mant * static_cast<unsigned>(k2);
    const unsigned __int128 rhs = static_cast<unsigned __int128>(static_cast<std::int64_t>(d2) * d2) *
                                  p2.mant * static_cast<unsigned>(k1);
    return exact_pow2_equal(lhs, p1.exp, rhs, p2.exp);
}

}  // namespace

BroadcastScenario make_broadcast(TrellisPreset strong_preset, double strong_power, int strong_r,
                                 BinStrategy strategy, double alpha, TrellisPreset weak_preset,
                                 double weak_power, double sigma_w1_2, double sigma_w2_2,
                                 std::uint64_t seed) {
    if (sigma_w1_2 < 0.0 || sigma_w1_2 >= sigma_w2_2) {
        throw std::invalid_argument("strong user noise must satisfy 0 <= sigma_w1_2 < sigma_w2_2");
    }
    BroadcastScenario sc;
    sc.strong = make_spec(strong_preset, strong_power, strong_r, strategy, alpha);
    const TrellisCode weak_trellis =
        build_trellis(weak_preset, build_constellation(preset_constellation(weak_preset), weak_power));
    sc.weak.trellis = weak_trellis;
    sc.weak.bins = unit_bins(sc.weak.trellis);
    sc.weak.alpha = 0.0;
    sc.sigma_w1_2 = sigma_w1_2;
    sc.sigma_w2_2 = sigma_w2_2;
    sc.seed = seed;
    return sc;
}

BroadcastBlock broadcast_encode(const BroadcastScenario& sc,
                                const std::vector<std::uint8_t>& m_weak,
                                const std::vector<std::uint8_t>& m_strong) {
    const std::size_t n_weak = m_weak.size() / sc.weak.r();
    const std::size_t n_strong = m_strong.size() / sc.strong.r();
    if (n_weak != n_strong) {
        throw std::invalid_argument("user messages must span the same block length");
    }
    BroadcastBlock block;
    block.x_weak = tcm_encode(sc.weak, m_weak).u;
    block.strong = pip_encode(sc.strong, m_strong, block.x_weak);
    // Computed in the u + (1-alpha)s form so the identity holds to the last
    // bit; strong.x + x_weak is the same signal up to rounding.
    block.x_sum.resize(block.x_weak.size());
    const double residual = 1.0 - sc.strong.alpha;
    for (std::size_t i = 0; i < block.x_sum.size(); ++i) {
        block.x_sum[i] = block.strong.u[i] + residual * block.x_weak[i];
    }
    return block;
}

StrongRxResult strong_user_receive(const BroadcastScenario& sc, const std::vector<cplx>& x_sum,
                                   std::uint64_t block_index) {
    std::vector<cplx> y = x_sum;
    if (sc.sigma_w1_2 > 0.0) {
        const std::vector<cplx> w = gen_gaussian(
            y.size(), sc.sigma_w1_2, sc.seed, stream_id_for(block_index, StreamRole::Noise));
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += w[i];
    }
    const DecodedBlock strong = medd_decode(sc.strong, y);

    StrongRxResult res;
    res.m_strong = strong.message;
    res.u_strong = strong.u;
    res.s_hat = recover_dirt(y, strong.u, sc.strong.alpha);
    res.m_weak_via_strong = medd_decode(sc.weak, res.s_hat).message;
    return res;
}

std::vector<std::uint8_t> weak_user_receive(const BroadcastScenario& sc,
                                            const std::vector<cplx>& x_sum,
                                            std::uint64_t block_index) {
    std::vector<cplx> y = x_sum;
    if (sc.sigma_w2_2 > 0.0) {
        const std::vector<cplx> w = gen_gaussian(
            y.size(), sc.sigma_w2_2, sc.seed, stream_id_for(block_index, StreamRole::WeakNoise));
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += w[i];
    }
    return medd_decode(sc.weak, y).message;
}

double superposition_power(double p1, double p2) {
    if (p1 < 0.0 || p2 < 0.0) {
        throw std::invalid_argument("powers must be nonnegative");
    }
    return p1 + p2;
}

bool uniquely_decodable(const Constellation& c1, const Constellation& c2) {
    const ExactReal p1 = split_double(c1.avg_power);
    const ExactReal p2 = split_double(c2.avg_power);
    const int k1 = grid_power(c1.kind);
    const int k2 = grid_power(c2.kind);

    // Sums a+b and c+d collide iff (a-c)*A1 + (b-d)*A2 = 0 in both
    // components. Scan all pairs of (index into c1, index into c2).
    const int m1 = static_cast<int>(c1.grid.size());
    const int m2 = static_cast<int>(c2.grid.size());
    for (int a = 0; a < m1; ++a) {
        for (int b = 0; b < m2; ++b) {
            for (int c = 0; c < m1; ++c) {
                for (int d = 0; d < m2; ++d) {
                    if (a == c && b == d) continue;
                    bool cancels = true;
                    for (int comp = 0; comp < 2 && cancels; ++comp) {
                        const int delta1 = c1.grid[a][comp] - c1.grid[c][comp];
                        const int delta2 = c2.grid[b][comp] - c2.grid[d][comp];
                        cancels = component_cancels(delta1, delta2, p1, k1, p2, k2);
                    }
                    if (cancels) return false;
                }
            }
        }
    }
    return true;
}

}  // namespace dpc
