#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dpc/constellation.hpp"

namespace dpc {

struct ChannelParams {
    double sigma_s2 = 0.0;  // dirt variance per complex symbol
    double sigma_w2 = 1.0;  // noise variance per complex symbol
    std::uint64_t seed = 0;
};

// Substream roles. Every random quantity in a simulation is drawn from the
// generator keyed by (seed, block_index, role), so block results do not
// depend on scheduling or worker count.
enum class StreamRole : std::uint64_t {
    Dirt = 0,
    Noise = 1,
    Message = 2,
    WeakNoise = 3,
};

inline std::uint64_t stream_id_for(std::uint64_t block_index, StreamRole role) {
    return block_index * 4 + static_cast<std::uint64_t>(role);
}

// One generator per (seed, stream_id), seeded through a splitmix64 finalizer
// so that adjacent ids land far apart in the engine's state space.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id);

// Uniform message bits, one engine draw per bit.
std::vector<std::uint8_t> gen_message_bits(std::size_t count, std::uint64_t seed,
                                           std::uint64_t stream_id);

// n i.i.d. circularly symmetric complex Gaussian samples with total variance
// `variance` per sample (variance/2 per real dimension). Two engine draws per
// sample via the polar Box-Muller form; variance 0 short-circuits to zeros.
std::vector<cplx> gen_gaussian(std::size_t n, double variance, std::uint64_t seed,
                               std::uint64_t stream_id);

std::vector<cplx> gen_dirt(std::size_t n, const ChannelParams& params, std::uint64_t stream_id);

// y = x + s + w with fresh noise of variance sigma_w2.
std::vector<cplx> transmit(const std::vector<cplx>& x, const std::vector<cplx>& s,
                           const ChannelParams& params, std::uint64_t stream_id);

// y = x + s. Stands in for the zero-noise limit that the transmit()
// precondition (sigma_w2 > 0) excludes.
std::vector<cplx> transmit_noiseless(const std::vector<cplx>& x, const std::vector<cplx>& s);

// 10 log10(mean |x|^2 / sigma_w2) pooled over all blocks.
double measured_snr_db(const std::vector<std::vector<cplx>>& x_blocks, double sigma_w2);

// Same ratio from a precomputed power sum; the harness accumulates
// compensated per-block sums instead of retaining blocks.
double snr_db_from_power_sum(double power_sum, std::uint64_t count, double sigma_w2);

}  // namespace dpc
