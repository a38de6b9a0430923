#include "dpc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace dpc {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return std::mt19937_64(splitmix64(seed + (stream_id + 1) * kGolden));
}

std::vector<std::uint8_t> gen_message_bits(std::size_t count, std::uint64_t seed,
                                           std::uint64_t stream_id) {
    std::mt19937_64 rng = make_stream(seed, stream_id);
    std::vector<std::uint8_t> bits(count);
    for (std::size_t i = 0; i < count; ++i) {
        bits[i] = static_cast<std::uint8_t>(rng() >> 63);
    }
    return bits;
}

std::vector<cplx> gen_gaussian(std::size_t n, double variance, std::uint64_t seed,
                               std::uint64_t stream_id) {
    if (n == 0) {
        throw std::invalid_argument("sample count must be positive");
    }
    if (variance < 0.0) {
        throw std::invalid_argument("variance must be nonnegative");
    }
    std::vector<cplx> out(n);
    if (variance == 0.0) return out;
    std::mt19937_64 rng = make_stream(seed, stream_id);
    for (std::size_t i = 0; i < n; ++i) {
        // u1 in (0, 1] so the log is finite; u2 in [0, 1).
        const double u1 = 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double mag = std::sqrt(-variance * std::log(u1));
        out[i] = cplx(mag * std::cos(kTwoPi * u2), mag * std::sin(kTwoPi * u2));
    }
    return out;
}

std::vector<cplx> gen_dirt(std::size_t n, const ChannelParams& params, std::uint64_t stream_id) {
    if (params.sigma_s2 < 0.0) {
        throw std::invalid_argument("dirt variance must be nonnegative");
    }
    return gen_gaussian(n, params.sigma_s2, params.seed, stream_id);
}

std::vector<cplx> transmit(const std::vector<cplx>& x, const std::vector<cplx>& s,
                           const ChannelParams& params, std::uint64_t stream_id) {
    if (x.empty() || x.size() != s.size()) {
        throw std::invalid_argument("transmit requires equal, nonzero lengths");
    }
    if (params.sigma_w2 <= 0.0) {
        throw std::invalid_argument("noise variance must be positive");
    }
    std::vector<cplx> y = gen_gaussian(x.size(), params.sigma_w2, params.seed, stream_id);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += x[i] + s[i];
    return y;
}

std::vector<cplx> transmit_noiseless(const std::vector<cplx>& x, const std::vector<cplx>& s) {
    if (x.empty() || x.size() != s.size()) {
        throw std::invalid_argument("transmit requires equal, nonzero lengths");
    }
    std::vector<cplx> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + s[i];
    return y;
}

double measured_snr_db(const std::vector<std::vector<cplx>>& x_blocks, double sigma_w2) {
    if (sigma_w2 <= 0.0) {
        throw std::invalid_argument("noise variance must be positive");
    }
    double sum = 0.0;
    std::uint64_t count = 0;
    for (const auto& block : x_blocks) {
        for (const cplx& x : block) {
            sum += std::norm(x);
            ++count;
        }
    }
    return snr_db_from_power_sum(sum, count, sigma_w2);
}

double snr_db_from_power_sum(double power_sum, std::uint64_t count, double sigma_w2) {
    if (count == 0) {
        throw std::invalid_argument("SNR needs at least one transmit sample");
    }
    return 10.0 * std::log10(power_sum / static_cast<double>(count) / sigma_w2);
}

}  // namespace dpc
