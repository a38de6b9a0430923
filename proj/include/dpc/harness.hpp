#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpc/broadcast.hpp"
#include "dpc/config.hpp"
#include "dpc/trellis.hpp"

namespace dpc {

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double power_to_db(double p) { return 10.0 * std::log10(p); }

struct SimConfig {
    TrellisPreset preset = TrellisPreset::Qam16_8State_R0_3;
    BinStrategy strategy = BinStrategy::PairedMaxSpread;
    int r = 1;
    double alpha = 0.9;
    double sigma_s2 = 1.0;
    double sigma_w2 = 1.0;
    int block_length = 100000;
    int min_errors = 100;
    int max_blocks = 2000;
    int workers = 1;
    std::uint64_t seed = 1;
    std::vector<double> design_power_db = {16.3};
    std::vector<double> alpha_list = {};
    std::vector<double> sigma_s2_list = {};

    // Reads the documented config keys; caller still runs cfg.finish() so
    // subcommand-specific keys can be layered on first.
    static SimConfig from_config(Config& cfg);
};

struct BerPoint {
    double design_power_db = 0.0;
    double alpha = 0.0;
    double sigma_s2 = 0.0;
    double measured_snr_db = 0.0;
    double composite_snr_db = 0.0;  // power of x + s over noise; not a CSV column
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double ber = 0.0;
    std::uint64_t blocks = 0;
    double dirt_ser = 0.0;  // NaN when recovery is unavailable (alpha = 1)
    bool truncated = false;
};

// One Monte-Carlo point: blocks of block_length symbols are simulated in
// chunks until min_errors message-bit errors accumulate at a chunk boundary
// or max_blocks is hit (sets `truncated`). Blocks are independent and seeded
// per index, and chunk boundaries are fixed, so the result is a pure function
// of (config, point parameters) regardless of worker count or scheduling.
BerPoint run_point(const SimConfig& cfg, double design_power_db, double alpha, double sigma_s2);

// Plain sequential twin of run_point with the same chunked stopping rule.
// Kept as the reference implementation; must match run_point bit for bit.
BerPoint run_point_reference(const SimConfig& cfg, double design_power_db, double alpha,
                             double sigma_s2);

// Cartesian sweep: each sigma_s2 (list, or the scalar if the list is empty)
// over each design power, in config order.
std::vector<BerPoint> run_sweep(const SimConfig& cfg);

// Interference-free reference curve: the 4-state 4-QAM code with alpha = 0
// and sigma_s2 = 0, swept over design_power_db.
std::vector<BerPoint> run_awgn_baseline(const SimConfig& cfg);

// One point per alpha_list entry at fixed design power design_power_db[0];
// the measured SNR moves with alpha since presubtraction changes the
// transmit power.
std::vector<BerPoint> run_alpha_sweep(const SimConfig& cfg);

// Columns: design_power_db,alpha,sigma_s2,measured_snr_db,bits,errors,ber,
// blocks,dirt_ser,truncated. Doubles carry 17 significant digits so a
// parse-back reproduces them exactly.
void emit_csv(const std::vector<BerPoint>& points, std::ostream& out);
void emit_csv_file(const std::vector<BerPoint>& points, const std::string& path);
std::vector<BerPoint> parse_csv(std::istream& in);

// Design power (dB) whose measured transmit SNR hits target_snr_db within
// +/- 0.05 dB, found by bisection on a short deterministic encoder-only
// probe. The bracket widens automatically if the target lies outside it.
double find_design_power_for_snr(const SimConfig& cfg, double alpha, double sigma_s2,
                                 double target_snr_db, double lo_db = 0.0, double hi_db = 20.0);

// Measured SNR of the encoder-only probe used by the bisection.
double probe_snr_db(const SimConfig& cfg, double design_power_db, double alpha, double sigma_s2);

// Linear interpolation of measured_snr_db against log10(ber) over the first
// consecutive pair of points bracketing target_ber, in the given order.
// Points with zero errors count as ber = 0.3/bits. Empty when no pair
// brackets the target.
std::optional<double> snr_at_ber(const std::vector<BerPoint>& points, double target_ber);

// Fixed-block-count two-user run. Returns two rows: the strong user (its
// dirt_ser column carries the weak-message-via-dirt-recovery BER) and the
// weak user (dirt_ser is NaN). design_power_db/sigma_s2 columns carry each
// user's own power and the other user's power.
std::vector<BerPoint> run_broadcast(const BroadcastScenario& sc, int block_length, int blocks,
                                    int workers);

struct BroadcastRunConfig {
    BroadcastScenario scenario;
    int block_length = 100000;
    int blocks = 50;
    int workers = 1;

    static BroadcastRunConfig from_config(Config& cfg);
};

}  // namespace dpc
