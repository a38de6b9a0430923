#include "dpc/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dpc/channel.hpp"
#include "dpc/decoder.hpp"
#include "dpc/encoder.hpp"

namespace dpc {
namespace {

// Compensated accumulator; block sums are folded in index order so totals do
// not depend on how blocks were scheduled.
struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Stopping is evaluated only at chunk boundaries, so the set of simulated
// blocks is independent of worker count.
constexpr int kChunkBlocks = 8;

struct BlockOutcome {
    std::uint32_t bit_errors = 0;
    std::uint32_t dirt_symbol_errors = 0;
    double power_sum = 0.0;
    double composite_sum = 0.0;
};

BlockOutcome run_block(const DpcSpec& spec, const ChannelParams& params, int block_length,
                       std::uint64_t block_index) {
    const int r = spec.r();
    const std::vector<std::uint8_t> bits = gen_message_bits(
        static_cast<std::size_t>(block_length) * r, params.seed,
        stream_id_for(block_index, StreamRole::Message));
    const std::vector<cplx> s =
        gen_dirt(block_length, params, stream_id_for(block_index, StreamRole::Dirt));
    const EncodedBlock enc = pip_encode(spec, bits, s);
    const std::vector<cplx> y =
        transmit(enc.x, s, params, stream_id_for(block_index, StreamRole::Noise));
    const DecodedBlock dec = medd_decode(spec, y);

    BlockOutcome out;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        out.bit_errors += bits[i] != dec.message[i];
    }
    if (spec.alpha < 1.0) {
        // Exercise the recovery path; a recovered symbol is deemed in error
        // when the decoded codeword symbol differs from the transmitted one
        // (the recovered dirt then misses by more than the noise floor).
        const std::vector<cplx> s_hat = recover_dirt(y, dec.u, spec.alpha);
        (void)s_hat;
        for (int t = 0; t < block_length; ++t) {
            out.dirt_symbol_errors += dec.labels[t] != enc.labels[t];
        }
    }
    Kahan power;
    Kahan composite;
    for (int t = 0; t < block_length; ++t) {
        power.add(std::norm(enc.x[t]));
        composite.add(std::norm(enc.x[t] + s[t]));
    }
    out.power_sum = power.sum;
    out.composite_sum = composite.sum;
    return out;
}

BerPoint finalize_point(const SimConfig& cfg, double design_power_db, double alpha,
                        double sigma_s2, const std::vector<BlockOutcome>& outcomes) {
    BerPoint p;
    p.design_power_db = design_power_db;
    p.alpha = alpha;
    p.sigma_s2 = sigma_s2;
    p.blocks = outcomes.size();

    Kahan power;
    Kahan composite;
    std::uint64_t bit_errors = 0;
    std::uint64_t dirt_errors = 0;
    for (const BlockOutcome& o : outcomes) {
        power.add(o.power_sum);
        composite.add(o.composite_sum);
        bit_errors += o.bit_errors;
        dirt_errors += o.dirt_symbol_errors;
    }
    const std::uint64_t symbols = p.blocks * static_cast<std::uint64_t>(cfg.block_length);
    p.bits = symbols * static_cast<std::uint64_t>(cfg.r);
    p.errors = bit_errors;
    p.ber = static_cast<double>(bit_errors) / static_cast<double>(p.bits);
    p.measured_snr_db = snr_db_from_power_sum(power.sum, symbols, cfg.sigma_w2);
    p.composite_snr_db = snr_db_from_power_sum(composite.sum, symbols, cfg.sigma_w2);
    p.dirt_ser = alpha < 1.0
                     ? static_cast<double>(dirt_errors) / static_cast<double>(symbols)
                     : std::numeric_limits<double>::quiet_NaN();
    p.truncated = bit_errors < static_cast<std::uint64_t>(cfg.min_errors);
    return p;
}

}  // namespace

BerPoint run_point(const SimConfig& cfg, double design_power_db, double alpha, double sigma_s2) {
    const DpcSpec spec =
        make_spec(cfg.preset, db_to_power(design_power_db), cfg.r, cfg.strategy, alpha);
    const ChannelParams params{sigma_s2, cfg.sigma_w2, cfg.seed};

    std::vector<BlockOutcome> outcomes;
    std::uint64_t cum_errors = 0;
    int blocks_done = 0;
    while (blocks_done < cfg.max_blocks &&
           cum_errors < static_cast<std::uint64_t>(cfg.min_errors)) {
        const int chunk = std::min(kChunkBlocks, cfg.max_blocks - blocks_done);
        std::vector<BlockOutcome> chunk_out(chunk);
#pragma omp parallel for schedule(dynamic) num_threads(cfg.workers)
        for (int i = 0; i < chunk; ++i) {
            chunk_out[i] = run_block(spec, params, cfg.block_length,
                                     static_cast<std::uint64_t>(blocks_done) + i);
        }
        for (const BlockOutcome& o : chunk_out) {
            cum_errors += o.bit_errors;
            outcomes.push_back(o);
        }
        blocks_done += chunk;
    }
    return finalize_point(cfg, design_power_db, alpha, sigma_s2, outcomes);
}

BerPoint run_point_reference(const SimConfig& cfg, double design_power_db, double alpha,
                             double sigma_s2) {
    const DpcSpec spec =
        make_spec(cfg.preset, db_to_power(design_power_db), cfg.r, cfg.strategy, alpha);
    const ChannelParams params{sigma_s2, cfg.sigma_w2, cfg.seed};

    std::vector<BlockOutcome> outcomes;
    std::uint64_t cum_errors = 0;
    int blocks_done = 0;
    while (blocks_done < cfg.max_blocks &&
           cum_errors < static_cast<std::uint64_t>(cfg.min_errors)) {
        const int chunk = std::min(kChunkBlocks, cfg.max_blocks - blocks_done);
        for (int i = 0; i < chunk; ++i) {
            const BlockOutcome o = run_block(spec, params, cfg.block_length,
                                             static_cast<std::uint64_t>(blocks_done) + i);
            cum_errors += o.bit_errors;
            outcomes.push_back(o);
        }
        blocks_done += chunk;
    }
    return finalize_point(cfg, design_power_db, alpha, sigma_s2, outcomes);
}

std::vector<BerPoint> run_sweep(const SimConfig& cfg) {
    const std::vector<double> sigmas =
        cfg.sigma_s2_list.empty() ? std::vector<double>{cfg.sigma_s2} : cfg.sigma_s2_list;
    std::vector<BerPoint> points;
    for (double sigma : sigmas) {
        for (double p_db : cfg.design_power_db) {
            points.push_back(run_point(cfg, p_db, cfg.alpha, sigma));
        }
    }
    return points;
}

std::vector<BerPoint> run_awgn_baseline(const SimConfig& cfg) {
    SimConfig base = cfg;
    base.preset = TrellisPreset::Qam4_4State_R0_2_Awgn;
    base.r = 1;
    base.alpha = 0.0;
    base.sigma_s2 = 0.0;
    base.sigma_s2_list.clear();
    return run_sweep(base);
}

std::vector<BerPoint> run_alpha_sweep(const SimConfig& cfg) {
    if (cfg.design_power_db.empty()) {
        throw std::invalid_argument("alpha sweep needs a design power");
    }
    const std::vector<double> alphas =
        cfg.alpha_list.empty() ? std::vector<double>{cfg.alpha} : cfg.alpha_list;
    std::vector<BerPoint> points;
    for (double alpha : alphas) {
        points.push_back(run_point(cfg, cfg.design_power_db.front(), alpha, cfg.sigma_s2));
    }
    return points;
}

void emit_csv(const std::vector<BerPoint>& points, std::ostream& out) {
    out << "design_power_db,alpha,sigma_s2,measured_snr_db,bits,errors,ber,blocks,dirt_ser,"
           "truncated\n";
    char buf[128];
    for (const BerPoint& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,", p.design_power_db, p.alpha,
                      p.sigma_s2, p.measured_snr_db);
        out << buf << p.bits << ',' << p.errors << ',';
        std::snprintf(buf, sizeof buf, "%.17g,", p.ber);
        out << buf << p.blocks << ',';
        std::snprintf(buf, sizeof buf, "%.17g,", p.dirt_ser);
        out << buf << (p.truncated ? 1 : 0) << '\n';
    }
    if (!out) {
        throw std::runtime_error("CSV write failed");
    }
}

void emit_csv_file(const std::vector<BerPoint>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open CSV destination: " + path);
    }
    emit_csv(points, out);
}

std::vector<BerPoint> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("CSV is empty");
    }
    std::vector<BerPoint> points;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 10) {
            throw std::runtime_error("CSV row with wrong field count: " + line);
        }
        BerPoint p;
        p.design_power_db = std::stod(fields[0]);
        p.alpha = std::stod(fields[1]);
        p.sigma_s2 = std::stod(fields[2]);
        p.measured_snr_db = std::stod(fields[3]);
        p.bits = std::stoull(fields[4]);
        p.errors = std::stoull(fields[5]);
        p.ber = std::stod(fields[6]);
        p.blocks = std::stoull(fields[7]);
        p.dirt_ser = std::stod(fields[8]);
        p.truncated = std::stoi(fields[9]) != 0;
        points.push_back(p);
    }
    return points;
}

double probe_snr_db(const SimConfig& cfg, double design_power_db, double alpha, double sigma_s2) {
    const DpcSpec spec =
        make_spec(cfg.preset, db_to_power(design_power_db), cfg.r, cfg.strategy, alpha);
    const ChannelParams params{sigma_s2, cfg.sigma_w2, cfg.seed};
    Kahan power;
    std::uint64_t count = 0;
    for (std::uint64_t block = 0; block < 2; ++block) {
        const std::vector<std::uint8_t> bits = gen_message_bits(
            static_cast<std::size_t>(cfg.block_length) * cfg.r, params.seed,
            stream_id_for(block, StreamRole::Message));
        const std::vector<cplx> s =
            gen_dirt(cfg.block_length, params, stream_id_for(block, StreamRole::Dirt));
        const EncodedBlock enc = pip_encode(spec, bits, s);
        for (const cplx& x : enc.x) power.add(std::norm(x));
        count += enc.x.size();
    }
    return snr_db_from_power_sum(power.sum, count, cfg.sigma_w2);
}

double find_design_power_for_snr(const SimConfig& cfg, double alpha, double sigma_s2,
                                 double target_snr_db, double lo_db, double hi_db) {
    double f_lo = probe_snr_db(cfg, lo_db, alpha, sigma_s2);
    double f_hi = probe_snr_db(cfg, hi_db, alpha, sigma_s2);
    for (int tries = 0; f_lo > target_snr_db && tries < 8; ++tries) {
        lo_db -= 3.0;
        f_lo = probe_snr_db(cfg, lo_db, alpha, sigma_s2);
    }
    for (int tries = 0; f_hi < target_snr_db && tries < 8; ++tries) {
        hi_db += 3.0;
        f_hi = probe_snr_db(cfg, hi_db, alpha, sigma_s2);
    }
    if (f_lo > target_snr_db || f_hi < target_snr_db) {
        throw std::runtime_error("design power bracket does not reach the target SNR");
    }
    // Measured SNR rises monotonically with design power, so plain bisection
    // converges; stop once the midpoint is pinned within +/- 0.05 dB.
    while (hi_db - lo_db > 0.1) {
        const double mid = 0.5 * (lo_db + hi_db);
        if (probe_snr_db(cfg, mid, alpha, sigma_s2) < target_snr_db) {
            lo_db = mid;
        } else {
            hi_db = mid;
        }
    }
    return 0.5 * (lo_db + hi_db);
}

std::optional<double> snr_at_ber(const std::vector<BerPoint>& points, double target_ber) {
    if (target_ber <= 0.0) {
        throw std::invalid_argument("target BER must be positive");
    }
    auto effective_ber = [](const BerPoint& p) {
        return p.errors == 0 ? 0.3 / static_cast<double>(p.bits) : p.ber;
    };
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double a = effective_ber(points[i]);
        const double b = effective_ber(points[i + 1]);
        if ((a - target_ber) * (b - target_ber) > 0.0) continue;
        if (a == b) return points[i].measured_snr_db;
        const double t = (std::log10(target_ber) - std::log10(a)) / (std::log10(b) - std::log10(a));
        return points[i].measured_snr_db +
               t * (points[i + 1].measured_snr_db - points[i].measured_snr_db);
    }
    return std::nullopt;
}

std::vector<BerPoint> run_broadcast(const BroadcastScenario& sc, int block_length, int blocks,
                                    int workers) {
    if (block_length < 1 || blocks < 1) {
        throw std::invalid_argument("broadcast run needs positive block length and count");
    }
    const int r_strong = sc.strong.r();
    const int r_weak = sc.weak.r();

    struct Outcome {
        std::uint32_t strong_errors = 0;
        std::uint32_t weak_errors = 0;
        std::uint32_t via_strong_errors = 0;
        double power_sum = 0.0;
    };
    std::vector<Outcome> outcomes(blocks);

#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int b = 0; b < blocks; ++b) {
        const std::uint64_t block = static_cast<std::uint64_t>(b);
        const std::vector<std::uint8_t> m_strong =
            gen_message_bits(static_cast<std::size_t>(block_length) * r_strong, sc.seed,
                             stream_id_for(block, StreamRole::Message));
        const std::vector<std::uint8_t> m_weak =
            gen_message_bits(static_cast<std::size_t>(block_length) * r_weak, sc.seed,
                             stream_id_for(block, StreamRole::Dirt));
        const BroadcastBlock tx = broadcast_encode(sc, m_weak, m_strong);
        const StrongRxResult strong = strong_user_receive(sc, tx.x_sum, block);
        const std::vector<std::uint8_t> weak = weak_user_receive(sc, tx.x_sum, block);

        Outcome& o = outcomes[b];
        for (std::size_t i = 0; i < m_strong.size(); ++i) {
            o.strong_errors += m_strong[i] != strong.m_strong[i];
        }
        for (std::size_t i = 0; i < m_weak.size(); ++i) {
            o.weak_errors += m_weak[i] != weak[i];
            o.via_strong_errors += m_weak[i] != strong.m_weak_via_strong[i];
        }
        Kahan power;
        for (const cplx& x : tx.x_sum) power.add(std::norm(x));
        o.power_sum = power.sum;
    }

    Kahan power;
    std::uint64_t strong_errors = 0;
    std::uint64_t weak_errors = 0;
    std::uint64_t via_strong_errors = 0;
    for (const Outcome& o : outcomes) {
        power.add(o.power_sum);
        strong_errors += o.strong_errors;
        weak_errors += o.weak_errors;
        via_strong_errors += o.via_strong_errors;
    }
    const std::uint64_t symbols =
        static_cast<std::uint64_t>(blocks) * static_cast<std::uint64_t>(block_length);

    BerPoint strong_row;
    strong_row.design_power_db = power_to_db(sc.strong.design_power());
    strong_row.alpha = sc.strong.alpha;
    strong_row.sigma_s2 = sc.weak.design_power();
    strong_row.measured_snr_db =
        sc.sigma_w1_2 > 0.0 ? snr_db_from_power_sum(power.sum, symbols, sc.sigma_w1_2)
                            : std::numeric_limits<double>::infinity();
    strong_row.composite_snr_db = strong_row.measured_snr_db;
    strong_row.bits = symbols * r_strong;
    strong_row.errors = strong_errors;
    strong_row.ber = static_cast<double>(strong_errors) / static_cast<double>(strong_row.bits);
    strong_row.blocks = blocks;
    strong_row.dirt_ser =
        static_cast<double>(via_strong_errors) / static_cast<double>(symbols * r_weak);
    strong_row.truncated = false;

    BerPoint weak_row;
    weak_row.design_power_db = power_to_db(sc.weak.design_power());
    weak_row.alpha = 0.0;
    weak_row.sigma_s2 = sc.strong.design_power();
    weak_row.measured_snr_db = snr_db_from_power_sum(power.sum, symbols, sc.sigma_w2_2);
    weak_row.composite_snr_db = weak_row.measured_snr_db;
    weak_row.bits = symbols * r_weak;
    weak_row.errors = weak_errors;
    weak_row.ber = static_cast<double>(weak_errors) / static_cast<double>(weak_row.bits);
    weak_row.blocks = blocks;
    weak_row.dirt_ser = std::numeric_limits<double>::quiet_NaN();
    weak_row.truncated = false;

    return {strong_row, weak_row};
}

SimConfig SimConfig::from_config(Config& cfg) {
    SimConfig sim;
    const std::string preset_name = cfg.require_string("trellis");
    const auto preset = parse_preset(preset_name);
    if (!preset) {
        throw std::invalid_argument("unknown trellis preset: " + preset_name);
    }
    sim.preset = *preset;
    if (cfg.has("constellation")) {
        const std::string cname = cfg.require_string("constellation");
        const auto kind = parse_constellation(cname);
        if (!kind) {
            throw std::invalid_argument("unknown constellation: " + cname);
        }
        if (*kind != preset_constellation(sim.preset)) {
            throw std::invalid_argument("constellation '" + cname +
                                        "' does not match trellis preset '" + preset_name + "'");
        }
    }
    const std::string strat = cfg.get_string("bin_strategy", "paired-max-spread");
    const auto strategy = parse_bin_strategy(strat);
    if (!strategy) {
        throw std::invalid_argument("unknown bin strategy: " + strat);
    }
    sim.strategy = *strategy;
    sim.r = cfg.get_int("r", 1);
    sim.alpha = cfg.get_double("alpha", sim.alpha);
    sim.sigma_s2 = cfg.get_double("sigma_s2", sim.sigma_s2);
    sim.sigma_w2 = cfg.get_double("sigma_w2", sim.sigma_w2);
    sim.block_length = cfg.get_int("block_length", sim.block_length);
    sim.min_errors = cfg.get_int("min_errors", sim.min_errors);
    sim.max_blocks = cfg.get_int("max_blocks", sim.max_blocks);
    sim.workers = cfg.get_int("workers", sim.workers);
    sim.seed = cfg.get_u64("seed", sim.seed);
    sim.design_power_db = cfg.get_double_list("design_power_db", sim.design_power_db);
    sim.alpha_list = cfg.get_double_list("alpha_list", sim.alpha_list);
    sim.sigma_s2_list = cfg.get_double_list("sigma_s2_list", sim.sigma_s2_list);
    if (sim.block_length < 1 || sim.min_errors < 1 || sim.max_blocks < 1 || sim.workers < 1) {
        throw std::invalid_argument("block_length, min_errors, max_blocks, workers must be >= 1");
    }
    return sim;
}

BroadcastRunConfig BroadcastRunConfig::from_config(Config& cfg) {
    const auto need_preset = [&](const char* key) {
        const std::string name = cfg.require_string(key);
        const auto preset = parse_preset(name);
        if (!preset) throw std::invalid_argument(std::string("unknown trellis preset: ") + name);
        return *preset;
    };
    const TrellisPreset strong_preset = need_preset("strong_trellis");
    const TrellisPreset weak_preset = need_preset("weak_trellis");
    const std::string strat = cfg.get_string("bin_strategy", "paired-max-spread");
    const auto strategy = parse_bin_strategy(strat);
    if (!strategy) {
        throw std::invalid_argument("unknown bin strategy: " + strat);
    }

    BroadcastRunConfig run;
    run.scenario = make_broadcast(
        strong_preset, db_to_power(cfg.get_double("strong_power_db", 16.3)),
        cfg.get_int("strong_r", 1), *strategy, cfg.get_double("alpha", 0.9), weak_preset,
        db_to_power(cfg.get_double("weak_power_db", 10.0)), cfg.get_double("sigma_w1_2", 1.0),
        cfg.get_double("sigma_w2_2", 4.0), cfg.get_u64("seed", 1));
    run.block_length = cfg.get_int("block_length", run.block_length);
    run.blocks = cfg.get_int("blocks", run.blocks);
    run.workers = cfg.get_int("workers", run.workers);
    if (run.block_length < 1 || run.blocks < 1 || run.workers < 1) {
        throw std::invalid_argument("block_length, blocks, workers must be >= 1");
    }
    return run;
}

}  // namespace dpc
