#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dpc/harness.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    dpc::SimConfig cfg;
    cfg.preset = dpc::TrellisPreset::Qam16_8State_R0_3;
    cfg.r = 1;
    cfg.alpha = 0.9;
    cfg.sigma_s2 = 1.0;
    cfg.sigma_w2 = 1.0;
    cfg.block_length = 20000;
    cfg.min_errors = 1 << 30;  // never satisfied: fixed workload of max_blocks blocks
    cfg.max_blocks = 24;
    cfg.seed = 7;
#ifdef _OPENMP
    cfg.workers = omp_get_max_threads();
#endif
    if (argc > 1) cfg.workers = std::atoi(argv[1]);
    if (cfg.workers < 1) cfg.workers = 1;

    const double power_db = 16.3;
    const std::uint64_t symbols =
        static_cast<std::uint64_t>(cfg.max_blocks) * cfg.block_length;

    auto t0 = std::chrono::steady_clock::now();
    const dpc::BerPoint serial = dpc::run_point_reference(cfg, power_db, cfg.alpha, cfg.sigma_s2);
    const double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const dpc::BerPoint parallel = dpc::run_point(cfg, power_db, cfg.alpha, cfg.sigma_s2);
    const double t_parallel = seconds_since(t0);

    std::printf("workload: %llu symbols (%d blocks x %d)\n",
                static_cast<unsigned long long>(symbols), cfg.max_blocks, cfg.block_length);
    std::printf("serial reference: %.3f s  (%.0f symbols/s)\n", t_serial, symbols / t_serial);
    std::printf("parallel (%d workers): %.3f s  (%.0f symbols/s)\n", cfg.workers, t_parallel,
                symbols / t_parallel);
    std::printf("speedup: %.2fx\n", t_serial / t_parallel);

    const bool same = serial.errors == parallel.errors && serial.bits == parallel.bits &&
                      serial.measured_snr_db == parallel.measured_snr_db &&
                      serial.ber == parallel.ber && serial.blocks == parallel.blocks;
    std::printf("results identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
