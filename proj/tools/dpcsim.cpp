#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpc/harness.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("config", opts.config_path, "flat key = value config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_path, "CSV destination (default: stdout)");
    cmd->add_option("--seed", opts.seed, "override the config seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--workers", opts.workers, "override the config worker count")
        ->check(CLI::PositiveNumber);
}

dpc::SimConfig load_sim(const CommonOpts& opts) {
    dpc::Config cfg = dpc::Config::parse_file(opts.config_path);
    dpc::SimConfig sim = dpc::SimConfig::from_config(cfg);
    cfg.finish();
    if (opts.seed_set) sim.seed = opts.seed;
    if (opts.workers > 0) sim.workers = opts.workers;
    return sim;
}

void deliver(const std::vector<dpc::BerPoint>& points, const CommonOpts& opts) {
    if (opts.out_path.empty()) {
        dpc::emit_csv(points, std::cout);
    } else {
        dpc::emit_csv_file(points, opts.out_path);
    }
}

void describe_spec(const dpc::DpcSpec& spec) {
    const dpc::Constellation& c = spec.constellation();
    std::cout << "preset: " << to_string(spec.trellis.preset) << "\n";
    std::cout << "constellation: " << to_string(c.kind) << "  avg_power: " << c.avg_power
              << "  scale: " << c.scale << "\n";
    std::cout << "labels (label: grid_re grid_im):\n";
    for (int l = 0; l < c.size(); ++l) {
        std::cout << "  " << l << ": " << c.grid[l][0] << " " << c.grid[l][1] << "\n";
    }
    const dpc::PartitionChain chain = dpc::build_partition(c);
    std::cout << "partition levels (min intra-coset squared distance in units of scale^2):\n";
    for (std::size_t k = 0; k < chain.levels.size(); ++k) {
        std::cout << "  level " << k << " (d2=" << chain.min_sq_distance[k] / (c.scale * c.scale)
                  << "):";
        for (const auto& coset : chain.levels[k]) {
            std::cout << " {";
            for (std::size_t i = 0; i < coset.size(); ++i) {
                std::cout << (i ? "," : "") << coset[i];
            }
            std::cout << "}";
        }
        std::cout << "\n";
    }
    std::cout << "trellis: " << spec.trellis.num_states << " states, r0 = " << spec.r0()
              << ", r = " << spec.r() << ", bins: " << to_string(spec.bins.strategy) << "\n";
    std::cout << "edges (state: [edge e] -> next_state/label, | separates bins):\n";
    for (int s = 0; s < spec.trellis.num_states; ++s) {
        std::cout << "  state " << s << ":";
        for (std::size_t b = 0; b < spec.bins.bins[s].size(); ++b) {
            if (b) std::cout << " |";
            for (int e : spec.bins.bins[s][b]) {
                const dpc::TrellisEdge& edge = spec.trellis.edges[s][e];
                std::cout << " e" << e << "->" << edge.next_state << "/" << edge.label;
            }
        }
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dirty-paper trellis coding simulator"};
    app.require_subcommand(1);

    CommonOpts sim_opts, base_opts, alpha_opts, bc_opts;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "BER sweep over design powers (and optional dirt-power list)");
    add_common(simulate, sim_opts);
    CLI::App* baseline =
        app.add_subcommand("baseline", "interference-free reference curve (4-QAM, 4 states)");
    add_common(baseline, base_opts);
    CLI::App* alpha_sweep =
        app.add_subcommand("alpha-sweep", "sweep the presubtraction fraction at fixed design power");
    add_common(alpha_sweep, alpha_opts);
    CLI::App* broadcast = app.add_subcommand("broadcast", "two-user downlink Monte-Carlo");
    add_common(broadcast, bc_opts);

    std::string describe_preset = "qam16_8state_r0_3";
    std::string describe_strategy = "paired-max-spread";
    int describe_r = 1;
    double describe_power = 10.0;
    CLI::App* describe = app.add_subcommand("describe", "dump constellation and trellis tables");
    describe->add_option("--trellis", describe_preset, "trellis preset");
    describe->add_option("--bin-strategy", describe_strategy, "bin strategy (or 'unit')");
    describe->add_option("--r", describe_r, "message bits per symbol")->check(CLI::PositiveNumber);
    describe->add_option("--power", describe_power, "design power (linear units)")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            deliver(dpc::run_sweep(load_sim(sim_opts)), sim_opts);
        } else if (*baseline) {
            deliver(dpc::run_awgn_baseline(load_sim(base_opts)), base_opts);
        } else if (*alpha_sweep) {
            deliver(dpc::run_alpha_sweep(load_sim(alpha_opts)), alpha_opts);
        } else if (*broadcast) {
            dpc::Config cfg = dpc::Config::parse_file(bc_opts.config_path);
            dpc::BroadcastRunConfig run = dpc::BroadcastRunConfig::from_config(cfg);
            cfg.finish();
            if (bc_opts.seed_set) run.scenario.seed = bc_opts.seed;
            if (bc_opts.workers > 0) run.workers = bc_opts.workers;
            deliver(dpc::run_broadcast(run.scenario, run.block_length, run.blocks, run.workers),
                    bc_opts);
        } else if (*describe) {
            const auto preset = dpc::parse_preset(describe_preset);
            if (!preset) throw std::invalid_argument("unknown trellis preset: " + describe_preset);
            const auto strategy = dpc::parse_bin_strategy(describe_strategy);
            if (!strategy) {
                throw std::invalid_argument("unknown bin strategy: " + describe_strategy);
            }
            dpc::DpcSpec spec;
            spec.trellis = dpc::build_trellis(
                *preset,
                dpc::build_constellation(preset_constellation(*preset), describe_power));
            spec.bins = (*strategy == dpc::BinStrategy::Unit || describe_r == spec.trellis.r0)
                            ? dpc::unit_bins(spec.trellis)
                            : dpc::build_bins(spec.trellis, describe_r, *strategy);
            describe_spec(spec);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
