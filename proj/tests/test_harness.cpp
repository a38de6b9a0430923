#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dpc/config.hpp"
#include "dpc/harness.hpp"

using dpc::BerPoint;
using dpc::Config;
using dpc::SimConfig;

namespace {

bool same_point(const BerPoint& a, const BerPoint& b) {
    const bool nan_match = (std::isnan(a.dirt_ser) && std::isnan(b.dirt_ser)) ||
                           a.dirt_ser == b.dirt_ser;
    return a.design_power_db == b.design_power_db && a.alpha == b.alpha &&
           a.sigma_s2 == b.sigma_s2 && a.measured_snr_db == b.measured_snr_db &&
           a.composite_snr_db == b.composite_snr_db && a.bits == b.bits &&
           a.errors == b.errors && a.ber == b.ber && a.blocks == b.blocks && nan_match &&
           a.truncated == b.truncated;
}

SimConfig quick_config() {
    SimConfig cfg;
    cfg.preset = dpc::TrellisPreset::Qam16_8State_R0_3;
    cfg.r = 1;
    cfg.alpha = 0.9;
    cfg.sigma_s2 = 1.0;
    cfg.sigma_w2 = 1.0;
    cfg.block_length = 500;
    cfg.min_errors = 20;
    cfg.max_blocks = 16;
    cfg.workers = 1;
    cfg.seed = 5;
    return cfg;
}

}  // namespace

TEST_CASE("config file parsing") {
    Config cfg = Config::parse_string(
        "# comment line\n"
        "trellis = qam16_8state_r0_3\n"
        "\n"
        "alpha = 0.85   # trailing comment\n"
        "design_power_db = 9.0, 10.5,12\n");
    CHECK(cfg.has("trellis"));
    CHECK_FALSE(cfg.has("seed"));
    CHECK(cfg.require_string("trellis") == "qam16_8state_r0_3");
    CHECK(cfg.get_double("alpha", 0.0) == 0.85);
    CHECK(cfg.get_double_list("design_power_db", {}) == std::vector<double>{9.0, 10.5, 12.0});
    CHECK(cfg.get_int("missing", 7) == 7);
    CHECK_NOTHROW(cfg.finish());

    CHECK_THROWS_AS(Config::parse_string("a = 1\na = 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(Config::parse_string("= 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(Config::parse_string("novalue\n"), std::invalid_argument);

    Config unused = Config::parse_string("left_over = 1\n");
    CHECK_THROWS_AS(unused.finish(), std::invalid_argument);

    Config bad_list = Config::parse_string("xs = 1,,2\n");
    CHECK_THROWS_AS(bad_list.get_double_list("xs", {}), std::invalid_argument);
}

TEST_CASE("sim config from config text") {
    Config cfg = Config::parse_string(
        "trellis = pam8_8state_r0_2\n"
        "constellation = pam8\n"
        "bin_strategy = coset-split\n"
        "r = 1\n"
        "alpha = 0.8\n"
        "sigma_s2 = 2.0\n"
        "sigma_w2 = 0.5\n"
        "block_length = 1000\n"
        "min_errors = 50\n"
        "max_blocks = 12\n"
        "workers = 2\n"
        "seed = 99\n"
        "design_power_db = 8, 9\n"
        "alpha_list = 0.1, 0.2\n"
        "sigma_s2_list = 1, 2, 3\n");
    const SimConfig sim = SimConfig::from_config(cfg);
    CHECK_NOTHROW(cfg.finish());
    CHECK(sim.preset == dpc::TrellisPreset::Pam8_8State_R0_2);
    CHECK(sim.strategy == dpc::BinStrategy::CosetSplit);
    CHECK(sim.r == 1);
    CHECK(sim.alpha == 0.8);
    CHECK(sim.sigma_s2 == 2.0);
    CHECK(sim.sigma_w2 == 0.5);
    CHECK(sim.block_length == 1000);
    CHECK(sim.min_errors == 50);
    CHECK(sim.max_blocks == 12);
    CHECK(sim.workers == 2);
    CHECK(sim.seed == 99);
    CHECK(sim.design_power_db == std::vector<double>{8.0, 9.0});
    CHECK(sim.alpha_list == std::vector<double>{0.1, 0.2});
    CHECK(sim.sigma_s2_list == std::vector<double>{1.0, 2.0, 3.0});

    SUBCASE("unknown keys fail at finish") {
        Config extra = Config::parse_string("trellis = qam16_8state_r0_3\nbogus = 1\n");
        (void)SimConfig::from_config(extra);
        CHECK_THROWS_AS(extra.finish(), std::invalid_argument);
    }
    SUBCASE("constellation must match the trellis") {
        Config bad = Config::parse_string("trellis = qam16_8state_r0_3\nconstellation = qam8\n");
        CHECK_THROWS_AS(SimConfig::from_config(bad), std::invalid_argument);
    }
    SUBCASE("counts must be positive") {
        Config bad = Config::parse_string("trellis = qam16_8state_r0_3\nworkers = 0\n");
        CHECK_THROWS_AS(SimConfig::from_config(bad), std::invalid_argument);
    }
    SUBCASE("missing trellis") {
        Config bad = Config::parse_string("alpha = 0.9\n");
        CHECK_THROWS_AS(SimConfig::from_config(bad), std::invalid_argument);
    }
    SUBCASE("bad strategy name") {
        Config bad = Config::parse_string("trellis = qam16_8state_r0_3\nbin_strategy = spiral\n");
        CHECK_THROWS_AS(SimConfig::from_config(bad), std::invalid_argument);
    }
}

TEST_CASE("csv emission round-trips bit for bit") {
    BerPoint a;
    a.design_power_db = 16.3;
    a.alpha = 0.9;
    a.sigma_s2 = 1.0 / 3.0;
    a.measured_snr_db = 10.123456789012345;
    a.bits = 1234567;
    a.errors = 101;
    a.ber = 101.0 / 1234567.0;
    a.blocks = 13;
    a.dirt_ser = 0.25;
    a.truncated = false;
    BerPoint b;
    b.design_power_db = 5.0;
    b.alpha = 1.0;
    b.sigma_s2 = 2.0;
    b.measured_snr_db = -3.5;
    b.bits = 10;
    b.errors = 0;
    b.ber = 0.0;
    b.blocks = 1;
    b.dirt_ser = std::numeric_limits<double>::quiet_NaN();
    b.truncated = true;

    std::stringstream io;
    dpc::emit_csv({a, b}, io);
    const std::string text = io.str();
    CHECK(text.substr(0, text.find('\n')) ==
          "design_power_db,alpha,sigma_s2,measured_snr_db,bits,errors,ber,blocks,dirt_ser,"
          "truncated");
    const std::vector<BerPoint> back = dpc::parse_csv(io);
    REQUIRE(back.size() == 2);
    CHECK(same_point(back[0], a));
    CHECK(same_point(back[1], b));

    std::stringstream empty_io;
    dpc::emit_csv({}, empty_io);
    CHECK(dpc::parse_csv(empty_io).empty());

    std::stringstream bad("design_power_db\n1,2,3\n");
    CHECK_THROWS_AS(dpc::parse_csv(bad), std::runtime_error);
    std::stringstream none("");
    CHECK_THROWS_AS(dpc::parse_csv(none), std::runtime_error);
}

TEST_CASE("monte carlo points replay and ignore worker count") {
    SimConfig cfg = quick_config();
    const BerPoint p1 = dpc::run_point(cfg, 8.0, cfg.alpha, cfg.sigma_s2);
    const BerPoint p2 = dpc::run_point(cfg, 8.0, cfg.alpha, cfg.sigma_s2);
    CHECK(same_point(p1, p2));

    SimConfig threaded = cfg;
    threaded.workers = 3;
    CHECK(same_point(p1, dpc::run_point(threaded, 8.0, cfg.alpha, cfg.sigma_s2)));
    CHECK(same_point(p1, dpc::run_point_reference(cfg, 8.0, cfg.alpha, cfg.sigma_s2)));

    SimConfig reseeded = cfg;
    reseeded.seed = 6;
    const BerPoint q = dpc::run_point(reseeded, 8.0, cfg.alpha, cfg.sigma_s2);
    CHECK(q.measured_snr_db != p1.measured_snr_db);

    CHECK(p1.bits == p1.blocks * 500);
    CHECK(p1.ber == static_cast<double>(p1.errors) / static_cast<double>(p1.bits));
    CHECK(p1.blocks % 8 == 0);  // stopping only at chunk boundaries
    // Dirt adds power on top of the transmit signal, so the channel-input
    // SNR sits above the transmit SNR whenever sigma_s2 > 0.
    CHECK(p1.composite_snr_db > p1.measured_snr_db);
}

TEST_CASE("stopping rules") {
    SUBCASE("hitting max_blocks marks the point truncated") {
        SimConfig cfg = quick_config();
        cfg.block_length = 200;
        cfg.max_blocks = 2;
        const BerPoint p = dpc::run_point(cfg, 16.3, cfg.alpha, cfg.sigma_s2);
        CHECK(p.truncated);
        CHECK(p.blocks == 2);
        CHECK(p.errors == 0);  // enormous margin at this design power
        CHECK(p.ber == 0.0);
        CHECK(p.dirt_ser == 0.0);
    }
    SUBCASE("enough errors clears the flag") {
        SimConfig cfg = quick_config();
        cfg.min_errors = 5;
        const BerPoint p = dpc::run_point(cfg, 6.0, cfg.alpha, cfg.sigma_s2);
        CHECK_FALSE(p.truncated);
        CHECK(p.errors >= 5);
    }
}

TEST_CASE("full presubtraction reports no dirt symbol rate") {
    SimConfig cfg = quick_config();
    cfg.block_length = 100;
    cfg.max_blocks = 8;
    cfg.min_errors = 1000000;
    const BerPoint p = dpc::run_point(cfg, 12.0, 1.0, cfg.sigma_s2);
    CHECK(p.alpha == 1.0);
    CHECK(std::isnan(p.dirt_ser));
}

TEST_CASE("awgn baseline measures its design power directly") {
    SimConfig cfg = quick_config();
    cfg.block_length = 300;
    cfg.max_blocks = 8;
    cfg.min_errors = 1;
    cfg.design_power_db = {6.0};
    const std::vector<BerPoint> pts = dpc::run_awgn_baseline(cfg);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].alpha == 0.0);
    CHECK(pts[0].sigma_s2 == 0.0);
    // 4-QAM has constant modulus, so the transmit power is the design power.
    CHECK(pts[0].measured_snr_db == doctest::Approx(6.0).epsilon(1e-9));
    // No dirt means the channel input is the transmit signal itself.
    CHECK(pts[0].composite_snr_db == pts[0].measured_snr_db);
}

TEST_CASE("sweeps stamp their parameters in order") {
    SimConfig cfg = quick_config();
    cfg.block_length = 100;
    cfg.max_blocks = 8;
    cfg.min_errors = 1;
    cfg.design_power_db = {8.0, 10.0};
    cfg.sigma_s2_list = {0.5, 2.0};
    const std::vector<BerPoint> pts = dpc::run_sweep(cfg);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].sigma_s2 == 0.5);
    CHECK(pts[0].design_power_db == 8.0);
    CHECK(pts[1].sigma_s2 == 0.5);
    CHECK(pts[1].design_power_db == 10.0);
    CHECK(pts[2].sigma_s2 == 2.0);
    CHECK(pts[2].design_power_db == 8.0);
    CHECK(pts[3].sigma_s2 == 2.0);
    CHECK(pts[3].design_power_db == 10.0);

    cfg.design_power_db = {9.0};
    cfg.sigma_s2_list.clear();
    cfg.alpha_list = {0.3, 0.9};
    const std::vector<BerPoint> alphas = dpc::run_alpha_sweep(cfg);
    REQUIRE(alphas.size() == 2);
    CHECK(alphas[0].alpha == 0.3);
    CHECK(alphas[1].alpha == 0.9);
    CHECK(alphas[0].design_power_db == 9.0);
    // Presubtraction strength moves the realized transmit power.
    CHECK(alphas[0].measured_snr_db != alphas[1].measured_snr_db);
}

TEST_CASE("design power search hits the requested measured snr") {
    SimConfig cfg = quick_config();
    cfg.block_length = 2000;
    SUBCASE("interference-free probe is the identity") {
        SimConfig base = cfg;
        base.preset = dpc::TrellisPreset::Qam4_4State_R0_2_Awgn;
        base.r = 1;
        CHECK(dpc::probe_snr_db(base, 7.3, 0.0, 0.0) == doctest::Approx(7.3).epsilon(1e-9));
        const double found = dpc::find_design_power_for_snr(base, 0.0, 0.0, 10.0);
        CHECK(found == doctest::Approx(10.0).epsilon(0.006));
    }
    SUBCASE("presubtraction overhead is compensated") {
        const double found = dpc::find_design_power_for_snr(cfg, 0.9, 1.0, 10.6);
        CHECK(std::abs(dpc::probe_snr_db(cfg, found, 0.9, 1.0) - 10.6) < 0.1);
    }
    SUBCASE("unreachable targets throw") {
        CHECK_THROWS_AS(dpc::find_design_power_for_snr(cfg, 0.9, 1.0, -40.0), std::runtime_error);
    }
}

TEST_CASE("snr_at_ber interpolates on a log scale") {
    auto mk = [](double snr, std::uint64_t errors, std::uint64_t bits) {
        BerPoint p;
        p.measured_snr_db = snr;
        p.errors = errors;
        p.bits = bits;
        p.ber = static_cast<double>(errors) / static_cast<double>(bits);
        return p;
    };
    const BerPoint a = mk(9.0, 100, 1000000);    // 1e-4
    const BerPoint b = mk(11.0, 10, 10000000);   // 1e-6
    const auto mid = dpc::snr_at_ber({a, b}, 1e-5);
    REQUIRE(mid.has_value());
    CHECK(*mid == doctest::Approx(10.0).epsilon(1e-12));

    // Zero-error points count as 0.3/bits.
    const BerPoint c = mk(11.0, 0, 3000000);  // effective 1e-7
    const auto skew = dpc::snr_at_ber({a, c}, 1e-5);
    REQUIRE(skew.has_value());
    CHECK(*skew == doctest::Approx(9.0 + 2.0 / 3.0).epsilon(1e-9));

    CHECK_FALSE(dpc::snr_at_ber({a, b}, 1e-2).has_value());
    CHECK_FALSE(dpc::snr_at_ber({a}, 1e-5).has_value());
    CHECK_THROWS_AS(dpc::snr_at_ber({a, b}, 0.0), std::invalid_argument);

    // The first bracketing pair in order wins.
    const auto first = dpc::snr_at_ber({a, b, mk(10.5, 100, 1000000), mk(12.0, 10, 10000000)}, 1e-5);
    REQUIRE(first.has_value());
    CHECK(*first == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("broadcast run emits one row per user and ignores worker count") {
    const dpc::BroadcastScenario sc =
        dpc::make_broadcast(dpc::TrellisPreset::Qam16_8State_R0_3, 16.0, 1,
                            dpc::BinStrategy::PairedMaxSpread, 0.9,
                            dpc::TrellisPreset::Qam4_4State_R0_2_Awgn, 0.2, 1e-4, 1.0, 31);
    const std::vector<BerPoint> rows = dpc::run_broadcast(sc, 50, 4, 1);
    REQUIRE(rows.size() == 2);
    const BerPoint& strong = rows[0];
    const BerPoint& weak = rows[1];
    CHECK(strong.design_power_db == dpc::power_to_db(16.0));
    CHECK(strong.alpha == 0.9);
    CHECK(strong.sigma_s2 == sc.weak.design_power());
    CHECK(strong.bits == 4 * 50);
    CHECK(strong.blocks == 4);
    CHECK(strong.errors == 0);  // wide margin scenario
    CHECK(strong.dirt_ser == 0.0);
    CHECK_FALSE(std::isnan(strong.dirt_ser));
    CHECK(weak.design_power_db == dpc::power_to_db(0.2));
    CHECK(weak.sigma_s2 == 16.0);
    CHECK(weak.bits == 4 * 50);
    CHECK(std::isnan(weak.dirt_ser));

    const std::vector<BerPoint> threaded = dpc::run_broadcast(sc, 50, 4, 3);
    REQUIRE(threaded.size() == 2);
    CHECK(same_point(rows[0], threaded[0]));
    CHECK(same_point(rows[1], threaded[1]));

    CHECK_THROWS_AS(dpc::run_broadcast(sc, 0, 4, 1), std::invalid_argument);
}

TEST_CASE("broadcast run config parses") {
    Config cfg = Config::parse_string(
        "strong_trellis = qam16_8state_r0_3\n"
        "weak_trellis = qam4_4state_r0_2_awgn\n"
        "bin_strategy = paired-max-spread\n"
        "strong_power_db = 16.3\n"
        "strong_r = 1\n"
        "alpha = 0.9\n"
        "weak_power_db = 3.0\n"
        "sigma_w1_2 = 0.5\n"
        "sigma_w2_2 = 2.0\n"
        "seed = 11\n"
        "block_length = 400\n"
        "blocks = 6\n"
        "workers = 2\n");
    const dpc::BroadcastRunConfig run = dpc::BroadcastRunConfig::from_config(cfg);
    CHECK_NOTHROW(cfg.finish());
    CHECK(run.block_length == 400);
    CHECK(run.blocks == 6);
    CHECK(run.workers == 2);
    CHECK(run.scenario.sigma_w1_2 == 0.5);
    CHECK(run.scenario.sigma_w2_2 == 2.0);
    CHECK(run.scenario.seed == 11);
    CHECK(run.scenario.strong.design_power() == doctest::Approx(dpc::db_to_power(16.3)));
    CHECK(run.scenario.weak.design_power() == doctest::Approx(dpc::db_to_power(3.0)));

    Config bad = Config::parse_string(
        "strong_trellis = qam16_8state_r0_3\n"
        "weak_trellis = qam4_4state_r0_2_awgn\n"
        "sigma_w1_2 = 3.0\n"
        "sigma_w2_2 = 2.0\n");
    CHECK_THROWS_AS(dpc::BroadcastRunConfig::from_config(bad), std::invalid_argument);
}
