#include "manet/scenario/config.hpp"

#include <doctest.h>

using namespace manet;

TEST_CASE("an empty file yields the reference defaults") {
    const ScenarioConfig cfg = parse_scenario("");
    CHECK(cfg.node_count == 50);
    CHECK(cfg.area_x_m == doctest::Approx(1500.0));
    CHECK(cfg.area_y_m == doctest::Approx(500.0));
    CHECK(cfg.sim_time_s == doctest::Approx(100.0));
    CHECK(cfg.range_m == doctest::Approx(250.0));
    CHECK(cfg.speed_mps == doctest::Approx(5.0));
    CHECK(cfg.pause_s == doctest::Approx(10.0));
    CHECK(cfg.energy_rx_w == doctest::Approx(0.395));
    CHECK(cfg.energy_tx_w == doctest::Approx(0.660));
    CHECK(cfg.energy_idle_w == doctest::Approx(0.035));
    CHECK(cfg.energy_initial_j == doctest::Approx(4.7));
    CHECK(cfg.channel_rate_bps == doctest::Approx(2e6));
    CHECK(cfg.flows.empty());
    // Default packet size applies when a flow omits it.
    CHECK(FlowConfig{}.packet_bytes == 512);
}

TEST_CASE("derived radio thresholds make the configured range the reception edge") {
    const ScenarioConfig cfg = parse_scenario("");
    const RadioParams rp = cfg.radio_params();
    const double at_range = received_power_dbm(rp.max_power_dbm, cfg.range_m, rp);
    CHECK(rp.rx_threshold_dbm == doctest::Approx(at_range).epsilon(1e-12));
    CHECK(can_receive(at_range, rp));
    CHECK_FALSE(can_receive(received_power_dbm(rp.max_power_dbm, cfg.range_m + 0.5, rp), rp));
    CHECK(rp.carrier_sense_threshold_dbm <= rp.rx_threshold_dbm);
}

TEST_CASE("node_count below two is a named validation error") {
    try {
        (void)parse_scenario("sim.node_count = 1\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        REQUIRE(e.issues.size() >= 1);
        CHECK(e.issues[0].find("sim.node_count") != std::string::npos);
    }
}

TEST_CASE("a flow referencing a missing node is a named validation error") {
    const std::string text = "sim.node_count = 50\n"
                             "flow.0.src = 1\n"
                             "flow.0.dst = 99\n"
                             "flow.0.rbw_bps = 10000\n"
                             "flow.0.rate_bps = 10000\n";
    try {
        (void)parse_scenario(text);
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        bool found = false;
        for (const auto& issue : e.issues) {
            found = found || (issue.find("flow.0.dst") != std::string::npos && issue.find("99") != std::string::npos);
        }
        CHECK(found);
    }
}

TEST_CASE("unknown keys are reported with their line") {
    try {
        (void)parse_scenario("sim.time_s = 10\nbogus.key = 1\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        REQUIRE(e.issues.size() == 1);
        CHECK(e.issues[0].find("line 2") != std::string::npos);
        CHECK(e.issues[0].find("bogus.key") != std::string::npos);
    }
}

TEST_CASE("malformed values are reported with their line") {
    try {
        (void)parse_scenario("sim.time_s = fast\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        REQUIRE(e.issues.size() == 1);
        CHECK(e.issues[0].find("line 1") != std::string::npos);
    }
}

TEST_CASE("comments and blank lines are ignored") {
    const ScenarioConfig cfg = parse_scenario("# full-line comment\n\nsim.time_s = 42 # trailing\n");
    CHECK(cfg.sim_time_s == doctest::Approx(42.0));
}

TEST_CASE("protocol selects the default toggle set") {
    ScenarioConfig mcba = parse_scenario("protocol = mcba\n");
    CHECK(mcba.toggles().link_filter);
    CHECK(mcba.toggles().power_control);
    CHECK(mcba.toggles().congestion_control);
    CHECK(mcba.toggles().admission_control);

    ScenarioConfig base = parse_scenario("protocol = aodv-baseline\n");
    CHECK_FALSE(base.toggles().link_filter);
    CHECK_FALSE(base.toggles().power_control);
    CHECK_FALSE(base.toggles().congestion_control);
    CHECK_FALSE(base.toggles().admission_control);

    ScenarioConfig ablation = parse_scenario("protocol = mcba\ntoggles.power_control = false\n");
    CHECK(ablation.toggles().link_filter);
    CHECK_FALSE(ablation.toggles().power_control);
}

TEST_CASE("sweep specs need parameter, values, and seeds") {
    const std::string good = "sweep.parameter = node_count\n"
                             "sweep.values = 25,50\n"
                             "sweep.seeds = 1,2,3\n";
    const SweepSpec spec = parse_sweep(good);
    CHECK(spec.parameter == SweepParam::NodeCount);
    CHECK(spec.values == std::vector<double>{25, 50});
    CHECK(spec.seeds == std::vector<std::uint64_t>{1, 2, 3});

    CHECK_THROWS_AS((void)parse_sweep("sweep.parameter = node_count\n"), ScenarioError);
    CHECK_THROWS_AS((void)parse_scenario(good), ScenarioError); // sweep keys are not scenario keys
}

TEST_CASE("cell seeds are stable and distinct per coordinate") {
    const auto s = cell_seed(1, 25, 0, Protocol::Mcba);
    CHECK(s == cell_seed(1, 25, 0, Protocol::Mcba));
    CHECK(s != cell_seed(1, 25, 0, Protocol::AodvBaseline));
    CHECK(s != cell_seed(1, 50, 0, Protocol::Mcba));
    CHECK(s != cell_seed(1, 25, 1, Protocol::Mcba));
    CHECK(s != cell_seed(2, 25, 0, Protocol::Mcba));
}

TEST_CASE("the manifest dump parses back to the same configuration") {
    const std::string text = "sim.node_count = 10\n"
                             "protocol = mcba\n"
                             "flow.0.src = 0\n"
                             "flow.0.dst = 5\n"
                             "flow.0.rbw_bps = 50000\n"
                             "flow.0.rate_bps = 50000\n"
                             "flow.0.start_s = 1\n";
    const ScenarioConfig cfg = parse_scenario(text);
    const ScenarioConfig round = parse_scenario(dump_scenario(cfg));
    CHECK(round.node_count == cfg.node_count);
    CHECK(round.flows.size() == cfg.flows.size());
    CHECK(round.flows[0].rbw_bps == doctest::Approx(cfg.flows[0].rbw_bps));
    CHECK(dump_scenario(round) == dump_scenario(cfg));
}
