#include "helpers.hpp"
#include "manet/metrics/csv.hpp"
#include "manet/net/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace manet;
using manet::test::send_data_at;
using manet::test::static_scenario;

namespace {

ScenarioConfig small_mobile_scenario(Protocol protocol) {
    ScenarioConfig cfg;
    cfg.scenario_id = "small";
    cfg.node_count = 10;
    cfg.area_x_m = 600;
    cfg.area_y_m = 300;
    cfg.sim_time_s = 10.0;
    cfg.speed_mps = 5.0;
    cfg.pause_s = 2.0;
    cfg.protocol = protocol;
    cfg.master_seed = 17;
    for (std::uint32_t i = 0; i < 3; ++i) {
        FlowConfig f;
        f.src = i;
        f.dst = 9 - i;
        f.rbw_bps = 60e3;
        f.rate_bps = 60e3;
        f.start_s = 0.5 + 0.3 * i;
        cfg.flows.push_back(f);
    }
    return cfg;
}

std::string csv_of(const ScenarioConfig& cfg, const RunResult& rr) {
    RunRow row;
    row.scenario_id = cfg.scenario_id;
    row.protocol = protocol_label(cfg.protocol);
    row.seed = cfg.master_seed;
    row.nodes = cfg.node_count;
    row.pause_s = cfg.pause_s;
    row.report = rr.report;
    std::ostringstream out;
    write_runs_csv(out, {row});
    return out.str();
}

} // namespace

TEST_CASE("identical scenario and seed replay byte-identical results") {
    const ScenarioConfig cfg = small_mobile_scenario(Protocol::Mcba);
    Simulation a(cfg);
    Simulation b(cfg);
    const RunResult ra = a.run();
    const RunResult rb = b.run();
    CHECK(ra.trace_hash == rb.trace_hash);
    CHECK(ra.events_fired == rb.events_fired);
    CHECK(csv_of(cfg, ra) == csv_of(cfg, rb));
}

TEST_CASE("different seeds diverge on a contended scenario") {
    ScenarioConfig cfg = small_mobile_scenario(Protocol::Mcba);
    Simulation a(cfg);
    const RunResult ra = a.run();
    cfg.master_seed = 18;
    Simulation b(cfg);
    const RunResult rb = b.run();
    CHECK(ra.trace_hash != rb.trace_hash);
}

TEST_CASE("all cross-layer toggles off reproduces the baseline exactly") {
    ScenarioConfig masked = small_mobile_scenario(Protocol::Mcba);
    masked.link_filter = false;
    masked.power_control = false;
    masked.congestion_control = false;
    masked.admission_control = false;

    ScenarioConfig baseline = small_mobile_scenario(Protocol::AodvBaseline);

    Simulation a(masked);
    Simulation b(baseline);
    const RunResult ra = a.run();
    const RunResult rb = b.run();
    CHECK(ra.trace_hash == rb.trace_hash);

    // Byte-identical metrics once the protocol label is normalized.
    ScenarioConfig relabeled = masked;
    relabeled.protocol = Protocol::AodvBaseline;
    relabeled.link_filter.reset();
    relabeled.power_control.reset();
    relabeled.congestion_control.reset();
    relabeled.admission_control.reset();
    CHECK(csv_of(relabeled, ra) == csv_of(baseline, rb));
}

TEST_CASE("conservation and bounds hold on a lossy mobile run") {
    ScenarioConfig cfg = small_mobile_scenario(Protocol::AodvBaseline);
    cfg.sim_time_s = 8.0;
    cfg.energy_initial_j = 0.05; // some nodes die mid-run
    Simulation sim(cfg);
    const RunResult rr = sim.run(); // finalize throws on any violation
    CHECK(rr.report.sent == rr.report.delivered + rr.report.dropped + rr.report.in_flight);
    CHECK(rr.report.pdr >= 0.0);
    CHECK(rr.report.pdr <= 1.0);
    CHECK(rr.report.nodes_depleted > 0);
}

TEST_CASE("probe admission rejects when a transit node lacks headroom") {
    ScenarioConfig cfg = static_scenario({Vec2{100, 100}, Vec2{250, 100}, Vec2{400, 100}}, Protocol::Mcba);
    cfg.rss_margin_db = 3.0; // 150 m hops clear the link filter
    // RBW between the probe band edges.
    FlowConfig f;
    f.src = 0;
    f.dst = 2;
    f.rbw_bps = 300e3;
    f.rate_bps = 300e3;
    f.start_s = 0.5;
    cfg.flows.push_back(f);

    SUBCASE("uniform headroom admits") {
        Simulation sim(cfg);
        const RunResult rr = sim.run();
        CHECK(rr.report.flows_admitted == 1);
        CHECK(rr.report.sent > 0);
    }
    SUBCASE("a loaded middle node rejects") {
        Simulation sim(cfg);
        sim.node(1).add_consumed_bw(1.6e6); // (2e6 - 1.6e6) / 2 = 200k < 300k
        const RunResult rr = sim.run();
        CHECK(rr.report.flows_rejected == 1);
        CHECK(rr.report.sent == 0);
        CHECK(sim.flow_state(0) == FlowState::Rejected);
    }
    SUBCASE("an unreachable destination rejects after the probe timeout") {
        Simulation sim(cfg);
        sim.engine().schedule_at(SimTime::zero(), EventKind::TimerExpiry, [&sim] { sim.node(2).kill(); });
        const RunResult rr = sim.run();
        CHECK(rr.report.flows_rejected == 1);
        CHECK(rr.report.sent == 0);
    }
}

TEST_CASE("congestion feedback slows an overdriven source") {
    // Tiny threshold: every handshake trips the controller, so the rate must
    // fall from its starting point.
    ScenarioConfig cfg = static_scenario({Vec2{100, 100}, Vec2{250, 100}, Vec2{400, 100}}, Protocol::Mcba);
    cfg.rss_margin_db = 3.0;
    cfg.t_rh_s = 1e-6;
    cfg.admission_control = false; // isolate the congestion loop
    FlowConfig f;
    f.src = 0;
    f.dst = 2;
    f.rbw_bps = 200e3;
    f.rate_bps = 400e3;
    f.start_s = 0.2;
    cfg.flows.push_back(f);
    Simulation sim(cfg);
    sim.run();
    CHECK(sim.flow_source(0).rate_bps() < 400e3);
    // The transit node notified the source at least once.
    CHECK(sim.medium().frames_sent(FrameKind::RateFeedback) >= 1);
}

TEST_CASE("two flows through one bottleneck are both throttled") {
    ScenarioConfig cfg =
        static_scenario({Vec2{100, 100}, Vec2{250, 100}, Vec2{400, 100}, Vec2{250, 250}}, Protocol::Mcba);
    cfg.rss_margin_db = 3.0;
    cfg.t_rh_s = 1e-6;
    cfg.admission_control = false;
    for (NodeId src : {0u, 3u}) {
        FlowConfig f;
        f.src = src;
        f.dst = 2;
        f.rbw_bps = 150e3;
        f.rate_bps = 300e3;
        f.start_s = 0.2;
        cfg.flows.push_back(f);
    }
    Simulation sim(cfg);
    sim.run();
    CHECK(sim.flow_source(0).rate_bps() < 300e3);
    CHECK(sim.flow_source(1).rate_bps() < 300e3);
}

TEST_CASE("a rejected flow emits nothing and a halved rate doubles the gap") {
    ScenarioConfig cfg = static_scenario({Vec2{100, 100}, Vec2{200, 100}}, Protocol::Mcba);
    FlowConfig f;
    f.src = 0;
    f.dst = 1;
    f.rbw_bps = 1.9e6; // above MaxBW: rejected at step 3
    f.rate_bps = 100e3;
    f.start_s = 0.1;
    cfg.flows.push_back(f);
    Simulation sim(cfg);
    const RunResult rr = sim.run();
    CHECK(rr.report.flows_rejected == 1);
    CHECK(rr.report.sent == 0);
    CHECK(sim.flow_source(0).packets_emitted() == 0);

    // Emission cadence is packet_bits / rate: halving the rate doubles it.
    const double gap_full = 4096.0 / 100e3;
    const double gap_half = 4096.0 / 50e3;
    CHECK(gap_half == doctest::Approx(2.0 * gap_full));
}

TEST_CASE("sweep cells are deterministic and aggregate into medians") {
    SweepSpec spec;
    spec.base = small_mobile_scenario(Protocol::Mcba);
    spec.base.sim_time_s = 4.0;
    spec.parameter = SweepParam::NodeCount;
    spec.values = {10, 12};
    spec.seeds = {1, 2, 3};

    const SweepResult serial = run_sweep(spec, 1);
    const SweepResult parallel = run_sweep(spec, 4);
    REQUIRE(serial.rows.size() == 12); // 2 values x 3 seeds x 2 protocols
    REQUIRE(parallel.rows.size() == 12);
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        std::ostringstream a;
        std::ostringstream b;
        write_runs_csv(a, {serial.rows[i]});
        write_runs_csv(b, {parallel.rows[i]});
        CHECK(a.str() == b.str());
    }
    CHECK(serial.aggregates.size() == 4); // per (value, protocol)
}

TEST_CASE("admitted bandwidth is released when the flow stops") {
    ScenarioConfig cfg = static_scenario({Vec2{100, 100}, Vec2{200, 100}}, Protocol::Mcba);
    cfg.rss_margin_db = 3.0;
    cfg.sim_time_s = 6.0;
    FlowConfig f;
    f.src = 0;
    f.dst = 1;
    f.rbw_bps = 50e3; // below MinBW: admitted at step 2
    f.rate_bps = 50e3;
    f.start_s = 0.5;
    f.stop_s = 3.0;
    cfg.flows.push_back(f);
    Simulation sim(cfg);
    sim.engine().schedule_at(SimTime::from_seconds(1.0), EventKind::MetricSample, [&sim] {
        CHECK(sim.node(0).own_consumed_bps() == doctest::Approx(50e3));
    });
    sim.engine().schedule_at(SimTime::from_seconds(4.0), EventKind::MetricSample, [&sim] {
        CHECK(sim.node(0).own_consumed_bps() == doctest::Approx(0.0));
        CHECK(sim.flow_state(0) == FlowState::Done);
    });
    sim.run();
}

TEST_CASE("constant-rate emission count matches rate times horizon") {
    ScenarioConfig cfg = static_scenario({Vec2{100, 100}, Vec2{200, 100}}, Protocol::AodvBaseline);
    cfg.sim_time_s = 5.0;
    FlowConfig f;
    f.src = 0;
    f.dst = 1;
    f.rbw_bps = 40960;
    f.rate_bps = 40960; // 10 packets per second at 4096-bit packets
    f.start_s = 0.0;
    cfg.flows.push_back(f);
    Simulation sim(cfg);
    sim.run();
    const double expected = 5.0 * 40960 / 4096.0;
    const auto emitted = static_cast<double>(sim.flow_source(0).packets_emitted());
    CHECK(std::abs(emitted - expected) <= 1.0);
}

TEST_CASE("a single-cell sweep equals a run of the cell's configuration") {
    SweepSpec spec;
    spec.base = small_mobile_scenario(Protocol::Mcba);
    spec.base.sim_time_s = 4.0;
    spec.parameter = SweepParam::NodeCount;
    spec.values = {10};
    spec.seeds = {1};

    const SweepResult swept = run_sweep(spec, 1);
    REQUIRE(swept.rows.size() == 2); // one per protocol
    for (const SweepCell& cell : enumerate_cells(spec)) {
        const ScenarioConfig cfg = cell_config(spec, cell);
        Simulation sim(cfg);
        const RunResult rr = sim.run();
        RunRow direct;
        direct.scenario_id = cfg.scenario_id;
        direct.protocol = protocol_label(cfg.protocol);
        direct.seed = cfg.master_seed;
        direct.nodes = cfg.node_count;
        direct.pause_s = cfg.pause_s;
        direct.report = rr.report;
        std::ostringstream a;
        std::ostringstream b;
        const RunRow& swept_row = cell.protocol == Protocol::Mcba ? swept.rows[0] : swept.rows[1];
        write_runs_csv(a, {direct});
        write_runs_csv(b, {swept_row});
        CHECK(a.str() == b.str());
    }
}
