#pragma once

#include "manet/net/simulation.hpp"
#include "manet/scenario/config.hpp"

#include <vector>

namespace manet::test {

// A static scripted topology: pinned positions, no mobility, no flows.
// Drive traffic by scheduling router calls; hello/congestion agents start
// only via Simulation::run(), so a manually driven engine stays silent.
inline ScenarioConfig static_scenario(const std::vector<Vec2>& positions, Protocol protocol = Protocol::AodvBaseline) {
    ScenarioConfig cfg;
    cfg.scenario_id = "scripted";
    cfg.node_count = static_cast<std::uint32_t>(positions.size());
    cfg.speed_mps = 0.0;
    cfg.pause_s = 0.0;
    cfg.sim_time_s = 30.0;
    cfg.protocol = protocol;
    cfg.node_positions.resize(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        cfg.node_positions[i] = NodePosition{true, positions[i].x, positions[i].y};
    }
    return cfg;
}

// Schedules a data send from `src` at time t; the packet uid comes from the
// metrics ledger so conservation checks stay meaningful.
inline void send_data_at(Simulation& sim, double t_s, NodeId src, NodeId dst, std::uint32_t payload_bits = 4096) {
    sim.engine().schedule_at(SimTime::from_seconds(t_s), EventKind::TrafficSend, [&sim, src, dst, payload_bits] {
        DataPayload d;
        d.flow_id = 0;
        d.packet_uid = sim.metrics().register_sent(0);
        d.origin = src;
        d.target = dst;
        d.origin_time = sim.engine().now();
        d.payload_bits = payload_bits;
        d.ttl = 32;
        sim.node(src).router().send_data(d);
    });
}

} // namespace manet::test
