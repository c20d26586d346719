#pragma once

#include "manet/control/admission.hpp"
#include "manet/control/congestion.hpp"
#include "manet/mac/dcf.hpp"
#include "manet/mac/neighbor_table.hpp"
#include "manet/metrics/collector.hpp"
#include "manet/mobility/waypoint.hpp"
#include "manet/phy/medium.hpp"
#include "manet/routing/aodv.hpp"
#include "manet/scenario/config.hpp"
#include "manet/sim/engine.hpp"
#include "manet/traffic/cbr.hpp"

#include <map>
#include <memory>
#include <vector>

namespace manet {

class Simulation;

// One mobile host: mobility, battery, radio endpoint, MAC, router, and the
// hello/bandwidth bookkeeping the cross-layer controls read.
class Node final : public INodePhy {
  public:
    Node(Simulation& sim, NodeId id, Vec2 initial_pos);

    // INodePhy
    Vec2 position(SimTime t) const override;
    bool phy_alive() const override { return m_alive; }
    void medium_busy_changed(bool busy) override;
    void decode_started() override;
    void decode_finished(const Frame* frame, double p_rx_dbm) override;
    void tx_ended(const Frame& frame) override;

    NodeId id() const { return m_id; }
    bool alive() const { return m_alive; }

    // Immediate shutdown (tests and scripted scenarios).
    void kill() {
        if (m_alive) {
            die();
        }
    }

    double feasible_bw_bps() const;
    void add_consumed_bw(double bps) { m_own_consumed_bps += bps; }
    void release_consumed_bw(double bps) { m_own_consumed_bps = std::max(0.0, m_own_consumed_bps - bps); }
    double own_consumed_bps() const { return m_own_consumed_bps; }

    void start_hello();
    void start_congestion_window();
    void start_mobility() { m_mobility.start(); }

    AodvRouter& router() { return m_router; }
    DcfMac& mac() { return m_mac; }
    WaypointMobility& mobility() { return m_mobility; }
    const EnergyState& energy() const { return m_energy; }
    EnergyState& energy_mut() { return m_energy; }
    NeighborTable& neighbors() { return m_neighbors; }

  private:
    friend class Simulation;

    SimTime transmit(const Frame& frame, double power_dbm, SimTime airtime);
    void dispatch_decoded(const Frame& frame, double p_rx_dbm);
    void mac_frame_dropped(const Frame& frame);
    void send_control_broadcast(Frame frame);
    void hello_due();
    void window_due();
    void reschedule_death();
    void death_check();
    void die();

    Simulation& m_sim;
    NodeId m_id;
    bool m_alive = true;

    WaypointMobility m_mobility;
    EnergyState m_energy;
    DcfMac m_mac;
    AodvRouter m_router;
    NeighborTable m_neighbors;

    double m_own_consumed_bps = 0.0;

    // Per-window offered bits by flow, and where each flow originates
    // (learned from forwarded data; used to address rate feedback).
    std::map<std::uint32_t, std::uint64_t> m_window_flow_bits;
    std::map<std::uint32_t, NodeId> m_flow_origin;

    EventHandle m_hello_timer = kNoEvent;
    EventHandle m_window_timer = kNoEvent;
    EventHandle m_death_timer = kNoEvent;
};

struct RunOptions {
    bool record_timeseries = false;
};

struct RunResult {
    MetricsReport report;
    std::uint64_t trace_hash = 0;
    double final_clock_s = 0.0;
    std::uint64_t events_fired = 0;
    TimeSeries series;
};

// One deterministic simulation instance built from a scenario. Instances
// share nothing and may run concurrently with other instances.
class Simulation {
  public:
    explicit Simulation(const ScenarioConfig& cfg, RunOptions options = {});

    RunResult run();

    // Component access (tests and agents).
    Engine& engine() { return m_engine; }
    Medium& medium() { return m_medium; }
    Node& node(NodeId id) { return *m_nodes[id]; }
    std::size_t node_count() const { return m_nodes.size(); }
    MetricsCollector& metrics() { return m_metrics; }
    const ScenarioConfig& config() const { return m_cfg; }
    const Toggles& toggles() const { return m_toggles; }
    CbrSource& flow_source(std::size_t flow_idx) { return *m_flows[flow_idx].source; }
    FlowState flow_state(std::size_t flow_idx) const { return m_flows[flow_idx].source->state(); }

    // Cross-layer plumbing used by nodes.
    const RadioParams& radio() const { return m_radio; }
    const MacTiming& mac_timing() const { return m_timing; }
    const AdmissionParams& admission() const { return m_admission; }
    const CongestionParams& congestion() const { return m_congestion; }
    double hello_interval_s() const { return m_cfg.hello_interval_s; }
    double hello_offset_s(NodeId id) const;
    double now_s() const { return m_engine.now().seconds(); }

    void on_probe_at_target(NodeId at, const ProbePayload& probe);
    void on_probe_reply(NodeId at, const ProbeReplyPayload& reply);
    void on_feedback_at_source(NodeId at, const RateFeedbackPayload& fb);
    void apply_local_feedback(std::uint32_t flow_id, double fd_bps);
    double flow_rate_bps(std::uint32_t flow_id) const;
    void flow_source_died(NodeId node);

  private:
    struct FlowRuntime {
        std::unique_ptr<CbrSource> source;
        bool admitted = false;
        bool stopped = false;
        bool probe_pending = false;
        EventHandle probe_timer = kNoEvent;
    };

    void build_nodes();
    void schedule_flow_events();
    void start_flow(std::size_t flow_idx);
    void stop_flow(std::size_t flow_idx);
    void admit(std::size_t flow_idx);
    void reject(std::size_t flow_idx);
    void emit_packet(std::size_t flow_idx, CbrSource& src);
    std::vector<std::uint64_t> inventory_uids() const;
    void sample_timeseries();

    bool m_ran = false;
    ScenarioConfig m_cfg;
    RunOptions m_options;
    Toggles m_toggles;
    RadioParams m_radio;
    EnergyParams m_energy_params;
    MacTiming m_timing;
    AodvParams m_aodv;
    RoutingCrossLayer m_xl;
    CongestionParams m_congestion;
    AdmissionParams m_admission;

    Engine m_engine;
    Medium m_medium;
    MetricsCollector m_metrics;
    std::vector<std::unique_ptr<Node>> m_nodes;
    std::vector<FlowRuntime> m_flows;
    std::vector<double> m_hello_offsets_s;
};

} // namespace manet
