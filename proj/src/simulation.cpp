#include "manet/net/simulation.hpp"

#include <algorithm>
#include <stdexcept>

namespace manet {

// ---------------------------------------------------------------------------
// Node

Node::Node(Simulation& sim, NodeId id, Vec2 initial_pos)
    : m_sim(sim), m_id(id),
      m_mobility(sim.engine(), Vec2{sim.config().area_x_m, sim.config().area_y_m}, sim.config().speed_mps,
                 sim.config().pause_s, initial_pos),
      m_energy(sim.config().energy_params(), sim.engine().now()),
      m_mac(sim.engine(), sim.mac_timing(), sim.radio(), id, sim.config().toggles().power_control,
            DcfMac::Hooks{
                [this](const Frame& f, double p, SimTime airtime) { return transmit(f, p, airtime); },
                [this] { return m_sim.medium().busy_at(m_id); },
                [this](const Frame& f, double p_rx) { dispatch_decoded(f, p_rx); },
                [this](const Frame& f, MacOutcome outcome) { m_router.on_unicast_done(f, outcome); },
                [this](const Frame& f) { mac_frame_dropped(f); },
            }),
      m_router(sim.engine(), id, sim.config().aodv_params(), sim.config().routing_crosslayer(), sim.radio(),
               AodvRouter::Hooks{
                   [this](Frame f, double power) {
                       if (is_control_kind(f.kind)) {
                           m_sim.metrics().on_control_packet();
                       }
                       if (f.kind == FrameKind::Data) {
                           const auto& d = std::get<DataPayload>(f.payload);
                           m_window_flow_bits[d.flow_id] += f.size_bits;
                           m_flow_origin[d.flow_id] = d.origin;
                       }
                       m_mac.enqueue(std::move(f), power);
                   },
                   [this](const DataPayload& d, double delay_s) {
                       m_sim.metrics().on_delivered(d.packet_uid, delay_s, d.payload_bits);
                   },
                   [this](ProbePayload p) { m_sim.on_probe_at_target(m_id, p); },
                   [this](const ProbeReplyPayload& p) { m_sim.on_probe_reply(m_id, p); },
                   [this](const RateFeedbackPayload& p) { m_sim.on_feedback_at_source(m_id, p); },
                   [this](const DataPayload& d, DropCause cause) { m_sim.metrics().on_dropped(d.packet_uid, cause); },
                   nullptr,
                   [this] { return feasible_bw_bps(); },
               }) {
    reschedule_death();
}

Vec2 Node::position(SimTime t) const { return m_mobility.position(t); }

SimTime Node::transmit(const Frame& frame, double power_dbm, SimTime airtime) {
    m_energy.set_mode(RadioMode::Tx, dbm_to_watts(power_dbm), m_sim.engine().now());
    reschedule_death();
    return m_sim.medium().transmit(m_id, frame, power_dbm, airtime);
}

void Node::medium_busy_changed(bool busy) {
    if (!m_alive) {
        return;
    }
    m_mac.on_medium_busy_changed(busy);
}

void Node::decode_started() {
    if (!m_alive) {
        return;
    }
    m_energy.set_mode(RadioMode::Rx, 0.0, m_sim.engine().now());
    reschedule_death();
}

void Node::decode_finished(const Frame* frame, double p_rx_dbm) {
    if (!m_alive) {
        return;
    }
    if (!m_sim.medium().transmitting(m_id)) {
        m_energy.set_mode(RadioMode::Idle, 0.0, m_sim.engine().now());
        reschedule_death();
    }
    if (frame != nullptr) {
        m_mac.on_frame_decoded(*frame, p_rx_dbm);
    }
}

void Node::tx_ended(const Frame& frame) {
    if (!m_alive) {
        return;
    }
    m_energy.set_mode(RadioMode::Idle, 0.0, m_sim.engine().now());
    reschedule_death();
    m_mac.on_tx_ended(frame);
    // Deferred CCA edge: signals may have started during our transmission.
    if (!m_sim.medium().busy_at(m_id)) {
        m_mac.on_medium_busy_changed(false);
    }
}

void Node::dispatch_decoded(const Frame& frame, double p_rx_dbm) {
    if (frame.kind == FrameKind::Hello) {
        m_neighbors.on_hello(std::get<HelloPayload>(frame.payload), m_id);
        return;
    }
    m_router.on_frame(frame, p_rx_dbm);
}

void Node::mac_frame_dropped(const Frame& frame) {
    if (frame.kind != FrameKind::Data) {
        return;
    }
    const auto& d = std::get<DataPayload>(frame.payload);
    m_sim.metrics().on_dropped(d.packet_uid, m_alive ? DropCause::QueueOverflow : DropCause::NodeDied);
}

double Node::feasible_bw_bps() const {
    BandwidthBook book;
    book.own_consumed_bps = m_own_consumed_bps;
    book.neighbors_consumed_bps =
        m_neighbors.known_consumed_bps(m_sim.now_s(), 2.0 * m_sim.hello_interval_s());
    return feasible_bandwidth_bps(book, m_sim.admission());
}

void Node::send_control_broadcast(Frame frame) {
    m_sim.metrics().on_control_packet();
    m_mac.enqueue(std::move(frame), m_sim.radio().max_power_dbm);
}

void Node::start_hello() {
    const double offset = m_sim.hello_offset_s(m_id);
    m_hello_timer =
        m_sim.engine().schedule_after(SimTime::from_seconds(offset), EventKind::HelloDue, [this] { hello_due(); });
}

void Node::hello_due() {
    m_hello_timer = kNoEvent;
    if (!m_alive) {
        return;
    }
    const double now_s = m_sim.now_s();
    HelloPayload hello;
    hello.origin = m_id;
    hello.own_timestamp_s = now_s;
    if (m_sim.toggles().admission_control) {
        hello.carries_bandwidth = true;
        hello.own_consumed_bw_bps = m_own_consumed_bps;
        hello.neighbor_entries = m_neighbors.fresh_one_hop(now_s, 2.0 * m_sim.hello_interval_s());
    }
    Frame f;
    f.kind = FrameKind::Hello;
    f.tx_node = m_id;
    f.rx_node = kBroadcast;
    f.size_bits = frame_bits::hello_base +
                  frame_bits::hello_per_entry * static_cast<std::uint32_t>(hello.neighbor_entries.size());
    f.payload = std::move(hello);
    send_control_broadcast(std::move(f));

    const double jitter_s = m_sim.engine().stream(StreamLabel::MacBackoff).uniform(0.0, 0.010);
    m_hello_timer = m_sim.engine().schedule_after(
        SimTime::from_seconds(m_sim.hello_interval_s() + jitter_s), EventKind::HelloDue, [this] { hello_due(); });
}

void Node::start_congestion_window() {
    (void)m_mac.take_window_stats(m_sim.now_s());
    m_window_timer = m_sim.engine().schedule_after(SimTime::from_seconds(m_sim.congestion().window_s),
                                                   EventKind::MetricSample, [this] { window_due(); });
}

void Node::window_due() {
    m_window_timer = kNoEvent;
    if (!m_alive) {
        return;
    }
    const CongestionParams& cp = m_sim.congestion();
    const ContentionWindowStats stats = m_mac.take_window_stats(m_sim.now_s());
    const double oh_s = measure_overhead_s(stats, m_sim.mac_timing());

    for (const auto& [flow_id, bits] : m_window_flow_bits) {
        if (bits == 0) {
            continue;
        }
        const double observed_bps = static_cast<double>(bits) / cp.window_s;
        const double fd = channel_resource_delta_bps(oh_s, cp.t_rh_s, observed_bps, observed_bps);
        const NodeId origin = m_flow_origin.count(flow_id) ? m_flow_origin[flow_id] : m_id;
        if (origin == m_id) {
            const double rt = m_sim.flow_rate_bps(flow_id);
            if (std::abs(fd) >= cp.hysteresis * rt) {
                m_sim.apply_local_feedback(flow_id, fd);
            }
        } else if (std::abs(fd) >= cp.hysteresis * observed_bps) {
            RateFeedbackPayload p;
            p.flow_id = flow_id;
            p.origin = m_id;
            p.target = origin;
            p.fd_bps = fd;
            p.ttl = m_sim.config().aodv_params().ttl_limit;
            m_router.send_feedback(p);
        }
    }
    m_window_flow_bits.clear();

    m_window_timer = m_sim.engine().schedule_after(SimTime::from_seconds(cp.window_s), EventKind::MetricSample,
                                                   [this] { window_due(); });
}

void Node::reschedule_death() {
    if (m_death_timer != kNoEvent) {
        m_sim.engine().cancel(m_death_timer);
        m_death_timer = kNoEvent;
    }
    if (!m_alive) {
        return;
    }
    // A settle may have crossed the depletion point before the projected
    // timer fired; die after the current event finishes, not mid-callback.
    if (m_energy.depleted()) {
        m_death_timer = m_sim.engine().schedule_at(m_sim.engine().now(), EventKind::TimerExpiry,
                                                   [this] { death_check(); });
        return;
    }
    const SimTime when = m_energy.projected_depletion(m_sim.engine().now());
    if (when == SimTime::max()) {
        return;
    }
    m_death_timer = m_sim.engine().schedule_at(when, EventKind::TimerExpiry, [this] { death_check(); });
}

void Node::death_check() {
    m_death_timer = kNoEvent;
    if (!m_alive) {
        return;
    }
    m_energy.settle(m_sim.engine().now());
    if (m_energy.depleted()) {
        die();
    } else {
        reschedule_death(); // the draw changed since this was scheduled
    }
}

void Node::die() {
    m_alive = false;
    if (m_sim.medium().transmitting(m_id)) {
        m_sim.medium().abort_transmission(m_id);
    }
    m_sim.medium().node_died(m_id);
    m_mobility.stop();
    m_mac.purge_on_death();
    m_router.on_death();
    m_sim.flow_source_died(m_id);
    for (EventHandle* h : {&m_hello_timer, &m_window_timer, &m_death_timer}) {
        if (*h != kNoEvent) {
            m_sim.engine().cancel(*h);
            *h = kNoEvent;
        }
    }
}

// ---------------------------------------------------------------------------
// Simulation

Simulation::Simulation(const ScenarioConfig& cfg, RunOptions options)
    : m_cfg(cfg), m_options(options), m_toggles(cfg.toggles()), m_radio(cfg.radio_params()),
      m_energy_params(cfg.energy_params()), m_timing(cfg.mac_timing()), m_aodv(cfg.aodv_params()),
      m_xl(cfg.routing_crosslayer()), m_congestion(cfg.congestion_params()), m_admission(cfg.admission_params()),
      m_engine(cfg.master_seed), m_medium(m_engine, m_radio), m_metrics(cfg.sim_time_s) {
    build_nodes();
    schedule_flow_events();
}

void Simulation::build_nodes() {
    auto& topo = m_engine.stream(StreamLabel::Topology);
    std::vector<Vec2> positions;
    positions.reserve(m_cfg.node_count);
    for (std::uint32_t i = 0; i < m_cfg.node_count; ++i) {
        if (i < m_cfg.node_positions.size() && m_cfg.node_positions[i].set) {
            positions.push_back(Vec2{m_cfg.node_positions[i].x_m, m_cfg.node_positions[i].y_m});
            continue;
        }
        Vec2 p{topo.uniform(0.0, m_cfg.area_x_m), topo.uniform(0.0, m_cfg.area_y_m)};
        // Co-located nodes break the propagation contract; nudge by redraw.
        bool clash = true;
        while (clash) {
            clash = false;
            for (const Vec2& q : positions) {
                if (q.x == p.x && q.y == p.y) {
                    p = Vec2{topo.uniform(0.0, m_cfg.area_x_m), topo.uniform(0.0, m_cfg.area_y_m)};
                    clash = true;
                    break;
                }
            }
        }
        positions.push_back(p);
    }
    m_hello_offsets_s.reserve(m_cfg.node_count);
    for (std::uint32_t i = 0; i < m_cfg.node_count; ++i) {
        m_hello_offsets_s.push_back(topo.uniform(0.0, m_cfg.hello_interval_s));
    }
    m_nodes.reserve(m_cfg.node_count);
    for (std::uint32_t i = 0; i < m_cfg.node_count; ++i) {
        m_nodes.push_back(std::make_unique<Node>(*this, i, positions[i]));
        m_medium.register_node(m_nodes.back().get());
    }
}

double Simulation::hello_offset_s(NodeId id) const { return m_hello_offsets_s[id]; }

void Simulation::schedule_flow_events() {
    m_flows.resize(m_cfg.flows.size());
    for (std::size_t i = 0; i < m_cfg.flows.size(); ++i) {
        const FlowConfig& fc = m_cfg.flows[i];
        auto& rt = m_flows[i];
        rt.source = std::make_unique<CbrSource>(
            m_engine, static_cast<std::uint32_t>(i), fc.src, fc.dst, fc.packet_bytes * 8, fc.rate_bps, fc.rbw_bps,
            m_congestion, CbrSource::Hooks{[this, i](CbrSource& src) { emit_packet(i, src); }});
        m_engine.schedule_at(SimTime::from_seconds(fc.start_s), EventKind::TrafficSend, [this, i] { start_flow(i); });
        const double stop_s = fc.stop_s.value_or(m_cfg.sim_time_s);
        if (stop_s < m_cfg.sim_time_s) {
            m_engine.schedule_at(SimTime::from_seconds(stop_s), EventKind::TrafficSend, [this, i] { stop_flow(i); });
        }
    }
}

void Simulation::start_flow(std::size_t flow_idx) {
    const FlowConfig& fc = m_cfg.flows[flow_idx];
    Node& src = *m_nodes[fc.src];
    if (!src.alive()) {
        reject(flow_idx);
        return;
    }
    if (!m_toggles.admission_control) {
        admit(flow_idx);
        return;
    }
    const double fbw = src.feasible_bw_bps();
    switch (admit_flow(fbw, fc.rbw_bps, m_admission.min_bw_bps, m_admission.max_bw_bps)) {
    case AdmissionDecision::Admit: admit(flow_idx); return;
    case AdmissionDecision::Reject: reject(flow_idx); return;
    case AdmissionDecision::Probe: break;
    }
    auto& rt = m_flows[flow_idx];
    rt.probe_pending = true;
    ProbePayload probe;
    probe.flow_id = static_cast<std::uint32_t>(flow_idx);
    probe.origin = fc.src;
    probe.target = fc.dst;
    probe.required_bw_bps = fc.rbw_bps;
    probe.min_fbw_bps = fbw;
    probe.ttl = m_aodv.ttl_limit;
    src.router().send_probe(probe);
    rt.probe_timer = m_engine.schedule_after(SimTime::from_seconds(2.0 * m_aodv.net_traversal_time_s),
                                             EventKind::TimerExpiry, [this, flow_idx] {
                                                 auto& frt = m_flows[flow_idx];
                                                 frt.probe_timer = kNoEvent;
                                                 if (frt.probe_pending) {
                                                     frt.probe_pending = false;
                                                     reject(flow_idx);
                                                 }
                                             });
}

void Simulation::admit(std::size_t flow_idx) {
    auto& rt = m_flows[flow_idx];
    const FlowConfig& fc = m_cfg.flows[flow_idx];
    rt.admitted = true;
    if (m_toggles.admission_control) {
        m_nodes[fc.src]->add_consumed_bw(fc.rbw_bps);
    }
    m_metrics.on_flow_admitted();
    rt.source->activate();
}

void Simulation::reject(std::size_t flow_idx) {
    m_flows[flow_idx].source->reject();
    m_metrics.on_flow_rejected();
}

void Simulation::stop_flow(std::size_t flow_idx) {
    auto& rt = m_flows[flow_idx];
    if (rt.stopped) {
        return;
    }
    rt.stopped = true;
    const FlowConfig& fc = m_cfg.flows[flow_idx];
    if (rt.admitted && m_toggles.admission_control && m_nodes[fc.src]->alive()) {
        m_nodes[fc.src]->release_consumed_bw(fc.rbw_bps);
    }
    rt.source->finish();
}

void Simulation::emit_packet(std::size_t flow_idx, CbrSource& src) {
    const FlowConfig& fc = m_cfg.flows[flow_idx];
    Node& origin = *m_nodes[fc.src];
    if (!origin.alive()) {
        return;
    }
    DataPayload d;
    d.flow_id = static_cast<std::uint32_t>(flow_idx);
    d.packet_uid = m_metrics.register_sent(d.flow_id);
    d.origin = fc.src;
    d.target = fc.dst;
    d.origin_time = m_engine.now();
    d.payload_bits = src.packet_bits();
    d.ttl = m_aodv.ttl_limit;
    origin.router().send_data(d);
}

void Simulation::on_probe_at_target(NodeId at, const ProbePayload& probe) {
    // Destination echoes the path minimum back to the source.
    ProbeReplyPayload reply;
    reply.flow_id = probe.flow_id;
    reply.origin = at;
    reply.target = probe.origin;
    reply.min_fbw_bps = probe.min_fbw_bps;
    reply.ttl = m_aodv.ttl_limit;
    m_nodes[at]->router().send_probe_reply(reply);
}

void Simulation::on_probe_reply(NodeId at, const ProbeReplyPayload& reply) {
    if (reply.flow_id >= m_flows.size()) {
        return;
    }
    auto& rt = m_flows[reply.flow_id];
    const FlowConfig& fc = m_cfg.flows[reply.flow_id];
    if (!rt.probe_pending || fc.src != at) {
        return;
    }
    rt.probe_pending = false;
    if (rt.probe_timer != kNoEvent) {
        m_engine.cancel(rt.probe_timer);
        rt.probe_timer = kNoEvent;
    }
    if (reply.min_fbw_bps >= fc.rbw_bps) {
        admit(reply.flow_id);
    } else {
        reject(reply.flow_id);
    }
}

void Simulation::on_feedback_at_source(NodeId at, const RateFeedbackPayload& fb) {
    if (fb.flow_id >= m_flows.size() || m_cfg.flows[fb.flow_id].src != at) {
        return;
    }
    m_flows[fb.flow_id].source->apply_feedback(fb.fd_bps);
}

void Simulation::apply_local_feedback(std::uint32_t flow_id, double fd_bps) {
    if (flow_id < m_flows.size()) {
        m_flows[flow_id].source->apply_feedback(fd_bps);
    }
}

double Simulation::flow_rate_bps(std::uint32_t flow_id) const {
    return flow_id < m_flows.size() ? m_flows[flow_id].source->rate_bps() : 0.0;
}

void Simulation::flow_source_died(NodeId node) {
    for (std::size_t i = 0; i < m_flows.size(); ++i) {
        if (m_cfg.flows[i].src == node) {
            m_flows[i].source->finish();
        }
    }
}

std::vector<std::uint64_t> Simulation::inventory_uids() const {
    std::vector<std::uint64_t> uids;
    auto collect = [&uids](const Frame& f) {
        if (f.kind == FrameKind::Data) {
            uids.push_back(std::get<DataPayload>(f.payload).packet_uid);
        }
    };
    for (const auto& n : m_nodes) {
        n->m_mac.for_each_queued(collect);
        n->m_router.for_each_buffered(collect);
    }
    return uids;
}

void Simulation::sample_timeseries() {
    double consumed = 0.0;
    for (const auto& n : m_nodes) {
        consumed += n->energy().consumed_at(m_engine.now());
    }
    m_metrics.sample(now_s(), consumed / static_cast<double>(m_nodes.size()));
    if (m_engine.now() + SimTime::from_seconds(m_cfg.timeseries_interval_s) <=
        SimTime::from_seconds(m_cfg.sim_time_s)) {
        m_engine.schedule_after(SimTime::from_seconds(m_cfg.timeseries_interval_s), EventKind::MetricSample,
                                [this] { sample_timeseries(); });
    }
}

RunResult Simulation::run() {
    if (m_ran) {
        throw std::logic_error("Simulation::run: an instance runs exactly once");
    }
    m_ran = true;
    for (auto& n : m_nodes) {
        n->start_mobility();
        n->start_hello();
        if (m_toggles.congestion_control) {
            n->start_congestion_window();
        }
    }
    if (m_options.record_timeseries) {
        m_engine.schedule_after(SimTime::from_seconds(m_cfg.timeseries_interval_s), EventKind::MetricSample,
                                [this] { sample_timeseries(); });
    }

    const SimTime horizon = SimTime::from_seconds(m_cfg.sim_time_s);
    const SimTime final_clock = m_engine.run_until(horizon);

    for (std::size_t i = 0; i < m_flows.size(); ++i) {
        stop_flow(i);
    }
    std::vector<const EnergyState*> energies;
    energies.reserve(m_nodes.size());
    for (auto& n : m_nodes) {
        n->energy_mut().settle(horizon);
        energies.push_back(&n->energy());
    }

    RunResult result;
    result.report = m_metrics.finalize(energies, inventory_uids(), m_cfg.sim_time_s);
    result.report.collision_losses = m_medium.collision_losses();
    std::uint64_t filtered = 0;
    for (const auto& n : m_nodes) {
        filtered += n->router().filtered_control();
    }
    result.report.filtered_control = filtered;
    result.trace_hash = m_engine.trace_hash();
    result.final_clock_s = final_clock.seconds();
    result.events_fired = m_engine.events_fired();
    result.series = m_metrics.series();
    return result;
}

} // namespace manet
