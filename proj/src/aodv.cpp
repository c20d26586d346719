#include "manet/routing/aodv.hpp"

#include <algorithm>

namespace manet {

AodvRouter::AodvRouter(Engine& engine, NodeId self, const AodvParams& params, const RoutingCrossLayer& xl,
                       const RadioParams& radio, Hooks hooks)
    : m_engine(engine), m_self(self), m_params(params), m_xl(xl), m_radio(radio), m_hooks(std::move(hooks)) {}

NodeId AodvRouter::routed_target(const Frame& frame) {
    switch (frame.kind) {
    case FrameKind::Data: return std::get<DataPayload>(frame.payload).target;
    case FrameKind::Probe: return std::get<ProbePayload>(frame.payload).target;
    case FrameKind::ProbeReply: return std::get<ProbeReplyPayload>(frame.payload).target;
    case FrameKind::RateFeedback: return std::get<RateFeedbackPayload>(frame.payload).target;
    default: return kBroadcast;
    }
}

NodeId AodvRouter::routed_origin(const Frame& frame) {
    switch (frame.kind) {
    case FrameKind::Data: return std::get<DataPayload>(frame.payload).origin;
    case FrameKind::Probe: return std::get<ProbePayload>(frame.payload).origin;
    case FrameKind::ProbeReply: return std::get<ProbeReplyPayload>(frame.payload).origin;
    case FrameKind::RateFeedback: return std::get<RateFeedbackPayload>(frame.payload).origin;
    default: return kBroadcast;
    }
}

void AodvRouter::send_data(const DataPayload& payload) {
    Frame f;
    f.kind = FrameKind::Data;
    f.size_bits = payload.payload_bits + frame_bits::mac_header;
    f.payload = payload;
    route_or_discover(std::move(f));
}

void AodvRouter::send_probe(const ProbePayload& payload) {
    Frame f;
    f.kind = FrameKind::Probe;
    f.size_bits = frame_bits::probe;
    f.payload = payload;
    route_or_discover(std::move(f));
}

void AodvRouter::send_probe_reply(const ProbeReplyPayload& payload) {
    Frame f;
    f.kind = FrameKind::ProbeReply;
    f.size_bits = frame_bits::probe_reply;
    f.payload = payload;
    route_or_discover(std::move(f));
}

void AodvRouter::send_feedback(const RateFeedbackPayload& payload) {
    Frame f;
    f.kind = FrameKind::RateFeedback;
    f.size_bits = frame_bits::rate_feedback;
    f.payload = payload;
    route_or_discover(std::move(f));
}

void AodvRouter::route_or_discover(Frame frame) {
    if (m_dead) {
        if (frame.kind == FrameKind::Data) {
            drop_data(frame, DropCause::NodeDied);
        }
        return;
    }
    const NodeId target = routed_target(frame);
    if (has_valid_route(target)) {
        forward_routed(std::move(frame), m_table.at(target));
        return;
    }
    // Replies and feedback are fire-and-forget: no route, no message.
    if (frame.kind == FrameKind::ProbeReply || frame.kind == FrameKind::RateFeedback) {
        return;
    }
    auto& disc = m_pending[target];
    if (disc.buffer.size() >= m_params.buffer_limit) {
        if (frame.kind == FrameKind::Data) {
            drop_data(frame, DropCause::QueueOverflow);
        }
        return;
    }
    disc.buffer.push_back(std::move(frame));
    if (disc.timer == kNoEvent) {
        start_discovery(target);
    }
}

void AodvRouter::forward_routed(Frame frame, const RouteEntry& entry) {
    frame.rx_node = entry.next_hop;
    frame.tx_node = m_self;
    refresh(entry.destination);
    const NodeId origin = routed_origin(frame);
    if (origin != m_self) {
        refresh(origin);
    }
    m_hooks.send_mac(std::move(frame), tx_power_for(entry));
}

double AodvRouter::tx_power_for(const RouteEntry& entry) const {
    if (m_xl.power_control && entry.has_ptmin) {
        return entry.p_tmin_dbm;
    }
    return m_radio.max_power_dbm;
}

bool AodvRouter::has_valid_route(NodeId dest) {
    auto it = m_table.find(dest);
    if (it == m_table.end() || !it->second.valid) {
        return false;
    }
    if (it->second.expiry < m_engine.now()) {
        it->second.valid = false;
        return false;
    }
    return true;
}

const RouteEntry* AodvRouter::route(NodeId dest) const {
    auto it = m_table.find(dest);
    return it == m_table.end() ? nullptr : &it->second;
}

RouteEntry& AodvRouter::install_route(NodeId dest, NodeId next_hop, int hops, std::uint32_t seq, bool seq_known) {
    RouteEntry& e = m_table[dest];
    const bool fresher = !e.valid || !e.seq_valid || (seq_known && seq > e.dest_seq) ||
                         (seq_known && seq == e.dest_seq && hops < e.hop_count);
    if (e.valid && !fresher) {
        // Keep the existing entry alive; traffic through it is current.
        e.expiry = std::max(e.expiry, m_engine.now() + SimTime::from_seconds(m_params.active_route_timeout_s));
        return e;
    }
    e.destination = dest;
    e.next_hop = next_hop;
    e.hop_count = hops;
    if (seq_known) {
        e.dest_seq = seq;
        e.seq_valid = true;
    }
    e.valid = true;
    e.has_ptmin = false;
    e.expiry = m_engine.now() + SimTime::from_seconds(m_params.active_route_timeout_s);
    return e;
}

void AodvRouter::refresh(NodeId dest) {
    auto it = m_table.find(dest);
    if (it != m_table.end() && it->second.valid) {
        it->second.expiry =
            std::max(it->second.expiry, m_engine.now() + SimTime::from_seconds(m_params.active_route_timeout_s));
    }
}

void AodvRouter::start_discovery(NodeId dest) {
    auto& disc = m_pending[dest];
    disc.attempts = 1;
    flood_rreq(dest);
    disc.timer = m_engine.schedule_after(SimTime::from_seconds(m_params.net_traversal_time_s), EventKind::TimerExpiry,
                                         [this, dest] { discovery_timer_fired(dest); });
}

void AodvRouter::flood_rreq(NodeId dest) {
    ++m_own_seq;
    ++m_rreq_id;

    RreqPayload rreq;
    rreq.origin = m_self;
    rreq.rreq_id = m_rreq_id;
    rreq.origin_seq = m_own_seq;
    rreq.target = dest;
    if (auto it = m_table.find(dest); it != m_table.end() && it->second.seq_valid) {
        rreq.target_seq = it->second.dest_seq;
        rreq.target_seq_known = true;
    }
    rreq.hop_count = 0;

    m_seen_rreq[{m_self, m_rreq_id}] = m_engine.now();

    Frame f;
    f.kind = FrameKind::Rreq;
    f.rx_node = kBroadcast;
    f.tx_node = m_self;
    f.size_bits = frame_bits::rreq;
    f.payload = rreq;
    m_hooks.send_mac(std::move(f), m_radio.max_power_dbm);
}

void AodvRouter::discovery_timer_fired(NodeId dest) {
    auto it = m_pending.find(dest);
    if (it == m_pending.end()) {
        return;
    }
    Discovery& disc = it->second;
    disc.timer = kNoEvent;
    if (has_valid_route(dest)) {
        finish_discovery(dest, true);
        return;
    }
    if (disc.attempts <= m_params.rreq_retries) {
        ++disc.attempts;
        flood_rreq(dest);
        disc.timer = m_engine.schedule_after(SimTime::from_seconds(m_params.net_traversal_time_s),
                                             EventKind::TimerExpiry, [this, dest] { discovery_timer_fired(dest); });
        return;
    }
    finish_discovery(dest, false);
}

void AodvRouter::finish_discovery(NodeId dest, bool ok) {
    auto it = m_pending.find(dest);
    if (it == m_pending.end()) {
        return;
    }
    Discovery disc = std::move(it->second);
    m_pending.erase(it);
    if (disc.timer != kNoEvent) {
        m_engine.cancel(disc.timer);
    }
    if (ok) {
        for (auto& f : disc.buffer) {
            const NodeId target = routed_target(f);
            if (has_valid_route(target)) {
                forward_routed(std::move(f), m_table.at(target));
            } else if (f.kind == FrameKind::Data) {
                drop_data(f, DropCause::NoRoute);
            }
        }
    } else {
        for (auto& f : disc.buffer) {
            if (f.kind == FrameKind::Data) {
                drop_data(f, DropCause::NoRoute);
            }
        }
    }
    if (m_hooks.discovery_finished) {
        m_hooks.discovery_finished(dest, ok);
    }
}

void AodvRouter::on_frame(const Frame& frame, double p_rx_dbm) {
    if (m_dead) {
        return;
    }
    switch (frame.kind) {
    case FrameKind::Rreq:
        if (m_xl.link_filter && !link_acceptable(p_rx_dbm, m_xl.rss_accept_threshold_dbm)) {
            ++m_filtered;
            return;
        }
        handle_rreq(frame);
        return;
    case FrameKind::Rrep:
        if (m_xl.link_filter && !link_acceptable(p_rx_dbm, m_xl.rss_accept_threshold_dbm)) {
            ++m_filtered;
            return;
        }
        handle_rrep(frame, p_rx_dbm);
        return;
    case FrameKind::Rerr: handle_rerr(frame); return;
    case FrameKind::Data:
    case FrameKind::Probe:
    case FrameKind::ProbeReply:
    case FrameKind::RateFeedback: handle_routed(frame, p_rx_dbm); return;
    default: return;
    }
}

void AodvRouter::handle_rreq(const Frame& frame) {
    const auto& rreq = std::get<RreqPayload>(frame.payload);
    if (rreq.origin == m_self) {
        return;
    }
    const auto key = std::make_pair(rreq.origin, rreq.rreq_id);
    const SimTime now = m_engine.now();
    if (auto it = m_seen_rreq.find(key); it != m_seen_rreq.end()) {
        if ((now - it->second).seconds() < m_params.rreq_id_lifetime_s) {
            ++m_rreq_dups;
            return;
        }
    }
    m_seen_rreq[key] = now;

    install_route(rreq.origin, frame.tx_node, rreq.hop_count + 1, rreq.origin_seq, true);

    if (rreq.target == m_self) {
        if (rreq.target_seq_known) {
            m_own_seq = std::max(m_own_seq, rreq.target_seq);
        }
        ++m_own_seq;

        RrepPayload rrep;
        rrep.route_target = m_self;
        rrep.target_seq = m_own_seq;
        rrep.hop_count = 0;
        rrep.rreq_origin = rreq.origin;

        Frame f;
        f.kind = FrameKind::Rrep;
        f.tx_node = m_self;
        f.rx_node = frame.tx_node;
        f.size_bits = frame_bits::rrep;
        f.payload = rrep;
        m_hooks.send_mac(std::move(f), m_radio.max_power_dbm);
        return;
    }

    if (rreq.hop_count + 1 >= m_params.ttl_limit) {
        return;
    }
    RreqPayload fwd = rreq;
    ++fwd.hop_count;
    Frame f;
    f.kind = FrameKind::Rreq;
    f.tx_node = m_self;
    f.rx_node = kBroadcast;
    f.size_bits = frame_bits::rreq;
    f.payload = fwd;
    m_hooks.send_mac(std::move(f), m_radio.max_power_dbm);
}

void AodvRouter::handle_rrep(const Frame& frame, double p_rx_dbm) {
    const auto& rrep = std::get<RrepPayload>(frame.payload);

    double ptmin = 0.0;
    bool have_ptmin = false;
    if (m_xl.power_control) {
        bool anomaly = false;
        const double pl = path_loss_db(frame.tx_power_dbm, p_rx_dbm, &anomaly);
        if (anomaly) {
            ++m_pl_anomalies;
        }
        ptmin = min_tx_power_dbm(pl, m_radio.rx_threshold_dbm, m_xl.k, m_radio.min_power_dbm, m_radio.max_power_dbm);
        have_ptmin = true;
    }

    RouteEntry& fwd = install_route(rrep.route_target, frame.tx_node, rrep.hop_count + 1, rrep.target_seq, true);
    if (have_ptmin && fwd.valid && fwd.next_hop == frame.tx_node) {
        fwd.p_tmin_dbm = ptmin;
        fwd.has_ptmin = true;
    }
    // The link to the transmitter itself was just measured too.
    if (rrep.route_target != frame.tx_node) {
        RouteEntry& nbr = install_route(frame.tx_node, frame.tx_node, 1, 0, false);
        if (have_ptmin && nbr.valid && nbr.next_hop == frame.tx_node) {
            nbr.p_tmin_dbm = ptmin;
            nbr.has_ptmin = true;
        }
    }

    if (rrep.rreq_origin == m_self) {
        finish_discovery(rrep.route_target, true);
        return;
    }

    if (!has_valid_route(rrep.rreq_origin)) {
        ++m_rrep_no_reverse;
        return;
    }
    const RouteEntry& rev = m_table.at(rrep.rreq_origin);
    RrepPayload fwd_payload = rrep;
    ++fwd_payload.hop_count;
    Frame f;
    f.kind = FrameKind::Rrep;
    f.tx_node = m_self;
    f.rx_node = rev.next_hop;
    f.size_bits = frame_bits::rrep;
    f.payload = fwd_payload;

    // The upstream node routes through us toward the target.
    m_table[rrep.route_target].precursors.insert(rev.next_hop);
    refresh(rrep.rreq_origin);
    m_hooks.send_mac(std::move(f), m_radio.max_power_dbm);
}

void AodvRouter::handle_rerr(const Frame& frame) {
    const auto& rerr = std::get<RerrPayload>(frame.payload);
    RerrPayload cascade;
    for (const auto& [dest, seq] : rerr.unreachable) {
        auto it = m_table.find(dest);
        if (it == m_table.end() || !it->second.valid || it->second.next_hop != frame.tx_node) {
            continue;
        }
        it->second.valid = false;
        it->second.dest_seq = std::max(it->second.dest_seq, seq);
        it->second.seq_valid = true;
        if (!it->second.precursors.empty()) {
            cascade.unreachable.emplace_back(dest, it->second.dest_seq);
        }
        it->second.precursors.clear();
    }
    if (cascade.unreachable.empty()) {
        return;
    }
    Frame f;
    f.kind = FrameKind::Rerr;
    f.tx_node = m_self;
    f.rx_node = kBroadcast;
    f.size_bits =
        frame_bits::rerr_base + frame_bits::rerr_per_dest * static_cast<std::uint32_t>(cascade.unreachable.size());
    f.payload = std::move(cascade);
    m_hooks.send_mac(std::move(f), m_radio.max_power_dbm);
}

void AodvRouter::handle_routed(Frame frame, double p_rx_dbm) {
    (void)p_rx_dbm;
    const NodeId target = routed_target(frame);
    const NodeId origin = routed_origin(frame);

    if (target == m_self) {
        refresh(frame.tx_node);
        if (origin != m_self) {
            refresh(origin);
        }
        switch (frame.kind) {
        case FrameKind::Data: {
            const auto& d = std::get<DataPayload>(frame.payload);
            m_hooks.data_arrived(d, (m_engine.now() - d.origin_time).seconds());
            return;
        }
        case FrameKind::Probe: {
            auto p = std::get<ProbePayload>(frame.payload);
            p.min_fbw_bps = std::min(p.min_fbw_bps, m_hooks.local_fbw_bps());
            m_hooks.probe_at_target(p);
            return;
        }
        case FrameKind::ProbeReply: m_hooks.probe_reply_at_source(std::get<ProbeReplyPayload>(frame.payload)); return;
        case FrameKind::RateFeedback:
            m_hooks.feedback_at_source(std::get<RateFeedbackPayload>(frame.payload));
            return;
        default: return;
        }
    }

    // Transit: decrement hop budget, accumulate probe state, forward.
    switch (frame.kind) {
    case FrameKind::Data: {
        auto& d = std::get<DataPayload>(frame.payload);
        if (--d.ttl <= 0) {
            drop_data(frame, DropCause::TtlExceeded);
            return;
        }
        break;
    }
    case FrameKind::Probe: {
        auto& p = std::get<ProbePayload>(frame.payload);
        if (--p.ttl <= 0) {
            return;
        }
        p.min_fbw_bps = std::min(p.min_fbw_bps, m_hooks.local_fbw_bps());
        break;
    }
    case FrameKind::ProbeReply: {
        auto& p = std::get<ProbeReplyPayload>(frame.payload);
        if (--p.ttl <= 0) {
            return;
        }
        break;
    }
    case FrameKind::RateFeedback: {
        auto& p = std::get<RateFeedbackPayload>(frame.payload);
        if (--p.ttl <= 0) {
            return;
        }
        break;
    }
    default: return;
    }

    if (!has_valid_route(target)) {
        if (frame.kind == FrameKind::Data) {
            // Transit node without a route: report upstream and drop.
            auto it = m_table.find(target);
            RerrPayload rerr;
            const std::uint32_t seq = (it != m_table.end() && it->second.seq_valid) ? it->second.dest_seq + 1 : 1;
            rerr.unreachable.emplace_back(target, seq);
            Frame f;
            f.kind = FrameKind::Rerr;
            f.tx_node = m_self;
            f.rx_node = kBroadcast;
            f.size_bits = frame_bits::rerr_base + frame_bits::rerr_per_dest;
            f.payload = std::move(rerr);
            m_hooks.send_mac(std::move(f), m_radio.max_power_dbm);
            drop_data(frame, DropCause::NoRoute);
        }
        return;
    }
    RouteEntry& entry = m_table.at(target);
    entry.precursors.insert(frame.tx_node);
    forward_routed(std::move(frame), entry);
}

void AodvRouter::on_unicast_done(const Frame& frame, MacOutcome outcome) {
    if (m_dead) {
        return;
    }
    if (outcome == MacOutcome::Delivered) {
        refresh(frame.rx_node);
        if (is_routed_unicast(frame.kind)) {
            refresh(routed_target(frame));
        }
        return;
    }
    if (outcome != MacOutcome::RetriesExhausted) {
        return;
    }
    if (frame.kind == FrameKind::Data) {
        drop_data(frame, DropCause::MacRetries);
    }
    handle_link_break(frame.rx_node);
}

void AodvRouter::handle_link_break(NodeId next_hop) {
    RerrPayload rerr;
    for (auto& [dest, e] : m_table) {
        if (!e.valid || e.next_hop != next_hop) {
            continue;
        }
        e.valid = false;
        if (e.seq_valid) {
            ++e.dest_seq;
        } else {
            e.dest_seq = 1;
            e.seq_valid = true;
        }
        if (!e.precursors.empty()) {
            rerr.unreachable.emplace_back(dest, e.dest_seq);
        }
        e.precursors.clear();
    }
    if (rerr.unreachable.empty()) {
        return;
    }
    Frame f;
    f.kind = FrameKind::Rerr;
    f.tx_node = m_self;
    f.rx_node = kBroadcast;
    f.size_bits =
        frame_bits::rerr_base + frame_bits::rerr_per_dest * static_cast<std::uint32_t>(rerr.unreachable.size());
    f.payload = std::move(rerr);
    m_hooks.send_mac(std::move(f), m_radio.max_power_dbm);
}

void AodvRouter::drop_data(const Frame& frame, DropCause cause) {
    m_hooks.data_dropped(std::get<DataPayload>(frame.payload), cause);
}

void AodvRouter::on_death() {
    m_dead = true;
    for (auto& [dest, disc] : m_pending) {
        if (disc.timer != kNoEvent) {
            m_engine.cancel(disc.timer);
            disc.timer = kNoEvent;
        }
        for (const auto& f : disc.buffer) {
            if (f.kind == FrameKind::Data) {
                drop_data(f, DropCause::NodeDied);
            }
        }
        disc.buffer.clear();
    }
    m_pending.clear();
}

} // namespace manet
