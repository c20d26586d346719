#pragma once

#include "manet/mac/dcf.hpp"
#include "manet/mac/frames.hpp"
#include "manet/metrics/report.hpp"
#include "manet/phy/radio.hpp"
#include "manet/routing/power_control.hpp"
#include "manet/sim/engine.hpp"

#include <deque>
#include <functional>
#include <map>
#include <set>

namespace manet {

struct AodvParams {
    double active_route_timeout_s = 3.0;
    double net_traversal_time_s = 2.8;
    std::uint32_t rreq_retries = 2;
    double rreq_id_lifetime_s = 5.6;
    std::uint32_t buffer_limit = 64;
    int ttl_limit = 32;
};

// MCBA extensions the router applies during discovery.
struct RoutingCrossLayer {
    bool link_filter = false;
    bool power_control = false;
    double rss_accept_threshold_dbm = 0.0;
    double k = 1.0;
};

struct RouteEntry {
    NodeId destination = 0;
    NodeId next_hop = 0;
    int hop_count = 0;
    std::uint32_t dest_seq = 0;
    bool seq_valid = false;
    double p_tmin_dbm = 0.0;
    bool has_ptmin = false;
    SimTime expiry;
    bool valid = false;
    std::set<NodeId> precursors;
};

// On-demand routing: RREQ flood / RREP unicast / RERR invalidation, with the
// RSS link filter on discovery frames and P_Tmin computation from RREP
// reception cached per next hop.
class AodvRouter {
  public:
    struct Hooks {
        std::function<void(Frame, double data_power_dbm)> send_mac;
        std::function<void(const DataPayload&, double delay_s)> data_arrived;
        std::function<void(ProbePayload)> probe_at_target;
        std::function<void(const ProbeReplyPayload&)> probe_reply_at_source;
        std::function<void(const RateFeedbackPayload&)> feedback_at_source;
        std::function<void(const DataPayload&, DropCause)> data_dropped;
        std::function<void(NodeId dest, bool ok)> discovery_finished;
        std::function<double()> local_fbw_bps; // probe accumulation
    };

    AodvRouter(Engine& engine, NodeId self, const AodvParams& params, const RoutingCrossLayer& xl,
               const RadioParams& radio, Hooks hooks);

    // Origination entry points. Frames without a route are buffered while a
    // discovery runs (data, probe) or dropped (reply, feedback).
    void send_data(const DataPayload& payload);
    void send_probe(const ProbePayload& payload);
    void send_probe_reply(const ProbeReplyPayload& payload);
    void send_feedback(const RateFeedbackPayload& payload);

    // Decoded payload frame from the MAC (all kinds except Hello).
    void on_frame(const Frame& frame, double p_rx_dbm);

    // MAC unicast completion.
    void on_unicast_done(const Frame& frame, MacOutcome outcome);

    void on_death();

    const RouteEntry* route(NodeId dest) const;
    bool has_valid_route(NodeId dest);

    template <typename Fn> void for_each_buffered(Fn&& fn) const {
        for (const auto& [dest, disc] : m_pending) {
            for (const auto& f : disc.buffer) {
                fn(f);
            }
        }
    }

    std::uint64_t filtered_control() const { return m_filtered; }
    std::uint64_t path_loss_anomalies() const { return m_pl_anomalies; }
    std::uint64_t rrep_without_reverse() const { return m_rrep_no_reverse; }
    std::uint64_t rreq_duplicates() const { return m_rreq_dups; }

  private:
    struct Discovery {
        std::uint32_t attempts = 0;
        EventHandle timer = kNoEvent;
        std::deque<Frame> buffer;
    };

    void route_or_discover(Frame frame);
    void forward_routed(Frame frame, const RouteEntry& entry);
    void handle_routed(Frame frame, double p_rx_dbm);
    void handle_rreq(const Frame& frame);
    void handle_rrep(const Frame& frame, double p_rx_dbm);
    void handle_rerr(const Frame& frame);
    void handle_link_break(NodeId next_hop);
    void start_discovery(NodeId dest);
    void flood_rreq(NodeId dest);
    void discovery_timer_fired(NodeId dest);
    void finish_discovery(NodeId dest, bool ok);

    RouteEntry& install_route(NodeId dest, NodeId next_hop, int hops, std::uint32_t seq, bool seq_known);
    void refresh(NodeId dest);
    double tx_power_for(const RouteEntry& entry) const;
    void drop_data(const Frame& frame, DropCause cause);
    static NodeId routed_target(const Frame& frame);
    static NodeId routed_origin(const Frame& frame);

    Engine& m_engine;
    NodeId m_self;
    AodvParams m_params;
    RoutingCrossLayer m_xl;
    RadioParams m_radio;
    Hooks m_hooks;

    std::map<NodeId, RouteEntry> m_table;
    std::map<std::pair<NodeId, std::uint32_t>, SimTime> m_seen_rreq;
    std::map<NodeId, Discovery> m_pending;
    std::uint32_t m_own_seq = 0;
    std::uint32_t m_rreq_id = 0;
    bool m_dead = false;

    std::uint64_t m_filtered = 0;
    std::uint64_t m_pl_anomalies = 0;
    std::uint64_t m_rrep_no_reverse = 0;
    std::uint64_t m_rreq_dups = 0;
};

} // namespace manet
