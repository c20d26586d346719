#pragma once

#include "manet/mac/frames.hpp"
#include "manet/mac/timing.hpp"
#include "manet/phy/radio.hpp"
#include "manet/sim/engine.hpp"

#include <deque>
#include <functional>
#include <unordered_set>

namespace manet {

enum class MacOutcome : std::uint8_t { Delivered, Collided, RetriesExhausted, NoCts };

// Simplified 802.11 DCF: DIFS + slotted backoff with freeze/resume,
// RTS/CTS/DATA/ACK for unicast with SIFS gaps, plain transmission for
// broadcast. Exposes contention-overhead accounting per window.
class DcfMac {
  public:
    struct Hooks {
        // Hand a transmission to the PHY; returns its end time.
        std::function<SimTime(const Frame&, double power_dbm, SimTime airtime)> transmit;
        std::function<bool()> medium_busy;
        // Decoded frame for the upper layers (Data/Hello/Rreq/...).
        std::function<void(const Frame&, double p_rx_dbm)> deliver;
        std::function<void(const Frame&, MacOutcome)> unicast_done;
        // Queue overflow or death purge; frame never went on air (terminally).
        std::function<void(const Frame&)> dropped;
    };

    DcfMac(Engine& engine, const MacTiming& timing, const RadioParams& radio, NodeId self, bool power_control,
           Hooks hooks);

    // Entry point from routing. data_power_dbm applies to the DATA frame and,
    // under power control, to the whole exchange. Broadcast frames go at max
    // power and skip the handshake.
    void enqueue(Frame frame, double data_power_dbm);

    // PHY notifications (wired through net::Node).
    void on_medium_busy_changed(bool busy);
    void on_frame_decoded(const Frame& frame, double p_rx_dbm);
    void on_tx_ended(const Frame& frame);

    void purge_on_death();

    ContentionWindowStats take_window_stats(double now_s);
    const ContentionWindowStats& window_stats() const { return m_window; }
    double last_t_acc_s() const { return m_last_t_acc_s; }
    std::uint64_t no_cts_timeouts() const { return m_no_cts; }
    std::uint64_t no_ack_timeouts() const { return m_no_ack; }

    std::size_t queue_length() const { return m_queue.size(); }
    // Conservation walk over queued data packets.
    template <typename Fn> void for_each_queued(Fn&& fn) const {
        for (const auto& p : m_queue) {
            fn(p.frame);
        }
    }

  private:
    struct Pending {
        Frame frame;
        double power_dbm = 0.0;
        std::uint32_t attempts = 0;
    };

    enum class XState : std::uint8_t { None, WaitCtsTx, WaitCts, WaitDataTx, WaitAck, Broadcast };

    void start_access();
    void try_countdown();
    void pause_countdown();
    void access_timer_fired();
    void send_rts();
    void exchange_failed(MacOutcome outcome);
    void exchange_succeeded();
    void finish_head();
    void respond_cts(const Frame& rts);
    void send_ack(NodeId to, std::uint64_t ref_uid, double power_dbm);
    SimTime airtime(FrameKind kind, std::uint32_t bits) const;
    double exchange_power(const Pending& p) const;
    std::uint64_t next_uid();

    Engine& m_engine;
    MacTiming m_timing;
    RadioParams m_radio;
    NodeId m_self;
    bool m_power_control;
    Hooks m_hooks;

    std::deque<Pending> m_queue;
    bool m_dead = false;

    // Contention state for the head-of-line frame.
    std::uint32_t m_cw;
    std::uint32_t m_backoff_slots = 0;
    bool m_backoff_drawn = false;
    bool m_counting_down = false;
    SimTime m_countdown_started;
    SimTime m_access_fire_time;
    SimTime m_attempt_start;
    bool m_access_active = false;
    EventHandle m_access_timer = kNoEvent;

    // Sender-side exchange state.
    XState m_xstate = XState::None;
    EventHandle m_response_timer = kNoEvent;
    EventHandle m_sifs_timer = kNoEvent;

    // Responder-side state (one exchange at a time).
    bool m_responding = false;
    NodeId m_resp_peer = 0;
    std::uint64_t m_resp_ref = 0;
    double m_resp_power_dbm = 0.0;
    std::uint32_t m_resp_data_bits = 0;
    EventHandle m_resp_timer = kNoEvent;

    ContentionWindowStats m_window;
    double m_last_t_acc_s = 0.0;
    std::uint64_t m_no_cts = 0;
    std::uint64_t m_no_ack = 0;

    // Dedup of re-received unicast DATA after a lost ACK.
    std::unordered_set<std::uint64_t> m_seen_uids;
    std::deque<std::uint64_t> m_seen_order;

    std::uint64_t m_uid_counter = 0;
};

} // namespace manet
