#include "manet/mac/dcf.hpp"

#include <algorithm>
#include <cmath>

namespace manet {

namespace {
constexpr std::size_t kDedupWindow = 512;
}

DcfMac::DcfMac(Engine& engine, const MacTiming& timing, const RadioParams& radio, NodeId self, bool power_control,
               Hooks hooks)
    : m_engine(engine), m_timing(timing), m_radio(radio), m_self(self), m_power_control(power_control),
      m_hooks(std::move(hooks)), m_cw(timing.cw_min) {}

std::uint64_t DcfMac::next_uid() {
    return (static_cast<std::uint64_t>(m_self) + 1) << 40 | ++m_uid_counter;
}

SimTime DcfMac::airtime(FrameKind kind, std::uint32_t bits) const {
    const double rate = (kind == FrameKind::Rts || kind == FrameKind::Cts || kind == FrameKind::Ack)
                            ? m_timing.control_rate_bps
                            : m_radio.channel_rate_bps;
    return SimTime::from_seconds(static_cast<double>(bits) / rate);
}

double DcfMac::exchange_power(const Pending& p) const {
    if (m_power_control && p.frame.rx_node != kBroadcast) {
        return p.power_dbm;
    }
    return m_radio.max_power_dbm;
}

void DcfMac::enqueue(Frame frame, double data_power_dbm) {
    if (m_dead) {
        m_hooks.dropped(frame);
        return;
    }
    if (m_queue.size() >= m_timing.queue_limit) {
        m_hooks.dropped(frame);
        return;
    }
    if (frame.uid == 0) {
        frame.uid = next_uid();
    }
    m_queue.push_back(Pending{std::move(frame), data_power_dbm, 0});
    if (m_queue.size() == 1 && m_xstate == XState::None) {
        start_access();
    }
}

void DcfMac::start_access() {
    if (m_queue.empty() || m_dead) {
        return;
    }
    m_access_active = true;
    m_attempt_start = m_engine.now();
    if (!m_backoff_drawn) {
        m_backoff_slots = m_engine.stream(StreamLabel::MacBackoff).uniform_u32(0, m_cw);
        m_backoff_drawn = true;
    }
    try_countdown();
}

void DcfMac::try_countdown() {
    if (!m_access_active || m_counting_down || m_responding || m_dead) {
        return;
    }
    if (m_xstate != XState::None) {
        return;
    }
    if (m_hooks.medium_busy()) {
        return; // resumed by the idle edge
    }
    m_counting_down = true;
    m_countdown_started = m_engine.now();
    const SimTime wait =
        SimTime::from_seconds(m_timing.t_difs_s + static_cast<double>(m_backoff_slots) * m_timing.slot_s);
    m_access_fire_time = m_engine.now() + wait;
    m_access_timer = m_engine.schedule_at(m_access_fire_time, EventKind::TimerExpiry, [this] { access_timer_fired(); });
}

void DcfMac::on_medium_busy_changed(bool busy) {
    if (m_dead) {
        return;
    }
    if (!busy) {
        try_countdown();
        return;
    }
    pause_countdown();
}

void DcfMac::pause_countdown() {
    if (!m_counting_down) {
        return;
    }
    // The countdown already reached its boundary this very instant: the
    // station commits to transmit and cannot sense the tie.
    if (m_access_fire_time <= m_engine.now()) {
        return;
    }
    // Freeze: whole slots survived after DIFS are consumed.
    const double idle_s = (m_engine.now() - m_countdown_started).seconds();
    const double after_difs = idle_s - m_timing.t_difs_s;
    if (after_difs > 0.0) {
        const auto consumed = static_cast<std::uint32_t>(after_difs / m_timing.slot_s);
        m_backoff_slots -= std::min(m_backoff_slots, consumed);
    }
    m_engine.cancel(m_access_timer);
    m_access_timer = kNoEvent;
    m_counting_down = false;
}

void DcfMac::access_timer_fired() {
    m_access_timer = kNoEvent;
    m_counting_down = false;
    if (m_responding) {
        // A response claimed the radio at this same instant; defer the
        // transmission until the exchange completes.
        m_backoff_slots = 0;
        return;
    }
    m_backoff_drawn = false;
    m_access_active = false;

    const double t_acc = (m_engine.now() - m_attempt_start).seconds();
    m_window.t_acc_total_s += t_acc;
    m_last_t_acc_s = t_acc;

    Pending& head = m_queue.front();
    if (head.frame.rx_node == kBroadcast) {
        head.frame.tx_node = m_self;
        head.frame.tx_power_dbm = m_radio.max_power_dbm;
        m_xstate = XState::Broadcast;
        m_hooks.transmit(head.frame, m_radio.max_power_dbm, airtime(head.frame.kind, head.frame.size_bits));
        return;
    }
    send_rts();
}

void DcfMac::send_rts() {
    Pending& head = m_queue.front();
    const double xp = exchange_power(head);
    const double rts_power = (m_power_control && !m_timing.rts_at_max_power) ? xp : m_radio.max_power_dbm;

    Frame rts;
    rts.kind = FrameKind::Rts;
    rts.tx_node = m_self;
    rts.rx_node = head.frame.rx_node;
    rts.uid = next_uid();
    rts.size_bits = m_timing.rts_bits;
    rts.tx_power_dbm = rts_power;
    rts.ptmin_request_dbm = xp;
    rts.has_ptmin_request = m_power_control;
    rts.data_bits = head.frame.size_bits;
    rts.ref_uid = head.frame.uid;

    m_xstate = XState::WaitCtsTx;
    m_hooks.transmit(rts, rts_power, airtime(FrameKind::Rts, rts.size_bits));
}

void DcfMac::on_tx_ended(const Frame& frame) {
    if (m_dead) {
        return;
    }
    switch (frame.kind) {
    case FrameKind::Rts:
        if (m_xstate == XState::WaitCtsTx) {
            m_xstate = XState::WaitCts;
            const SimTime timeout = SimTime::from_seconds(m_timing.t_sifs_s + 2.0 * m_timing.slot_s) +
                                    airtime(FrameKind::Cts, m_timing.cts_bits);
            m_response_timer =
                m_engine.schedule_after(timeout, EventKind::TimerExpiry, [this] { exchange_failed(MacOutcome::NoCts); });
        }
        return;
    case FrameKind::Cts:
        if (m_responding) {
            const SimTime timeout = SimTime::from_seconds(m_timing.t_sifs_s + 2.0 * m_timing.slot_s) +
                                    airtime(FrameKind::Data, m_resp_data_bits);
            m_resp_timer = m_engine.schedule_after(timeout, EventKind::TimerExpiry, [this] {
                m_resp_timer = kNoEvent;
                m_responding = false;
                try_countdown();
            });
        }
        return;
    case FrameKind::Ack:
        if (m_responding) {
            m_responding = false;
            try_countdown();
        }
        return;
    default: break;
    }

    // A frame of our own queue finished its airtime.
    if (m_xstate == XState::Broadcast && !m_queue.empty() && frame.uid == m_queue.front().frame.uid) {
        m_xstate = XState::None;
        finish_head();
        return;
    }
    if (m_xstate == XState::WaitDataTx && !m_queue.empty() && frame.uid == m_queue.front().frame.uid) {
        m_xstate = XState::WaitAck;
        const SimTime timeout = SimTime::from_seconds(m_timing.t_sifs_s + 2.0 * m_timing.slot_s) +
                                airtime(FrameKind::Ack, m_timing.ack_bits);
        m_response_timer =
            m_engine.schedule_after(timeout, EventKind::TimerExpiry, [this] { exchange_failed(MacOutcome::Collided); });
    }
}

void DcfMac::on_frame_decoded(const Frame& frame, double p_rx_dbm) {
    if (m_dead) {
        return;
    }
    switch (frame.kind) {
    case FrameKind::Rts:
        if (frame.rx_node == m_self && !m_responding && m_xstate == XState::None) {
            respond_cts(frame);
        }
        return;
    case FrameKind::Cts:
        if (frame.rx_node == m_self && m_xstate == XState::WaitCts && !m_queue.empty() &&
            frame.ref_uid == m_queue.front().frame.uid) {
            m_engine.cancel(m_response_timer);
            m_response_timer = kNoEvent;
            ++m_window.handshake_count;
            // DATA goes out one SIFS after the CTS.
            m_xstate = XState::WaitDataTx;
            m_sifs_timer = m_engine.schedule_after(SimTime::from_seconds(m_timing.t_sifs_s), EventKind::TimerExpiry,
                                                   [this] {
                                                       m_sifs_timer = kNoEvent;
                                                       Pending& head = m_queue.front();
                                                       head.frame.tx_node = m_self;
                                                       const double xp = exchange_power(head);
                                                       head.frame.tx_power_dbm = xp;
                                                       m_hooks.transmit(head.frame, xp,
                                                                        airtime(head.frame.kind, head.frame.size_bits));
                                                   });
        }
        return;
    case FrameKind::Ack:
        if (frame.rx_node == m_self && m_xstate == XState::WaitAck && !m_queue.empty() &&
            frame.ref_uid == m_queue.front().frame.uid) {
            m_engine.cancel(m_response_timer);
            m_response_timer = kNoEvent;
            exchange_succeeded();
        }
        return;
    default: break;
    }

    // Payload-bearing frame.
    if (frame.rx_node == kBroadcast) {
        m_hooks.deliver(frame, p_rx_dbm);
        return;
    }
    if (frame.rx_node != m_self) {
        return;
    }
    // Unicast data-plane frame: acknowledge, dedup, deliver.
    double ack_power = frame.tx_power_dbm;
    if (m_responding && m_resp_peer == frame.tx_node && m_resp_ref == frame.uid) {
        m_engine.cancel(m_resp_timer);
        m_resp_timer = kNoEvent;
        ack_power = m_resp_power_dbm;
        // Responder stays claimed until the ACK has been sent.
    } else if (m_responding || m_xstate != XState::None) {
        return; // mid another exchange; sender will retry
    } else {
        m_responding = true;
        m_resp_peer = frame.tx_node;
        pause_countdown();
    }
    send_ack(frame.tx_node, frame.uid, ack_power);
    if (m_seen_uids.insert(frame.uid).second) {
        m_seen_order.push_back(frame.uid);
        if (m_seen_order.size() > kDedupWindow) {
            m_seen_uids.erase(m_seen_order.front());
            m_seen_order.pop_front();
        }
        m_hooks.deliver(frame, p_rx_dbm);
    }
}

void DcfMac::respond_cts(const Frame& rts) {
    m_responding = true;
    pause_countdown();
    m_resp_peer = rts.tx_node;
    m_resp_ref = rts.ref_uid;
    m_resp_power_dbm = rts.has_ptmin_request ? rts.ptmin_request_dbm : m_radio.max_power_dbm;
    m_resp_data_bits = rts.data_bits;

    Frame cts;
    cts.kind = FrameKind::Cts;
    cts.tx_node = m_self;
    cts.rx_node = rts.tx_node;
    cts.uid = next_uid();
    cts.size_bits = m_timing.cts_bits;
    cts.tx_power_dbm = m_resp_power_dbm;
    cts.ref_uid = rts.ref_uid;

    m_resp_timer = m_engine.schedule_after(SimTime::from_seconds(m_timing.t_sifs_s), EventKind::TimerExpiry,
                                           [this, cts] {
                                               m_resp_timer = kNoEvent;
                                               m_hooks.transmit(cts, cts.tx_power_dbm,
                                                                airtime(FrameKind::Cts, cts.size_bits));
                                           });
}

void DcfMac::send_ack(NodeId to, std::uint64_t ref_uid, double power_dbm) {
    Frame ack;
    ack.kind = FrameKind::Ack;
    ack.tx_node = m_self;
    ack.rx_node = to;
    ack.uid = next_uid();
    ack.size_bits = m_timing.ack_bits;
    ack.tx_power_dbm = power_dbm;
    ack.ref_uid = ref_uid;

    // Untracked timer: guard against dying within the gap.
    m_engine.schedule_after(SimTime::from_seconds(m_timing.t_sifs_s), EventKind::TimerExpiry, [this, ack] {
        if (m_dead) {
            return;
        }
        m_hooks.transmit(ack, ack.tx_power_dbm, airtime(FrameKind::Ack, ack.size_bits));
    });
}

void DcfMac::exchange_failed(MacOutcome outcome) {
    if (outcome == MacOutcome::NoCts) {
        ++m_no_cts;
    } else {
        ++m_no_ack;
    }
    m_response_timer = kNoEvent;
    m_xstate = XState::None;
    Pending& head = m_queue.front();
    ++head.attempts;
    m_cw = std::min(2 * (m_cw + 1) - 1, m_timing.cw_max);
    if (head.attempts >= m_timing.retry_limit) {
        Frame failed = std::move(head.frame);
        m_queue.pop_front();
        m_cw = m_timing.cw_min;
        m_backoff_drawn = false;
        m_hooks.unicast_done(failed, MacOutcome::RetriesExhausted);
        if (!m_queue.empty()) {
            start_access();
        }
        return;
    }
    start_access();
}

void DcfMac::exchange_succeeded() {
    m_xstate = XState::None;
    Frame done = std::move(m_queue.front().frame);
    m_queue.pop_front();
    m_cw = m_timing.cw_min;
    m_backoff_drawn = false;
    m_hooks.unicast_done(done, MacOutcome::Delivered);
    if (!m_queue.empty()) {
        start_access();
    }
}

void DcfMac::finish_head() {
    m_queue.pop_front();
    m_backoff_drawn = false;
    if (!m_queue.empty()) {
        start_access();
    }
}

void DcfMac::purge_on_death() {
    m_dead = true;
    m_engine.cancel(m_access_timer);
    m_engine.cancel(m_response_timer);
    m_engine.cancel(m_sifs_timer);
    m_engine.cancel(m_resp_timer);
    m_access_timer = m_response_timer = m_sifs_timer = m_resp_timer = kNoEvent;
    m_counting_down = false;
    m_access_active = false;
    m_xstate = XState::None;
    m_responding = false;
    for (auto& p : m_queue) {
        m_hooks.dropped(p.frame);
    }
    m_queue.clear();
}

ContentionWindowStats DcfMac::take_window_stats(double now_s) {
    ContentionWindowStats out = m_window;
    m_window = ContentionWindowStats{};
    m_window.window_start_s = now_s;
    return out;
}

} // namespace manet
