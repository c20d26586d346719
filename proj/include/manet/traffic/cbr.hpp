#pragma once

#include "manet/control/congestion.hpp"
#include "manet/mac/frames.hpp"
#include "manet/sim/engine.hpp"

#include <functional>

namespace manet {

enum class FlowState : std::uint8_t { PendingAdmission, Active, Rejected, Done };

// Constant-bit-rate source for one flow. The rate may be adjusted between
// emissions by congestion feedback; the new inter-packet gap applies from the
// next emission.
class CbrSource {
  public:
    struct Hooks {
        // Called per emission; the callee assigns the packet uid, records the
        // send, and hands the payload to routing.
        std::function<void(CbrSource&)> emit;
    };

    CbrSource(Engine& engine, std::uint32_t flow_id, NodeId src, NodeId dst, std::uint32_t packet_bits,
              double rate_bps, double rbw_bps, const CongestionParams& cp, Hooks hooks)
        : m_engine(engine), m_flow_id(flow_id), m_src(src), m_dst(dst), m_packet_bits(packet_bits),
          m_rate_bps(rate_bps), m_rbw_bps(rbw_bps), m_cp(cp), m_hooks(std::move(hooks)) {}

    void activate() {
        if (m_state != FlowState::PendingAdmission) {
            return;
        }
        m_state = FlowState::Active;
        emit_now();
    }

    void reject() {
        if (m_state == FlowState::PendingAdmission) {
            m_state = FlowState::Rejected;
        }
    }

    void finish() {
        if (m_state == FlowState::Active) {
            m_state = FlowState::Done;
        } else if (m_state == FlowState::PendingAdmission) {
            m_state = FlowState::Rejected;
        }
        if (m_next != kNoEvent) {
            m_engine.cancel(m_next);
            m_next = kNoEvent;
        }
    }

    void apply_feedback(double fd_bps) {
        if (m_state != FlowState::Active) {
            return;
        }
        m_rate_bps = adjust_rate_bps(m_rate_bps, fd_bps, m_cp);
    }

    FlowState state() const { return m_state; }
    double rate_bps() const { return m_rate_bps; }
    double rbw_bps() const { return m_rbw_bps; }
    std::uint32_t flow_id() const { return m_flow_id; }
    NodeId source() const { return m_src; }
    NodeId destination() const { return m_dst; }
    std::uint32_t packet_bits() const { return m_packet_bits; }
    std::uint64_t packets_emitted() const { return m_emitted; }

  private:
    void emit_now() {
        if (m_state != FlowState::Active) {
            return;
        }
        ++m_emitted;
        m_hooks.emit(*this);
        const double gap_s = static_cast<double>(m_packet_bits) / m_rate_bps;
        m_next = m_engine.schedule_after(SimTime::from_seconds(gap_s), EventKind::TrafficSend, [this] {
            m_next = kNoEvent;
            emit_now();
        });
    }

    Engine& m_engine;
    std::uint32_t m_flow_id;
    NodeId m_src;
    NodeId m_dst;
    std::uint32_t m_packet_bits;
    double m_rate_bps;
    double m_rbw_bps;
    CongestionParams m_cp;
    Hooks m_hooks;

    FlowState m_state = FlowState::PendingAdmission;
    EventHandle m_next = kNoEvent;
    std::uint64_t m_emitted = 0;
};

} // namespace manet
