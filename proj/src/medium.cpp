#include "manet/phy/medium.hpp"

#include <stdexcept>

namespace manet {

Medium::Medium(Engine& engine, const RadioParams& radio) : m_engine(engine), m_radio(radio) {}

void Medium::register_node(INodePhy* node) {
    m_nodes.push_back(node);
    m_rx.emplace_back();
}

SimTime Medium::transmit(NodeId sender, const Frame& frame, double tx_power_dbm, SimTime airtime) {
    RxState& s = m_rx[sender];
    if (s.transmitting) {
        throw std::logic_error("Medium::transmit: sender already transmitting");
    }
    const SimTime now = m_engine.now();
    auto rec = std::make_shared<TxRecord>();
    rec->frame = frame;
    rec->power_dbm = tx_power_dbm;
    rec->sender = sender;
    rec->end = now + airtime;

    // Half duplex: starting a transmission kills any decode in progress.
    if (s.decoding) {
        s.decode_corrupted = true;
    }
    s.transmitting = true;
    s.own_tx = rec;
    ++m_frames_sent;
    ++m_sent_by_kind[static_cast<std::size_t>(frame.kind)];

    const Vec2 from = m_nodes[sender]->position(now);
    for (NodeId j = 0; j < m_nodes.size(); ++j) {
        if (j == sender) {
            continue;
        }
        const double d = distance(from, m_nodes[j]->position(now));
        const double p_rx = received_power_dbm(tx_power_dbm, d, m_radio);
        if (!carrier_sensed(p_rx, m_radio)) {
            continue; // below the interference floor: invisible here
        }
        signal_begins(j, rec, p_rx);
        m_engine.schedule_at(rec->end, EventKind::FrameArrival, [this, j, rec] { signal_ends(j, rec); });
    }

    m_engine.schedule_at(rec->end, EventKind::TimerExpiry, [this, sender, rec] {
        RxState& st = m_rx[sender];
        st.transmitting = false;
        st.own_tx.reset();
        m_nodes[sender]->tx_ended(rec->frame);
    });
    return rec->end;
}

void Medium::abort_transmission(NodeId sender) {
    if (m_rx[sender].own_tx) {
        m_rx[sender].own_tx->aborted = true;
    }
}

void Medium::node_died(NodeId node) {
    RxState& s = m_rx[node];
    s.decoding.reset();
    s.decode_corrupted = false;
}

bool Medium::busy_at(NodeId node) const {
    const RxState& s = m_rx[node];
    return s.active > 0 || s.transmitting;
}

void Medium::signal_begins(NodeId receiver, const std::shared_ptr<TxRecord>& rec, double p_rx_dbm) {
    RxState& s = m_rx[receiver];
    const bool was_idle = (s.active == 0);
    ++s.active;
    if (was_idle && !s.transmitting) {
        m_nodes[receiver]->medium_busy_changed(true);
    }
    if (s.transmitting) {
        return; // counted for CCA once the node's own tx ends
    }
    if (s.decoding) {
        // Overlap: the frame being decoded is lost, and the newcomer arrived
        // onto a busy channel so it cannot be decoded either.
        s.decode_corrupted = true;
        return;
    }
    if (was_idle && m_nodes[receiver]->phy_alive() && can_receive(p_rx_dbm, m_radio)) {
        s.decoding = rec;
        s.decode_p_rx_dbm = p_rx_dbm;
        s.decode_corrupted = false;
        m_nodes[receiver]->decode_started();
    }
}

void Medium::signal_ends(NodeId receiver, const std::shared_ptr<TxRecord>& rec) {
    RxState& s = m_rx[receiver];
    --s.active;
    if (s.decoding == rec) {
        const bool ok = !s.decode_corrupted && !rec->aborted && m_nodes[receiver]->phy_alive();
        const double measured = s.decode_p_rx_dbm;
        s.decoding.reset();
        s.decode_corrupted = false;
        if (!ok) {
            ++m_collision_losses;
            m_nodes[receiver]->decode_finished(nullptr, measured);
        } else {
            m_nodes[receiver]->decode_finished(&rec->frame, measured);
        }
    }
    if (s.active == 0 && !s.transmitting) {
        m_nodes[receiver]->medium_busy_changed(false);
    }
}

} // namespace manet
