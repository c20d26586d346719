#pragma once

#include "manet/mac/frames.hpp"
#include "manet/phy/radio.hpp"
#include "manet/sim/engine.hpp"
#include "manet/sim/vec2.hpp"

#include <array>
#include <memory>
#include <vector>

namespace manet {

// Per-node hooks the shared medium drives. Implemented by net::Node.
class INodePhy {
  public:
    virtual ~INodePhy() = default;
    virtual Vec2 position(SimTime t) const = 0;
    virtual bool phy_alive() const = 0;
    virtual void medium_busy_changed(bool busy) = 0;
    virtual void decode_started() = 0;
    // frame == nullptr: decode lost (collision, aborted transmission, death).
    virtual void decode_finished(const Frame* frame, double p_rx_dbm) = 0;
    virtual void tx_ended(const Frame& frame) = 0;
};

// Shared radio channel. A transmission is sensed by every node that receives
// it above the carrier-sense threshold; a frame decodes at a node only if it
// arrived above the receiver threshold onto an otherwise idle channel and no
// other sensed signal overlapped it (collision loses both, no capture).
class Medium {
  public:
    Medium(Engine& engine, const RadioParams& radio);

    // Registration order defines NodeId; all nodes register before traffic.
    void register_node(INodePhy* node);

    // Starts a transmission of the given airtime. The sender must not already
    // be transmitting. Returns the transmission end time.
    SimTime transmit(NodeId sender, const Frame& frame, double tx_power_dbm, SimTime airtime);

    // Marks the sender's in-progress transmission as aborted (battery died
    // mid-frame); receivers lose the frame at its scheduled end.
    void abort_transmission(NodeId sender);

    // Clears receive state of a dead node.
    void node_died(NodeId node);

    bool busy_at(NodeId node) const;
    bool transmitting(NodeId node) const { return m_rx[node].transmitting; }

    std::uint64_t collision_losses() const { return m_collision_losses; }
    std::uint64_t frames_sent() const { return m_frames_sent; }
    std::uint64_t frames_sent(FrameKind k) const { return m_sent_by_kind[static_cast<std::size_t>(k)]; }

  private:
    struct TxRecord {
        Frame frame;
        double power_dbm = 0.0;
        NodeId sender = 0;
        SimTime end;
        bool aborted = false;
    };

    struct RxState {
        int active = 0; // sensed signals currently in the air here
        std::shared_ptr<TxRecord> decoding;
        double decode_p_rx_dbm = 0.0;
        bool decode_corrupted = false;
        bool transmitting = false;
        std::shared_ptr<TxRecord> own_tx;
    };

    void signal_begins(NodeId receiver, const std::shared_ptr<TxRecord>& rec, double p_rx_dbm);
    void signal_ends(NodeId receiver, const std::shared_ptr<TxRecord>& rec);

    Engine& m_engine;
    RadioParams m_radio;
    std::vector<INodePhy*> m_nodes;
    std::vector<RxState> m_rx;
    std::uint64_t m_collision_losses = 0;
    std::uint64_t m_frames_sent = 0;
    std::array<std::uint64_t, 16> m_sent_by_kind{};
};

} // namespace manet
