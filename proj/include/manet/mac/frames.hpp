#pragma once

#include "manet/sim/time.hpp"

#include <cstdint>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

namespace manet {

using NodeId = std::uint32_t;
constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max();

enum class FrameKind : std::uint8_t {
    Rts,
    Cts,
    Ack,
    Data,
    Hello,
    Rreq,
    Rrep,
    Rerr,
    Probe,
    ProbeReply,
    RateFeedback,
};

constexpr const char* frame_kind_name(FrameKind k) {
    switch (k) {
    case FrameKind::Rts: return "rts";
    case FrameKind::Cts: return "cts";
    case FrameKind::Ack: return "ack";
    case FrameKind::Data: return "data";
    case FrameKind::Hello: return "hello";
    case FrameKind::Rreq: return "rreq";
    case FrameKind::Rrep: return "rrep";
    case FrameKind::Rerr: return "rerr";
    case FrameKind::Probe: return "probe";
    case FrameKind::ProbeReply: return "probe-reply";
    case FrameKind::RateFeedback: return "rate-feedback";
    }
    return "?";
}

struct DataPayload {
    std::uint32_t flow_id = 0;
    std::uint64_t packet_uid = 0;
    NodeId origin = 0;
    NodeId target = 0;
    SimTime origin_time;
    std::uint32_t payload_bits = 0;
    int ttl = 0;
};

struct RreqPayload {
    NodeId origin = 0;
    std::uint32_t rreq_id = 0;
    std::uint32_t origin_seq = 0;
    NodeId target = 0;
    std::uint32_t target_seq = 0;
    bool target_seq_known = false;
    int hop_count = 0;
};

struct RrepPayload {
    NodeId route_target = 0; // destination the route leads to
    std::uint32_t target_seq = 0;
    int hop_count = 0;
    NodeId rreq_origin = 0; // where this reply is headed
};

struct RerrPayload {
    std::vector<std::pair<NodeId, std::uint32_t>> unreachable; // (dest, seq)
};

struct HelloEntry {
    NodeId id = 0;
    double consumed_bw_bps = 0.0;
    double timestamp_s = 0.0;
};

struct HelloPayload {
    NodeId origin = 0;
    double own_consumed_bw_bps = 0.0;
    double own_timestamp_s = 0.0;
    bool carries_bandwidth = false; // admission-control extension present
    std::vector<HelloEntry> neighbor_entries;
};

struct ProbePayload {
    std::uint32_t flow_id = 0;
    NodeId origin = 0;
    NodeId target = 0;
    double required_bw_bps = 0.0;
    double min_fbw_bps = 0.0;
    int ttl = 0;
};

struct ProbeReplyPayload {
    std::uint32_t flow_id = 0;
    NodeId origin = 0; // destination of the probe (reply sender)
    NodeId target = 0; // flow source
    double min_fbw_bps = 0.0;
    int ttl = 0;
};

struct RateFeedbackPayload {
    std::uint32_t flow_id = 0;
    NodeId origin = 0; // bottleneck node
    NodeId target = 0; // flow source
    double fd_bps = 0.0;
    int ttl = 0;
};

using FramePayload = std::variant<std::monostate, DataPayload, RreqPayload, RrepPayload, RerrPayload, HelloPayload,
                                  ProbePayload, ProbeReplyPayload, RateFeedbackPayload>;

// A simulated PHY/MAC unit in flight. Sizes drive airtime; field values are
// simulation records, not wire encodings.
struct Frame {
    FrameKind kind = FrameKind::Data;
    NodeId tx_node = 0;          // per-hop transmitter
    NodeId rx_node = kBroadcast; // per-hop receiver, or broadcast
    std::uint64_t uid = 0;       // unique per MAC frame; receivers dedup on it
    std::uint32_t size_bits = 0; // whole frame including MAC header
    double tx_power_dbm = 0.0;   // power field the sender attached

    // RTS extras: requested exchange power and upcoming DATA size.
    double ptmin_request_dbm = 0.0;
    bool has_ptmin_request = false;
    std::uint32_t data_bits = 0;
    std::uint64_t ref_uid = 0; // Rts/Cts/Ack: uid of the DATA frame of the exchange

    FramePayload payload;
};

// Nominal payload sizes (bits), including a 28-byte MAC header on
// routing/data frames. Control sizes follow common AODV/802.11 accounting.
namespace frame_bits {
constexpr std::uint32_t mac_header = 224;
constexpr std::uint32_t rreq = 192 + mac_header;
constexpr std::uint32_t rrep = 160 + mac_header;
constexpr std::uint32_t rerr_base = 96 + mac_header;
constexpr std::uint32_t rerr_per_dest = 64;
constexpr std::uint32_t hello_base = 128 + mac_header;
constexpr std::uint32_t hello_per_entry = 96;
constexpr std::uint32_t probe = 128 + mac_header;
constexpr std::uint32_t probe_reply = 128 + mac_header;
constexpr std::uint32_t rate_feedback = 128 + mac_header;
} // namespace frame_bits

inline bool is_routed_unicast(FrameKind k) {
    return k == FrameKind::Data || k == FrameKind::Probe || k == FrameKind::ProbeReply || k == FrameKind::RateFeedback;
}

inline bool is_control_kind(FrameKind k) {
    switch (k) {
    case FrameKind::Hello:
    case FrameKind::Rreq:
    case FrameKind::Rrep:
    case FrameKind::Rerr:
    case FrameKind::Probe:
    case FrameKind::ProbeReply:
    case FrameKind::RateFeedback: return true;
    default: return false;
    }
}

} // namespace manet
