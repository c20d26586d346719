#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace manet {

enum class DropCause : std::uint8_t {
    NoRoute,
    MacRetries,
    QueueOverflow,
    TtlExceeded,
    NodeDied,
    Count_,
};

constexpr const char* drop_cause_name(DropCause c) {
    switch (c) {
    case DropCause::NoRoute: return "no-route";
    case DropCause::MacRetries: return "mac-retries";
    case DropCause::QueueOverflow: return "queue-overflow";
    case DropCause::TtlExceeded: return "ttl-exceeded";
    case DropCause::NodeDied: return "node-died";
    default: return "?";
    }
}

// The six aggregates of one run plus the raw counters they derive from.
struct MetricsReport {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t in_flight = 0;
    std::uint64_t control_packets = 0;
    std::array<std::uint64_t, static_cast<std::size_t>(DropCause::Count_)> drops_by_cause{};

    double pdr = 0.0;
    bool pdr_defined = false;
    double avg_delay_s = 0.0;
    bool delay_defined = false;
    std::uint64_t throughput_pkts = 0;
    double throughput_bps = 0.0;
    double avg_energy_j = 0.0;
    double control_overhead = 0.0;
    bool overhead_defined = false;

    std::uint64_t flows_admitted = 0;
    std::uint64_t flows_rejected = 0;

    // Diagnostics.
    std::uint64_t ghost_events = 0;      // late terminal events after a packet's fate was sealed
    std::uint64_t collision_losses = 0;  // decodes lost to overlap
    std::uint64_t filtered_control = 0;  // RREQ/RREP discarded by the RSS filter
    std::uint64_t nodes_depleted = 0;

    std::string flags() const {
        std::string out;
        auto add = [&out](const char* tok) {
            if (!out.empty()) {
                out += ';';
            }
            out += tok;
        };
        if (!pdr_defined) {
            add("pdr_undefined");
        }
        if (!delay_defined) {
            add("delay_undefined");
        }
        if (!overhead_defined) {
            add("overhead_undefined");
        }
        return out;
    }
};

} // namespace manet
