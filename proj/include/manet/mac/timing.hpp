#pragma once

#include <cstdint>

namespace manet {

struct MacTiming {
    double t_sifs_s = 10e-6;
    double t_difs_s = 50e-6;
    double slot_s = 20e-6;
    std::uint32_t cw_min = 31;
    std::uint32_t cw_max = 1023;
    double control_rate_bps = 2e6;
    std::uint32_t rts_bits = 160;
    std::uint32_t cts_bits = 112;
    std::uint32_t ack_bits = 112;
    std::uint32_t retry_limit = 4; // attempts before the link is declared broken
    std::uint32_t queue_limit = 50;
    bool rts_at_max_power = false; // keep RTS at max even under power control
};

// Channel occupation of one RTS/CTS handshake:
//   C_occ = t_RTS + t_CTS + 3 t_SIFS
inline double channel_occupation_s(const MacTiming& t) {
    return static_cast<double>(t.rts_bits) / t.control_rate_bps + static_cast<double>(t.cts_bits) / t.control_rate_bps +
           3.0 * t.t_sifs_s;
}

// Per-node contention accounting over one measurement window.
struct ContentionWindowStats {
    double window_start_s = 0.0;
    double t_acc_total_s = 0.0;          // accumulated access-contention time
    std::uint64_t handshake_count = 0;   // completed RTS/CTS exchanges as sender
};

// MAC overhead of a closed window: OH_MAC = C_occ + t_acc, with C_occ paid
// once per handshake.
inline double measure_overhead_s(const ContentionWindowStats& w, const MacTiming& t) {
    return static_cast<double>(w.handshake_count) * channel_occupation_s(t) + w.t_acc_total_s;
}

} // namespace manet
