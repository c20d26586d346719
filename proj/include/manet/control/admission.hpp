#pragma once

#include <algorithm>

namespace manet {

struct AdmissionParams {
    double channel_bw_bps = 2e6; // CHBW
    double weight = 2.0;         // WT
    double min_bw_bps = 100e3;   // MinBW
    double max_bw_bps = 800e3;   // MaxBW
    // Eq. (8) reading: false => (CHBW - UBW) / WT (default),
    //                  true  => CHBW - (UBW / WT).
    bool subtract_quotient = false;
};

struct BandwidthBook {
    double own_consumed_bps = 0.0;       // UBW of this host's admitted flows
    double neighbors_consumed_bps = 0.0; // fresh one- and two-hop total
};

// Feasible bandwidth FBW from channel capacity and known consumption,
// floored at zero.
inline double feasible_bandwidth_bps(const BandwidthBook& book, const AdmissionParams& p) {
    const double ubw = book.own_consumed_bps + book.neighbors_consumed_bps;
    const double fbw = p.subtract_quotient ? p.channel_bw_bps - ubw / p.weight : (p.channel_bw_bps - ubw) / p.weight;
    return std::max(fbw, 0.0);
}

enum class AdmissionDecision : std::uint8_t { Admit, Reject, Probe };

// Flow admission, evaluated in order:
//   1. FBW < RBW            -> reject
//   2. RBW < MinBW          -> admit
//   3. RBW > MaxBW          -> reject
//   4. MinBW <= RBW <= MaxBW -> probe the path for the bottleneck FBW
inline AdmissionDecision admit_flow(double fbw_bps, double rbw_bps, double min_bw_bps, double max_bw_bps) {
    if (fbw_bps < rbw_bps) {
        return AdmissionDecision::Reject;
    }
    if (rbw_bps < min_bw_bps) {
        return AdmissionDecision::Admit;
    }
    if (rbw_bps > max_bw_bps) {
        return AdmissionDecision::Reject;
    }
    return AdmissionDecision::Probe;
}

} // namespace manet
