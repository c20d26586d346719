#pragma once

#include <algorithm>

namespace manet {

struct CongestionParams {
    double t_rh_s = 0.2;     // overhead threshold per window
    double window_s = 0.5;   // measurement window
    double rt_min_bps = 1024;
    double rt_max_bps = 2e6;
    double hysteresis = 0.05; // notify only when |fd| >= hysteresis * rate
};

// Channel resource delta:
//   dS = ((T_rh - OH_MAC) / OH_MAC) * S
// positive iff OH_MAC < T_rh. An idle window (OH_MAC == 0) returns the
// configured cap instead of dividing by zero.
inline double channel_resource_delta_bps(double oh_mac_s, double t_rh_s, double s_bps, double delta_max_bps) {
    if (oh_mac_s <= 0.0) {
        return delta_max_bps;
    }
    return (t_rh_s - oh_mac_s) / oh_mac_s * s_bps;
}

// Rate update rt = rt + fd, clamped into [rt_min, rt_max].
inline double adjust_rate_bps(double rt_bps, double fd_bps, const CongestionParams& p) {
    return std::clamp(rt_bps + fd_bps, p.rt_min_bps, p.rt_max_bps);
}

} // namespace manet
