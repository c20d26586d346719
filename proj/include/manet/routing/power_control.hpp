#pragma once

#include <algorithm>
#include <cmath>

namespace manet {

// Route-selection filter on received signal strength: links arriving below
// the acceptance threshold are discarded before routing processing. The
// boundary is inclusive, mirroring the PHY reception decision.
inline bool link_acceptable(double p_rx_dbm, double rss_accept_threshold_dbm) {
    return p_rx_dbm >= rss_accept_threshold_dbm;
}

// Path loss = P_T - P_R in the dB domain. A negative result (receive power
// above the attached transmit power) is clamped to zero; callers count it.
inline double path_loss_db(double p_tx_dbm, double p_rx_dbm, bool* anomaly = nullptr) {
    const double pl = p_tx_dbm - p_rx_dbm;
    if (pl < 0.0) {
        if (anomaly != nullptr) {
            *anomaly = true;
        }
        return 0.0;
    }
    if (anomaly != nullptr) {
        *anomaly = false;
    }
    return pl;
}

// Minimum required transmit power: P_Tmin = k * (path loss + R_TH), read in
// the dB domain. The result is rounded up to the next power step before
// clamping so the closed loop (Friis forward at P_Tmin) always lands at or
// above R_TH instead of oscillating within float noise of it.
inline constexpr double kPowerStepDb = 0.005;

inline double min_tx_power_dbm(double path_loss_db_v, double r_th_dbm, double k, double min_dbm, double max_dbm) {
    const double raw = k * (path_loss_db_v + r_th_dbm);
    const double quantized = (std::floor(raw / kPowerStepDb) + 1.0) * kPowerStepDb;
    return std::clamp(quantized, min_dbm, max_dbm);
}

} // namespace manet
