#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace manet {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }

struct RadioParams {
    double wavelength_m = 0.328; // 914 MHz carrier
    double tx_gain = 1.0;
    double rx_gain = 1.0;
    double rx_threshold_dbm = -55.0;            // resolved from range by the scenario loader
    double carrier_sense_threshold_dbm = -62.0; // ditto
    double max_power_dbm = watts_to_dbm(0.2818);
    double min_power_dbm = -20.0;
    double channel_rate_bps = 2e6;
};

// Free-space received power in the dB domain:
//   P_R = P_T + 20 log10(lambda / 4 pi d) + 10 log10(G_T G_R)
// Equivalent to P_R = P_T (lambda / 4 pi d)^2 G_T G_R in linear watts.
inline double received_power_dbm(double p_tx_dbm, double distance_m, const RadioParams& p) {
    if (!(distance_m > 0.0)) {
        throw std::logic_error("received_power_dbm: distance must be positive (co-located nodes)");
    }
    const double ratio = p.wavelength_m / (4.0 * std::numbers::pi * distance_m);
    return p_tx_dbm + 20.0 * std::log10(ratio) + 10.0 * std::log10(p.tx_gain * p.rx_gain);
}

// Reception boundary is inclusive.
inline bool can_receive(double p_rx_dbm, const RadioParams& p) { return p_rx_dbm >= p.rx_threshold_dbm; }

inline bool carrier_sensed(double p_rx_dbm, const RadioParams& p) {
    return p_rx_dbm >= p.carrier_sense_threshold_dbm;
}

} // namespace manet
