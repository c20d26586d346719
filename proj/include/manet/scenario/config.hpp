#pragma once

#include "manet/control/admission.hpp"
#include "manet/control/congestion.hpp"
#include "manet/mac/timing.hpp"
#include "manet/phy/energy.hpp"
#include "manet/phy/radio.hpp"
#include "manet/routing/aodv.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace manet {

enum class Protocol : std::uint8_t { Mcba, AodvBaseline };

constexpr const char* protocol_label(Protocol p) { return p == Protocol::Mcba ? "mcba" : "aodv-baseline"; }

struct Toggles {
    bool link_filter = false;
    bool power_control = false;
    bool congestion_control = false;
    bool admission_control = false;
};

struct NodePosition {
    bool set = false;
    double x_m = 0.0;
    double y_m = 0.0;
};

struct FlowConfig {
    NodeId src = 0;
    NodeId dst = 0;
    double rbw_bps = 0.0;
    double rate_bps = 0.0;
    std::uint32_t packet_bytes = 512;
    double start_s = 0.0;
    std::optional<double> stop_s;
};

struct ScenarioError : std::runtime_error {
    explicit ScenarioError(std::vector<std::string> issues_in)
        : std::runtime_error(join(issues_in)), issues(std::move(issues_in)) {}
    std::vector<std::string> issues;

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) {
                out += '\n';
            }
            out += s;
        }
        return out;
    }
};

// Full scenario description. Unset optional fields resolve to the defaults
// of the 50-node 1500x500 reference setup.
struct ScenarioConfig {
    std::string scenario_id = "default";

    double sim_time_s = 100.0;
    std::uint64_t master_seed = 1;
    std::uint32_t node_count = 50;
    double area_x_m = 1500.0;
    double area_y_m = 500.0;
    double timeseries_interval_s = 1.0;

    Protocol protocol = Protocol::Mcba;
    std::optional<bool> link_filter;
    std::optional<bool> power_control;
    std::optional<bool> congestion_control;
    std::optional<bool> admission_control;

    double speed_mps = 5.0;
    double pause_s = 10.0;

    double wavelength_m = 0.328;
    double tx_gain = 1.0;
    double rx_gain = 1.0;
    double range_m = 250.0;
    double max_power_w = 0.2818;
    double min_power_dbm = -20.0;
    std::optional<double> rx_threshold_dbm;
    std::optional<double> cs_threshold_dbm;
    double channel_rate_bps = 2e6;

    double energy_initial_j = 4.7;
    double energy_rx_w = 0.395;
    double energy_tx_w = 0.660;
    double energy_idle_w = 0.035;

    double sifs_us = 10.0;
    double difs_us = 50.0;
    double slot_us = 20.0;
    std::uint32_t cw_min = 31;
    std::uint32_t cw_max = 1023;
    double control_rate_bps = 2e6;
    std::uint32_t rts_bits = 160;
    std::uint32_t cts_bits = 112;
    std::uint32_t ack_bits = 112;
    std::uint32_t retry_limit = 4;
    std::uint32_t queue_limit = 50;
    bool rts_at_max_power = false;

    double active_route_timeout_s = 3.0;
    double net_traversal_time_s = 2.8;
    std::uint32_t rreq_retries = 2;
    double rreq_id_lifetime_s = 5.6;
    double hello_interval_s = 1.0;
    std::uint32_t buffer_limit = 64;
    std::uint32_t ttl_limit = 32;

    double k = 1.0;
    double rss_margin_db = 10.0;
    double window_s = 0.5;
    std::optional<double> t_rh_s;
    double wt = 2.0;
    std::optional<double> min_bw_bps;
    std::optional<double> max_bw_bps;
    double hysteresis = 0.05;
    bool fbw_subtract_quotient = false;
    double rate_min_bps = 1024.0;
    double rate_max_bps = 2e6;

    std::vector<FlowConfig> flows;
    // Optional pinned placements (index = node id); unset nodes place
    // uniformly at random from the topology stream.
    std::vector<NodePosition> node_positions;

    // Resolved parameter blocks.
    RadioParams radio_params() const;
    EnergyParams energy_params() const;
    MacTiming mac_timing() const;
    AodvParams aodv_params() const;
    CongestionParams congestion_params() const;
    AdmissionParams admission_params() const;
    RoutingCrossLayer routing_crosslayer() const;
    Toggles toggles() const;

    // Returns the list of invariant violations; empty means valid.
    std::vector<std::string> validate() const;
};

// Flat dotted key=value parser. Unknown keys, malformed values, and
// invariant violations produce line/field-identifying diagnostics.
ScenarioConfig parse_scenario(const std::string& text, const std::string& scenario_id = "default");
ScenarioConfig load_scenario_file(const std::string& path);

enum class SweepParam : std::uint8_t { NodeCount, Pause };

struct SweepSpec {
    ScenarioConfig base;
    SweepParam parameter = SweepParam::NodeCount;
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
};

SweepSpec parse_sweep(const std::string& text, const std::string& scenario_id = "sweep");
SweepSpec load_sweep_file(const std::string& path);

// Deterministic per-cell seed: adding cells never shifts existing cells.
std::uint64_t cell_seed(std::uint64_t master_seed, double sweep_value, std::size_t seed_index, Protocol protocol);

// Canonical key=value dump of the resolved configuration (run manifest).
std::string dump_scenario(const ScenarioConfig& cfg);

} // namespace manet
