#pragma once

#include "manet/metrics/report.hpp"
#include "manet/phy/energy.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace manet {

struct ConservationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Optional per-metric samples for plotting.
struct TimeSeries {
    static constexpr std::array<const char*, 6> labels = {"pdr",   "avg_delay_s", "throughput_pkts",
                                                          "drops", "avg_energy_j", "control_overhead"};
    std::vector<double> t_s;
    std::array<std::vector<double>, 6> values;
};

// Event-driven counters for the per-run aggregates. Every data packet gets
// exactly one terminal fate; late conflicting events are counted as ghosts
// instead of double-counting.
class MetricsCollector {
  public:
    explicit MetricsCollector(double sim_time_s) : m_sim_time_s(sim_time_s) {}

    std::uint64_t register_sent(std::uint32_t flow_id) {
        const std::uint64_t uid = ++m_sent;
        m_flow_of[uid] = flow_id;
        auto& f = m_per_flow[flow_id];
        ++f.sent;
        return uid;
    }

    void on_delivered(std::uint64_t uid, double delay_s, std::uint32_t payload_bits) {
        auto [it, inserted] = m_fate.try_emplace(uid, Fate::Delivered);
        if (!inserted) {
            ++m_ghosts;
            return;
        }
        ++m_delivered;
        m_delay_sum_s += delay_s;
        m_delivered_bits += payload_bits;
        ++m_per_flow[m_flow_of.at(uid)].delivered;
    }

    void on_dropped(std::uint64_t uid, DropCause cause) {
        auto [it, inserted] = m_fate.try_emplace(uid, Fate::Dropped);
        if (!inserted) {
            ++m_ghosts;
            return;
        }
        ++m_dropped;
        ++m_drops_by_cause[static_cast<std::size_t>(cause)];
        ++m_per_flow[m_flow_of.at(uid)].dropped;
    }

    bool fate_sealed(std::uint64_t uid) const { return m_fate.count(uid) != 0; }

    void on_control_packet() { ++m_control; }
    void on_flow_admitted() { ++m_flows_admitted; }
    void on_flow_rejected() { ++m_flows_rejected; }

    std::uint64_t sent() const { return m_sent; }
    std::uint64_t delivered() const { return m_delivered; }
    std::uint64_t dropped() const { return m_dropped; }
    std::uint64_t dropped(DropCause cause) const { return m_drops_by_cause[static_cast<std::size_t>(cause)]; }
    std::uint64_t control_packets() const { return m_control; }

    void sample(double t_s, double avg_energy_j) {
        m_series.t_s.push_back(t_s);
        m_series.values[0].push_back(m_sent > 0 ? static_cast<double>(m_delivered) / static_cast<double>(m_sent) : 0.0);
        m_series.values[1].push_back(m_delivered > 0 ? m_delay_sum_s / static_cast<double>(m_delivered) : 0.0);
        m_series.values[2].push_back(static_cast<double>(m_delivered));
        m_series.values[3].push_back(static_cast<double>(m_dropped));
        m_series.values[4].push_back(avg_energy_j);
        m_series.values[5].push_back(m_delivered > 0 ? static_cast<double>(m_control) / static_cast<double>(m_delivered)
                                                     : 0.0);
    }

    const TimeSeries& series() const { return m_series; }

    // Closes the run: checks packet conservation against the physical
    // inventory of still-queued packets and audits every node's energy
    // ledger. Throws ConservationError on any inconsistency.
    MetricsReport finalize(const std::vector<const EnergyState*>& nodes,
                           const std::vector<std::uint64_t>& inventory_uids, double horizon_s);

  private:
    enum class Fate : std::uint8_t { Delivered, Dropped };

    struct FlowCounters {
        std::uint64_t sent = 0;
        std::uint64_t delivered = 0;
        std::uint64_t dropped = 0;
    };

    double m_sim_time_s;
    std::uint64_t m_sent = 0;
    std::uint64_t m_delivered = 0;
    std::uint64_t m_dropped = 0;
    std::uint64_t m_control = 0;
    std::uint64_t m_flows_admitted = 0;
    std::uint64_t m_flows_rejected = 0;
    std::uint64_t m_ghosts = 0;
    double m_delay_sum_s = 0.0;
    std::uint64_t m_delivered_bits = 0;
    std::array<std::uint64_t, static_cast<std::size_t>(DropCause::Count_)> m_drops_by_cause{};
    std::unordered_map<std::uint64_t, Fate> m_fate;
    std::unordered_map<std::uint64_t, std::uint32_t> m_flow_of;
    std::map<std::uint32_t, FlowCounters> m_per_flow;
    TimeSeries m_series;

  public:
    std::uint64_t ghosts() const { return m_ghosts; }
};

} // namespace manet
