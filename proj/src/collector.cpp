#include "manet/metrics/collector.hpp"

#include <cmath>

namespace manet {

MetricsReport MetricsCollector::finalize(const std::vector<const EnergyState*>& nodes,
                                         const std::vector<std::uint64_t>& inventory_uids, double horizon_s) {
    // Per-flow and global conservation.
    if (m_delivered + m_dropped > m_sent) {
        throw ConservationError("metrics: delivered + dropped exceeds sent");
    }
    for (const auto& [flow, f] : m_per_flow) {
        if (f.delivered + f.dropped > f.sent) {
            throw ConservationError("metrics: per-flow conservation violated for flow " + std::to_string(flow));
        }
    }

    // Every packet without a terminal fate must still exist somewhere.
    std::unordered_set<std::uint64_t> inventory(inventory_uids.begin(), inventory_uids.end());
    for (std::uint64_t uid = 1; uid <= m_sent; ++uid) {
        if (m_fate.count(uid) == 0 && inventory.count(uid) == 0) {
            throw ConservationError("metrics: packet " + std::to_string(uid) +
                                    " has no terminal fate and is not queued anywhere");
        }
    }

    // Energy audit per node: decrements must equal the interval ledger and
    // the intervals must cover the whole run.
    double energy_sum = 0.0;
    std::uint64_t depleted = 0;
    for (const EnergyState* e : nodes) {
        const double consumed = e->params().initial_j - e->residual_j();
        const double reconstructed = e->params().draw_idle_w * e->t_idle_s() + e->params().draw_rx_w * e->t_rx_s() +
                                     e->tx_energy_j();
        const double scale = std::max(1.0, consumed);
        if (std::abs(consumed - e->consumed_j()) > 1e-9 * scale ||
            std::abs(consumed - reconstructed) > 1e-9 * scale) {
            throw ConservationError("metrics: energy ledger mismatch");
        }
        const double covered = e->t_idle_s() + e->t_rx_s() + e->t_tx_s();
        const double expected = e->depleted() ? covered : horizon_s; // depleted ledgers freeze at death
        if (!e->depleted() && std::abs(covered - expected) > 1e-6) {
            throw ConservationError("metrics: energy intervals do not cover the run");
        }
        energy_sum += consumed;
        if (e->depleted()) {
            ++depleted;
        }
    }

    MetricsReport r;
    r.sent = m_sent;
    r.delivered = m_delivered;
    r.dropped = m_dropped;
    r.in_flight = m_sent - m_delivered - m_dropped;
    r.control_packets = m_control;
    r.drops_by_cause = m_drops_by_cause;

    r.pdr_defined = m_sent > 0;
    r.pdr = r.pdr_defined ? static_cast<double>(m_delivered) / static_cast<double>(m_sent) : 0.0;
    if (r.pdr < 0.0 || r.pdr > 1.0) {
        throw ConservationError("metrics: pdr out of [0,1]");
    }
    r.delay_defined = m_delivered > 0;
    r.avg_delay_s = r.delay_defined ? m_delay_sum_s / static_cast<double>(m_delivered) : 0.0;
    r.throughput_pkts = m_delivered;
    r.throughput_bps = m_sim_time_s > 0.0 ? static_cast<double>(m_delivered_bits) / m_sim_time_s : 0.0;
    r.avg_energy_j = nodes.empty() ? 0.0 : energy_sum / static_cast<double>(nodes.size());
    r.overhead_defined = m_delivered > 0;
    r.control_overhead = r.overhead_defined ? static_cast<double>(m_control) / static_cast<double>(m_delivered) : 0.0;

    r.flows_admitted = m_flows_admitted;
    r.flows_rejected = m_flows_rejected;
    r.ghost_events = m_ghosts;
    r.nodes_depleted = depleted;
    return r;
}

} // namespace manet
