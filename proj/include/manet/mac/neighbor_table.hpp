#pragma once

#include "manet/mac/frames.hpp"
#include "manet/sim/time.hpp"

#include <map>

namespace manet {

// Hello-learned neighborhood bandwidth state. Entries replace stored ones
// only when strictly newer; stale entries age out after max_age.
class NeighborTable {
  public:
    struct Record {
        double consumed_bw_bps = 0.0;
        double timestamp_s = 0.0;
        bool two_hop = false;
    };

    void on_hello(const HelloPayload& hello, NodeId self) {
        update(hello.origin, hello.own_consumed_bw_bps, hello.own_timestamp_s, false);
        for (const auto& e : hello.neighbor_entries) {
            if (e.id == self) {
                continue;
            }
            update(e.id, e.consumed_bw_bps, e.timestamp_s, true);
        }
    }

    // One-hop entries fresh enough to re-advertise.
    std::vector<HelloEntry> fresh_one_hop(double now_s, double max_age_s) const {
        std::vector<HelloEntry> out;
        for (const auto& [id, rec] : m_records) {
            if (rec.two_hop || now_s - rec.timestamp_s > max_age_s) {
                continue;
            }
            out.push_back(HelloEntry{id, rec.consumed_bw_bps, rec.timestamp_s});
        }
        return out;
    }

    // Sum of fresh one- and two-hop consumed bandwidths (each neighbor once).
    double known_consumed_bps(double now_s, double max_age_s) const {
        double total = 0.0;
        for (const auto& [id, rec] : m_records) {
            if (now_s - rec.timestamp_s > max_age_s) {
                continue;
            }
            total += rec.consumed_bw_bps;
        }
        return total;
    }

    bool has(NodeId id) const { return m_records.count(id) != 0; }
    const Record* find(NodeId id) const {
        auto it = m_records.find(id);
        return it == m_records.end() ? nullptr : &it->second;
    }
    std::size_t size() const { return m_records.size(); }

  private:
    void update(NodeId id, double bw_bps, double ts_s, bool two_hop) {
        auto [it, inserted] = m_records.try_emplace(id, Record{bw_bps, ts_s, two_hop});
        if (inserted) {
            return;
        }
        // Timestamp freshness rule: strictly newer replaces.
        if (ts_s > it->second.timestamp_s) {
            it->second = Record{bw_bps, ts_s, two_hop && it->second.two_hop};
        } else if (!two_hop) {
            it->second.two_hop = false; // heard directly; promote
        }
    }

    // Ordered map for deterministic iteration in hello payloads.
    std::map<NodeId, Record> m_records;
};

} // namespace manet
