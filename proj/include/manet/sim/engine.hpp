#pragma once

#include "manet/sim/random.hpp"
#include "manet/sim/time.hpp"

#include <cstdint>
#include <functional>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace manet {

// Event payload categories; part of the recorded event trace.
enum class EventKind : std::uint8_t {
    FrameArrival,
    TimerExpiry,
    WaypointReached,
    HelloDue,
    MetricSample,
    TrafficSend,
};

// Named random purposes. Draws on one stream never perturb another.
enum class StreamLabel : std::uint8_t { Mobility, Traffic, MacBackoff, Topology };

constexpr std::string_view stream_label_name(StreamLabel label) {
    switch (label) {
    case StreamLabel::Mobility: return "mobility";
    case StreamLabel::Traffic: return "traffic";
    case StreamLabel::MacBackoff: return "mac-backoff";
    case StreamLabel::Topology: return "topology";
    }
    return "?";
}

using EventHandle = std::uint64_t;
constexpr EventHandle kNoEvent = 0;

// Deterministic discrete-event engine: one clock, one queue, seeded named
// random streams. Strictly single-threaded per instance.
class Engine {
  public:
    explicit Engine(std::uint64_t master_seed);

    SimTime now() const { return m_clock; }

    // Enqueues fn at fire time t. Ties on t fire in scheduling order.
    // Scheduling in the past is a contract violation and throws.
    EventHandle schedule_at(SimTime t, EventKind kind, std::function<void()> fn);
    EventHandle schedule_after(SimTime delay, EventKind kind, std::function<void()> fn);

    // Cancels a pending event; a cancelled event never fires. Cancelling an
    // already-fired handle is a no-op.
    void cancel(EventHandle h);

    // Fires all events with fire_time <= end in (time, sequence) order.
    // Returns the final clock: end if events remain (or none ever fired),
    // otherwise the fire time of the last event processed.
    SimTime run_until(SimTime end);

    RandomStream& stream(StreamLabel label);

    std::uint64_t events_fired() const { return m_fired; }
    std::size_t pending() const { return m_live.size(); }

    // Rolling FNV-1a digest over (fire_time, sequence, kind) of every fired
    // event; equal hashes across runs mean equal traces.
    std::uint64_t trace_hash() const { return m_trace_hash; }

  private:
    struct Entry {
        SimTime at;
        std::uint64_t seq;
        EventKind kind;
        std::function<void()> fn;
    };

    // Min-heap: std:: heap algorithms are max-heaps, so invert.
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.at != b.at) {
                return b.at < a.at;
            }
            return b.seq < a.seq;
        }
    };

    SimTime m_clock = SimTime::zero();
    std::uint64_t m_next_seq = 1;
    std::uint64_t m_fired = 0;
    std::uint64_t m_trace_hash = 0xcbf29ce484222325ULL;
    std::vector<Entry> m_heap;
    std::unordered_set<std::uint64_t> m_live; // scheduled, not yet fired or cancelled
    std::unordered_set<std::uint64_t> m_cancelled;
    std::vector<RandomStream> m_streams;
};

} // namespace manet
