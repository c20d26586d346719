#include "manet/sim/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace manet {

Engine::Engine(std::uint64_t master_seed) {
    m_streams.reserve(4);
    for (StreamLabel label :
         {StreamLabel::Mobility, StreamLabel::Traffic, StreamLabel::MacBackoff, StreamLabel::Topology}) {
        const auto name = stream_label_name(label);
        const std::uint64_t tag = fnv1a64(name.data(), name.size());
        std::uint64_t sm = master_seed ^ tag;
        // Burn the expander once so label tags with small hamming distance
        // still land far apart in state space.
        (void)splitmix64(sm);
        m_streams.emplace_back(splitmix64(sm));
    }
}

EventHandle Engine::schedule_at(SimTime t, EventKind kind, std::function<void()> fn) {
    if (t < m_clock) {
        throw std::logic_error("Engine::schedule_at: fire time " + std::to_string(t.ns()) +
                               "ns is before current clock " + std::to_string(m_clock.ns()) + "ns");
    }
    const std::uint64_t seq = m_next_seq++;
    m_heap.push_back(Entry{t, seq, kind, std::move(fn)});
    std::push_heap(m_heap.begin(), m_heap.end(), Later{});
    m_live.insert(seq);
    return seq;
}

EventHandle Engine::schedule_after(SimTime delay, EventKind kind, std::function<void()> fn) {
    return schedule_at(m_clock + delay, kind, std::move(fn));
}

void Engine::cancel(EventHandle h) {
    if (h == kNoEvent) {
        return;
    }
    // Tombstone pending entries only; cancelling a fired handle is a no-op.
    if (m_live.erase(h) != 0) {
        m_cancelled.insert(h);
    }
}

SimTime Engine::run_until(SimTime end) {
    if (end < m_clock) {
        throw std::logic_error("Engine::run_until: end time before current clock");
    }
    bool fired_any = false;
    while (!m_heap.empty()) {
        if (end < m_heap.front().at) {
            m_clock = end;
            return m_clock;
        }
        std::pop_heap(m_heap.begin(), m_heap.end(), Later{});
        Entry e = std::move(m_heap.back());
        m_heap.pop_back();
        if (auto it = m_cancelled.find(e.seq); it != m_cancelled.end()) {
            m_cancelled.erase(it);
            continue;
        }
        m_live.erase(e.seq);
        m_clock = e.at;
        fired_any = true;
        ++m_fired;
        m_trace_hash = fnv1a64_u64(static_cast<std::uint64_t>(e.at.ns()), m_trace_hash);
        m_trace_hash = fnv1a64_u64(e.seq, m_trace_hash);
        m_trace_hash = fnv1a64_u64(static_cast<std::uint64_t>(e.kind), m_trace_hash);
        e.fn();
    }
    // Queue drained: rest at the last event fired, or at end when the run was
    // empty from the start.
    if (!fired_any) {
        m_clock = end;
    }
    return m_clock;
}

RandomStream& Engine::stream(StreamLabel label) {
    const auto idx = static_cast<std::size_t>(label);
    if (idx >= m_streams.size()) {
        throw std::logic_error("Engine::stream: unknown stream label");
    }
    return m_streams[idx];
}

} // namespace manet
