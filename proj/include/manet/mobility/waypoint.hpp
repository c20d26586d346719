#pragma once

#include "manet/sim/engine.hpp"
#include "manet/sim/vec2.hpp"

#include <stdexcept>

namespace manet {

// Random waypoint: straight legs at fixed speed to uniform points in the
// area, pausing at each waypoint. speed == 0 keeps the node static.
class WaypointMobility {
  public:
    WaypointMobility(Engine& engine, Vec2 area, double speed_mps, double pause_s, Vec2 initial)
        : m_engine(&engine), m_area(area), m_speed(speed_mps), m_pause_s(pause_s), m_leg_start(initial),
          m_target(initial) {
        check_bounds(initial);
    }

    void start() {
        if (m_speed <= 0.0) {
            return;
        }
        begin_leg();
    }

    void stop() {
        if (m_timer != kNoEvent) {
            m_engine->cancel(m_timer);
            m_timer = kNoEvent;
        }
        // Freeze in place.
        m_leg_start = position(m_engine->now());
        m_target = m_leg_start;
        m_leg_start_time = m_engine->now();
        m_arrival = m_engine->now();
    }

    Vec2 position(SimTime t) const {
        if (m_arrival <= t || m_arrival == m_leg_start_time) {
            return m_target; // paused at the waypoint (or static)
        }
        const double total = (m_arrival - m_leg_start_time).seconds();
        const double frac = (t - m_leg_start_time).seconds() / total;
        Vec2 p{m_leg_start.x + (m_target.x - m_leg_start.x) * frac,
               m_leg_start.y + (m_target.y - m_leg_start.y) * frac};
        check_bounds(p);
        return p;
    }

    Vec2 current_target() const { return m_target; }
    SimTime arrival_time() const { return m_arrival; }

  private:
    void begin_leg() {
        auto& rng = m_engine->stream(StreamLabel::Mobility);
        m_leg_start = m_target;
        m_leg_start_time = m_engine->now();
        m_target = Vec2{rng.uniform(0.0, m_area.x), rng.uniform(0.0, m_area.y)};
        check_bounds(m_target);
        const double travel_s = distance(m_leg_start, m_target) / m_speed;
        m_arrival = m_engine->now() + SimTime::from_seconds(travel_s);
        m_timer = m_engine->schedule_at(m_arrival, EventKind::WaypointReached, [this] { waypoint_reached(); });
    }

    void waypoint_reached() {
        m_timer = kNoEvent;
        m_leg_start = m_target;
        m_leg_start_time = m_engine->now();
        m_arrival = m_engine->now();
        if (m_pause_s > 0.0) {
            m_timer = m_engine->schedule_after(SimTime::from_seconds(m_pause_s), EventKind::WaypointReached, [this] {
                m_timer = kNoEvent;
                begin_leg();
            });
        } else {
            begin_leg();
        }
    }

    void check_bounds(const Vec2& p) const {
        if (p.x < 0.0 || p.x > m_area.x || p.y < 0.0 || p.y > m_area.y) {
            throw std::logic_error("WaypointMobility: position left the configured area");
        }
    }

    Engine* m_engine;
    Vec2 m_area;
    double m_speed;
    double m_pause_s;
    Vec2 m_leg_start;
    Vec2 m_target;
    SimTime m_leg_start_time;
    SimTime m_arrival;
    EventHandle m_timer = kNoEvent;
};

} // namespace manet
