#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace manet {

// Simulation time as a signed 64-bit nanosecond count. All event ordering is
// integer-exact; seconds appear only at API boundaries.
class SimTime {
  public:
    constexpr SimTime() = default;

    static constexpr SimTime from_ns(std::int64_t ns) { return SimTime(ns); }

    static SimTime from_seconds(double s) { return SimTime(static_cast<std::int64_t>(std::llround(s * 1e9))); }

    static SimTime from_us(double us) { return SimTime(static_cast<std::int64_t>(std::llround(us * 1e3))); }

    constexpr std::int64_t ns() const { return m_ns; }
    constexpr double seconds() const { return static_cast<double>(m_ns) * 1e-9; }

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime operator+(SimTime o) const { return SimTime(m_ns + o.m_ns); }
    constexpr SimTime operator-(SimTime o) const { return SimTime(m_ns - o.m_ns); }
    constexpr SimTime& operator+=(SimTime o) {
        m_ns += o.m_ns;
        return *this;
    }

    static constexpr SimTime zero() { return SimTime(0); }
    static constexpr SimTime max() { return SimTime(INT64_MAX); }

  private:
    constexpr explicit SimTime(std::int64_t ns) : m_ns(ns) {}

    std::int64_t m_ns = 0;
};

} // namespace manet
