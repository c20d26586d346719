#pragma once

#include <array>
#include <cstdint>

namespace manet {

// splitmix64: seed expander (Vigna). Used to derive independent stream states
// from one master seed so results do not depend on the platform's std engines.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ generator. One instance per named purpose; sequences are fully
// determined by the seed and never shared between purposes.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : m_state) {
            w = splitmix64(sm);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(m_state[0] + m_state[3], 23) + m_state[0];
        const std::uint64_t t = m_state[1] << 17;
        m_state[2] ^= m_state[0];
        m_state[3] ^= m_state[1];
        m_state[1] ^= m_state[2];
        m_state[0] ^= m_state[3];
        m_state[2] ^= t;
        m_state[3] = rotl(m_state[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    // Uniform integer in [lo, hi], inclusive. Unbiased (Lemire).
    std::uint32_t uniform_u32(std::uint32_t lo, std::uint32_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi) - lo + 1;
        while (true) {
            const std::uint64_t x = next_u64();
            const unsigned __int128 m = static_cast<unsigned __int128>(x) * range;
            const std::uint64_t l = static_cast<std::uint64_t>(m);
            if (l >= range) {
                return lo + static_cast<std::uint32_t>(m >> 64);
            }
            // Reject the biased low slice.
            if (l >= static_cast<std::uint64_t>(-static_cast<std::int64_t>(range)) % range) {
                return lo + static_cast<std::uint32_t>(m >> 64);
            }
        }
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> m_state{};
};

// FNV-1a over bytes; used for trace hashing and derived seeds.
inline std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t hash = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= p[i];
        hash *= 0x00000100000001b3ULL;
    }
    return hash;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t v, std::uint64_t hash = 0xcbf29ce484222325ULL) {
    return fnv1a64(&v, sizeof(v), hash);
}

} // namespace manet
