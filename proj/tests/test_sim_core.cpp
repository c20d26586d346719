#include "manet/sim/engine.hpp"

#include <doctest.h>

#include <stdexcept>
#include <vector>

using namespace manet;

TEST_CASE("events pop in fire-time order") {
    Engine eng(1);
    std::vector<int> order;
    eng.schedule_at(SimTime::from_seconds(5.0), EventKind::TimerExpiry, [&] { order.push_back(5); });
    eng.schedule_at(SimTime::from_seconds(3.0), EventKind::TimerExpiry, [&] { order.push_back(3); });
    eng.run_until(SimTime::from_seconds(10.0));
    CHECK(order == std::vector<int>{3, 5});
}

TEST_CASE("equal fire times break ties by scheduling order") {
    Engine eng(1);
    std::vector<char> order;
    eng.schedule_at(SimTime::from_seconds(3.0), EventKind::TimerExpiry, [&] { order.push_back('A'); });
    eng.schedule_at(SimTime::from_seconds(3.0), EventKind::TimerExpiry, [&] { order.push_back('B'); });
    eng.run_until(SimTime::from_seconds(10.0));
    CHECK(order == std::vector<char>{'A', 'B'});
}

TEST_CASE("an event at the current clock fires before later events") {
    Engine eng(1);
    std::vector<int> order;
    eng.schedule_at(SimTime::from_seconds(1.0), EventKind::TimerExpiry, [&] {
        // Scheduling at t == clock is legal and fires next.
        eng.schedule_at(eng.now(), EventKind::TimerExpiry, [&] { order.push_back(1); });
    });
    eng.schedule_at(SimTime::from_seconds(2.0), EventKind::TimerExpiry, [&] { order.push_back(2); });
    eng.run_until(SimTime::from_seconds(10.0));
    CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("scheduling in the past throws") {
    Engine eng(1);
    eng.schedule_at(SimTime::from_seconds(1.0), EventKind::TimerExpiry, [] {});
    eng.run_until(SimTime::from_seconds(2.0));
    CHECK_THROWS_AS(eng.schedule_at(SimTime::from_seconds(0.5), EventKind::TimerExpiry, [] {}), std::logic_error);
}

TEST_CASE("run_until on an empty queue advances the clock to the end") {
    Engine eng(1);
    const SimTime final_clock = eng.run_until(SimTime::from_seconds(100.0));
    CHECK(final_clock.seconds() == doctest::Approx(100.0));
    CHECK(eng.events_fired() == 0);
}

TEST_CASE("run_until fires only events at or before the end time") {
    Engine eng(1);
    int fired = 0;
    for (double t : {1.0, 2.0, 3.0}) {
        eng.schedule_at(SimTime::from_seconds(t), EventKind::TimerExpiry, [&] { ++fired; });
    }
    eng.run_until(SimTime::from_seconds(2.5));
    CHECK(fired == 2);
    CHECK(eng.now().seconds() == doctest::Approx(2.5));
}

TEST_CASE("cancelled events never fire") {
    Engine eng(1);
    bool fired = false;
    const EventHandle h = eng.schedule_at(SimTime::from_seconds(1.0), EventKind::TimerExpiry, [&] { fired = true; });
    eng.cancel(h);
    eng.run_until(SimTime::from_seconds(5.0));
    CHECK_FALSE(fired);
    CHECK(eng.events_fired() == 0);
}

TEST_CASE("identical seeds replay identical traces") {
    auto run_once = [](std::uint64_t seed) {
        Engine eng(seed);
        // A little self-perpetuating workload with randomized gaps.
        std::function<void()> tick = [&] {
            const double gap = eng.stream(StreamLabel::Traffic).uniform(0.001, 0.1);
            if (eng.now() < SimTime::from_seconds(5.0)) {
                eng.schedule_after(SimTime::from_seconds(gap), EventKind::TrafficSend, tick);
            }
        };
        eng.schedule_at(SimTime::zero(), EventKind::TrafficSend, tick);
        eng.run_until(SimTime::from_seconds(10.0));
        return std::pair{eng.trace_hash(), eng.events_fired()};
    };
    const auto a = run_once(42);
    const auto b = run_once(42);
    const auto c = run_once(43);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("uniform samples lie in [0,1)") {
    Engine eng(7);
    auto& s = eng.stream(StreamLabel::Mobility);
    for (int i = 0; i < 10000; ++i) {
        const double x = s.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("same seed and label give the same first 1000 samples") {
    Engine a(99);
    Engine b(99);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.stream(StreamLabel::MacBackoff).next_u64() == b.stream(StreamLabel::MacBackoff).next_u64());
    }
}

TEST_CASE("draws on one stream do not perturb another") {
    Engine interleaved(5);
    Engine isolated(5);
    std::vector<std::uint64_t> mixed;
    for (int i = 0; i < 100; ++i) {
        (void)interleaved.stream(StreamLabel::Traffic).next_u64(); // noise on another label
        mixed.push_back(interleaved.stream(StreamLabel::Mobility).next_u64());
    }
    for (int i = 0; i < 100; ++i) {
        CHECK(mixed[static_cast<std::size_t>(i)] == isolated.stream(StreamLabel::Mobility).next_u64());
    }
}

TEST_CASE("uniform_u32 is inclusive of both bounds") {
    Engine eng(3);
    auto& s = eng.stream(StreamLabel::MacBackoff);
    bool saw_lo = false;
    bool saw_hi = false;
    for (int i = 0; i < 5000; ++i) {
        const auto v = s.uniform_u32(0, 7);
        CHECK(v <= 7);
        saw_lo = saw_lo || v == 0;
        saw_hi = saw_hi || v == 7;
    }
    CHECK(saw_lo);
    CHECK(saw_hi);
}

TEST_CASE("cancelling a fired handle is a no-op and pending stays consistent") {
    Engine eng(1);
    int fired = 0;
    const EventHandle h = eng.schedule_at(SimTime::from_seconds(1.0), EventKind::TimerExpiry, [&] { ++fired; });
    eng.schedule_at(SimTime::from_seconds(2.0), EventKind::TimerExpiry, [&] { ++fired; });
    CHECK(eng.pending() == 2);
    eng.run_until(SimTime::from_seconds(1.5));
    CHECK(eng.pending() == 1);
    eng.cancel(h); // already fired
    eng.run_until(SimTime::from_seconds(3.0));
    CHECK(fired == 2);
    CHECK(eng.pending() == 0);
}
