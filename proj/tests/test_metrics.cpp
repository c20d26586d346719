#include "manet/metrics/collector.hpp"
#include "manet/metrics/csv.hpp"

#include <doctest.h>

#include <sstream>

using namespace manet;

namespace {

MetricsReport finalize_simple(MetricsCollector& m, double horizon_s = 10.0) {
    EnergyParams ep;
    EnergyState e(ep, SimTime::zero());
    e.settle(SimTime::from_seconds(horizon_s));
    return m.finalize({&e}, {}, horizon_s);
}

} // namespace

TEST_CASE("ratios derive from the raw counters") {
    MetricsCollector m(10.0);
    for (int i = 0; i < 200; ++i) {
        const auto uid = m.register_sent(0);
        if (i < 180) {
            m.on_delivered(uid, 0.2, 4096);
        } else {
            m.on_dropped(uid, DropCause::MacRetries);
        }
    }
    for (int i = 0; i < 50; ++i) {
        m.on_control_packet();
    }
    const MetricsReport r = finalize_simple(m);
    CHECK(r.pdr == doctest::Approx(0.9));
    CHECK(r.control_overhead == doctest::Approx(50.0 / 180.0));
    CHECK(r.throughput_pkts == 180);
    CHECK(r.in_flight == 0);
    CHECK(r.dropped == 20);
}

TEST_CASE("average delay is the mean over delivered packets") {
    MetricsCollector m(10.0);
    const auto a = m.register_sent(0);
    const auto b = m.register_sent(0);
    m.on_delivered(a, 0.1, 1000);
    m.on_delivered(b, 0.3, 1000);
    const MetricsReport r = finalize_simple(m);
    CHECK(r.avg_delay_s == doctest::Approx(0.2));
}

TEST_CASE("zero sent packets reports pdr 0 with a flag") {
    MetricsCollector m(10.0);
    const MetricsReport r = finalize_simple(m);
    CHECK(r.pdr == 0.0);
    CHECK_FALSE(r.pdr_defined);
    CHECK_FALSE(r.overhead_defined);
    CHECK(r.flags().find("pdr_undefined") != std::string::npos);
}

TEST_CASE("average energy over nodes") {
    MetricsCollector m(4.0);
    EnergyParams ep;
    EnergyState e1(ep, SimTime::zero());
    EnergyState e2(ep, SimTime::zero());
    e1.set_mode(RadioMode::Rx, 0.0, SimTime::zero()); // 0.395 W
    e1.settle(SimTime::from_seconds(4.0));
    e2.settle(SimTime::from_seconds(4.0)); // idle, 0.035 W
    const MetricsReport r = m.finalize({&e1, &e2}, {}, 4.0);
    CHECK(r.avg_energy_j == doctest::Approx((0.395 * 4 + 0.035 * 4) / 2.0).epsilon(1e-9));
}

TEST_CASE("conservation failure aborts finalize") {
    MetricsCollector m(10.0);
    (void)m.register_sent(0); // never delivered, never dropped, not in inventory
    EnergyParams ep;
    EnergyState e(ep, SimTime::zero());
    e.settle(SimTime::from_seconds(10.0));
    CHECK_THROWS_AS((void)m.finalize({&e}, {}, 10.0), ConservationError);
}

TEST_CASE("in-flight packets need an inventory entry") {
    MetricsCollector m(10.0);
    const auto uid = m.register_sent(0);
    EnergyParams ep;
    EnergyState e(ep, SimTime::zero());
    e.settle(SimTime::from_seconds(10.0));
    const MetricsReport r = m.finalize({&e}, {uid}, 10.0);
    CHECK(r.in_flight == 1);
}

TEST_CASE("a packet gets exactly one terminal fate") {
    MetricsCollector m(10.0);
    const auto uid = m.register_sent(0);
    m.on_dropped(uid, DropCause::MacRetries);
    m.on_delivered(uid, 0.5, 1000); // late ghost: the fate is sealed
    const MetricsReport r = finalize_simple(m);
    CHECK(r.delivered == 0);
    CHECK(r.dropped == 1);
    CHECK(r.ghost_events == 1);
}

TEST_CASE("run rows render deterministically") {
    MetricsCollector m(10.0);
    for (int i = 0; i < 3; ++i) {
        m.on_delivered(m.register_sent(0), 0.125, 4096);
    }
    m.on_control_packet();
    RunRow row;
    row.scenario_id = "t";
    row.protocol = "mcba";
    row.seed = 42;
    row.nodes = 5;
    row.pause_s = 10;
    row.report = finalize_simple(m);

    std::ostringstream a;
    std::ostringstream b;
    write_runs_csv(a, {row});
    write_runs_csv(b, {row});
    CHECK(a.str() == b.str());
    CHECK(a.str().find("t,mcba,42,5,10,3,3,0,1,1,") != std::string::npos);
}

TEST_CASE("empty report set writes a header-only file") {
    std::ostringstream out;
    write_runs_csv(out, {});
    const std::string s = out.str();
    CHECK(s.find("scenario_id,protocol,seed") == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 1);
}

TEST_CASE("undefined overhead renders as an empty cell") {
    MetricsCollector m(10.0);
    const auto uid = m.register_sent(0);
    m.on_dropped(uid, DropCause::NoRoute);
    RunRow row;
    row.scenario_id = "x";
    row.protocol = "aodv-baseline";
    row.report = finalize_simple(m);
    std::ostringstream out;
    write_runs_csv(out, {row});
    // Find the data row and its control_overhead column.
    const std::string s = out.str();
    const auto line_start = s.find('\n') + 1;
    const auto fields = split_csv_line(s.substr(line_start, s.find('\n', line_start) - line_start));
    REQUIRE(fields.size() >= 19);
    CHECK(fields[13].empty());                                      // control_overhead
    CHECK(fields[18].find("overhead_undefined") != std::string::npos); // flags
}

TEST_CASE("parsing an emitted row recovers the formatted values") {
    MetricsCollector m(7.0);
    for (int i = 0; i < 10; ++i) {
        m.on_delivered(m.register_sent(0), 0.001 * (i + 1), 4096);
    }
    RunRow row;
    row.scenario_id = "rt";
    row.protocol = "mcba";
    row.seed = 9;
    row.nodes = 3;
    row.pause_s = 0;
    row.report = finalize_simple(m, 7.0);
    std::ostringstream out;
    write_runs_csv(out, {row});
    const std::string s = out.str();
    const auto header_end = s.find('\n');
    const auto header = split_csv_line(s.substr(0, header_end));
    const auto fields = split_csv_line(s.substr(header_end + 1, s.find('\n', header_end + 1) - header_end - 1));
    REQUIRE(header.size() == fields.size());
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "pdr") {
            CHECK(fields[i] == format_g9(row.report.pdr));
        }
        if (header[i] == "avg_delay_s") {
            CHECK(fields[i] == format_g9(row.report.avg_delay_s));
        }
        if (header[i] == "sent") {
            CHECK(fields[i] == std::to_string(row.report.sent));
        }
    }
}

TEST_CASE("median aggregates") {
    CHECK(median({0.8, 0.9, 1.0}) == doctest::Approx(0.9));
    CHECK(median({0.8, 1.0}) == doctest::Approx(0.9));
    CHECK(median({3.0}) == doctest::Approx(3.0));
}
