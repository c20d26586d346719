#include "manet/phy/energy.hpp"
#include "manet/phy/radio.hpp"
#include "manet/sim/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace manet;

namespace {

// Independent oracle: evaluate the propagation law in linear watts, then
// convert. The implementation under test works in the dB domain throughout.
double friis_linear_dbm(double p_tx_dbm, double lambda_m, double d_m, double g_t, double g_r) {
    const double p_tx_w = dbm_to_watts(p_tx_dbm);
    const double ratio = lambda_m / (4.0 * std::numbers::pi * d_m);
    return watts_to_dbm(p_tx_w * ratio * ratio * g_t * g_r);
}

RadioParams params_with(double lambda_m, double g = 1.0) {
    RadioParams p;
    p.wavelength_m = lambda_m;
    p.tx_gain = g;
    p.rx_gain = g;
    return p;
}

} // namespace

TEST_CASE("dB-domain propagation matches the linear-domain oracle") {
    // Spot value first: 0.2818 W at 250 m, 0.328 m wavelength.
    RadioParams p = params_with(0.328);
    const double p_tx = watts_to_dbm(0.2818);
    const double got = received_power_dbm(p_tx, 250.0, p);
    CHECK(got == doctest::Approx(friis_linear_dbm(p_tx, 0.328, 250.0, 1, 1)).epsilon(1e-12));
    CHECK(got == doctest::Approx(-55.13).epsilon(1e-3)); // sanity against hand arithmetic

    RandomStream rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const double tx_dbm = rng.uniform(-10.0, 30.0);
        const double lambda = rng.uniform(0.05, 1.0);
        const double d = rng.uniform(0.5, 2000.0);
        RadioParams rp = params_with(lambda);
        const double db_path = received_power_dbm(tx_dbm, d, rp);
        const double linear_path = friis_linear_dbm(tx_dbm, lambda, d, 1, 1);
        CHECK(std::abs(db_path - linear_path) < 1e-9);
    }
}

TEST_CASE("doubling distance quarters the linear received power") {
    RadioParams p = params_with(0.328);
    const double p1 = dbm_to_watts(received_power_dbm(20.0, 100.0, p));
    const double p2 = dbm_to_watts(received_power_dbm(20.0, 200.0, p));
    CHECK(p1 / p2 == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("unit propagation factor returns the transmit power") {
    // d such that lambda / (4 pi d) == 1.
    const double lambda = 1.0;
    const double d = lambda / (4.0 * std::numbers::pi);
    RadioParams p = params_with(lambda);
    CHECK(received_power_dbm(17.5, d, p) == doctest::Approx(17.5).epsilon(1e-12));
}

TEST_CASE("zero distance is a contract violation") {
    RadioParams p = params_with(0.328);
    CHECK_THROWS_AS(received_power_dbm(10.0, 0.0, p), std::logic_error);
}

TEST_CASE("reception decision against the threshold") {
    RadioParams p = params_with(0.328);
    p.rx_threshold_dbm = -64.37;
    CHECK(can_receive(-55.13, p));
    CHECK(can_receive(-64.37, p)); // boundary is inclusive
    CHECK_FALSE(can_receive(-90.0, p));
}

TEST_CASE("reception is monotone nonincreasing in distance") {
    RadioParams p = params_with(0.328);
    p.rx_threshold_dbm = -60.0;
    bool receivable = true;
    for (double d = 1.0; d < 3000.0; d *= 1.3) {
        const bool now_ok = can_receive(received_power_dbm(20.0, d, p), p);
        if (!receivable) {
            CHECK_FALSE(now_ok);
        }
        receivable = now_ok;
    }
}

TEST_CASE("energy draws accumulate as power times interval") {
    EnergyParams ep; // 0.395 / 0.660 / 0.035 W, 4.7 J
    EnergyState e(ep, SimTime::zero());

    SUBCASE("idle for one second") {
        e.settle(SimTime::from_seconds(1.0));
        CHECK(e.consumed_j() == doctest::Approx(0.035).epsilon(1e-12));
    }
    SUBCASE("transmit at max radiated power for 0.1 s") {
        e.set_mode(RadioMode::Tx, ep.max_radiated_w, SimTime::zero());
        e.settle(SimTime::from_seconds(0.1));
        CHECK(e.consumed_j() == doctest::Approx(0.066).epsilon(1e-9));
    }
    SUBCASE("zero elapsed time consumes nothing") {
        e.set_mode(RadioMode::Rx, 0.0, SimTime::zero());
        e.set_mode(RadioMode::Idle, 0.0, SimTime::zero());
        CHECK(e.consumed_j() == 0.0);
    }
    SUBCASE("receive draw") {
        e.set_mode(RadioMode::Rx, 0.0, SimTime::zero());
        e.settle(SimTime::from_seconds(2.0));
        CHECK(e.consumed_j() == doctest::Approx(0.79).epsilon(1e-12));
    }
}

TEST_CASE("battery empties and the ledger freezes at death") {
    EnergyParams ep;
    ep.initial_j = 0.0350;
    EnergyState e(ep, SimTime::zero());
    e.settle(SimTime::from_seconds(2.0)); // needs 0.07 J, has 0.035
    CHECK(e.depleted());
    CHECK(e.residual_j() == 0.0);
    CHECK(e.consumed_j() == doctest::Approx(0.035).epsilon(1e-12));
    e.settle(SimTime::from_seconds(3.0));
    CHECK(e.consumed_j() == doctest::Approx(0.035).epsilon(1e-12));
}

TEST_CASE("tx draw interpolates between idle and max with radiated power") {
    EnergyParams ep;
    CHECK(ep.tx_draw_w(ep.max_radiated_w) == doctest::Approx(0.660).epsilon(1e-12));
    CHECK(ep.tx_draw_w(0.0) == doctest::Approx(0.035).epsilon(1e-12));
    const double half = ep.tx_draw_w(ep.max_radiated_w / 2.0);
    CHECK(half == doctest::Approx(0.5 * (0.660 + 0.035)).epsilon(1e-12));
}

TEST_CASE("energy ledger identity: initial minus residual equals interval sum") {
    EnergyParams ep;
    EnergyState e(ep, SimTime::zero());
    RandomStream rng(11);
    SimTime t = SimTime::zero();
    for (int i = 0; i < 500; ++i) {
        t += SimTime::from_seconds(rng.uniform(0.0, 0.01));
        const int mode = static_cast<int>(rng.uniform_u32(0, 2));
        if (mode == 0) {
            e.set_mode(RadioMode::Idle, 0.0, t);
        } else if (mode == 1) {
            e.set_mode(RadioMode::Rx, 0.0, t);
        } else {
            e.set_mode(RadioMode::Tx, rng.uniform(0.0, ep.max_radiated_w), t);
        }
    }
    e.settle(t + SimTime::from_seconds(1.0));
    const double consumed = ep.initial_j - e.residual_j();
    CHECK(consumed == doctest::Approx(e.consumed_j()).epsilon(1e-12));
    const double reconstructed = ep.draw_idle_w * e.t_idle_s() + ep.draw_rx_w * e.t_rx_s() + e.tx_energy_j();
    CHECK(std::abs(consumed - reconstructed) <= 1e-9 * std::max(1.0, consumed));
}
