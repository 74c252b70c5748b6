#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "tlisim/cm_analysis.hpp"

using namespace tlisim;
using doctest::Approx;

namespace {

// Independent oracle: evaluate the series loop impedance from scratch
// with std::complex, without going through CmEquivalentCircuit helpers.
double loop_impedance_magnitude(double l_a, double l_b, double c, double f) {
    const double w = 2.0 * std::numbers::pi * f;
    const std::complex<double> jw{0.0, w};
    const std::complex<double> z_la = jw * l_a;
    const std::complex<double> z_lb = jw * l_b;
    const std::complex<double> z_par = z_la * z_lb / (z_la + z_lb);
    return std::abs(z_par + 1.0 / (jw * c));
}

}  // namespace

TEST_CASE("pole voltage decomposition") {
    CHECK(decompose({400.0, 0.0}) == CmDm{200.0, 400.0});
    CHECK(decompose({200.0, 200.0}) == CmDm{200.0, 0.0});
    CHECK(decompose({0.0, 0.0}) == CmDm{0.0, 0.0});
}

TEST_CASE("recomposition inverts the decomposition") {
    CHECK(recompose({200.0, 400.0}) == PoleVoltages{400.0, 0.0});
    CHECK(recompose({200.0, 0.0}) == PoleVoltages{200.0, 200.0});
    for (double x : {-37.5, 0.0, 123.25}) {
        CHECK(recompose({x, 0.0}) == PoleVoltages{x, x});
    }
}

TEST_CASE("decompose/recompose is a bijection over random pole pairs") {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> volts(-800.0, 800.0);
    for (int i = 0; i < 10000; ++i) {
        const PoleVoltages p{volts(rng), volts(rng)};
        const PoleVoltages back = recompose(decompose(p));
        CHECK(back.v_an == Approx(p.v_an).epsilon(1e-12));
        CHECK(back.v_bn == Approx(p.v_bn).epsilon(1e-12));
    }
}

TEST_CASE("total CMV with matched inductors is the plain CMV") {
    const CmEquivalentCircuit ckt{4.06e-3, 4.06e-3, 24e-9, 50.0};
    for (double v_dm : {-400.0, 0.0, 400.0}) {
        CHECK(total_cmv({200.0, v_dm}, ckt) == 200.0);
    }
}

TEST_CASE("total CMV limits and mismatch value") {
    // Neutral inductor removed: the total collapses onto pole B.
    CHECK(total_cmv({200.0, 400.0}, {4.06e-3, 0.0, 24e-9, 50.0}) == Approx(0.0));

    // 10% inductor mismatch, frozen from an independent evaluation.
    const double v =
        total_cmv({200.0, 400.0}, {4.06e-3, 4.467e-3, 24e-9, 50.0});
    CHECK(v == Approx(209.54614753137093).epsilon(1e-12));

    CHECK_THROWS_AS(total_cmv({200.0, 400.0}, {0.0, 0.0, 24e-9, 50.0}),
                    std::invalid_argument);
}

TEST_CASE("total CMV is invariant under swapping inductors and negating DMV") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> volts(-500.0, 500.0);
    std::uniform_real_distribution<double> henries(1e-4, 1e-2);
    for (int i = 0; i < 10000; ++i) {
        const CmDm cd{volts(rng), volts(rng)};
        const double l_a = henries(rng);
        const double l_b = henries(rng);
        const double lhs = total_cmv(cd, {l_a, l_b, 24e-9, 50.0});
        const double rhs =
            total_cmv({cd.v_cm, -cd.v_dm}, {l_b, l_a, 24e-9, 50.0});
        CHECK(lhs == Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("phasor leakage estimate against a complex-impedance oracle") {
    const CmEquivalentCircuit ckt{4.06e-3, 4.06e-3, 24e-9, 50.0};

    CHECK(leakage_phasor(0.0, ckt).amps == 0.0);
    CHECK_FALSE(leakage_phasor(0.0, ckt).resonant);

    const LeakageEstimate at_50hz = leakage_phasor(200.0, ckt);
    REQUIRE_FALSE(at_50hz.resonant);
    CHECK(at_50hz.amps ==
          Approx(200.0 / loop_impedance_magnitude(4.06e-3, 4.06e-3, 24e-9, 50.0))
              .epsilon(1e-12));
    // Frozen value: ~1.508 mA for 200 V of 50 Hz common-mode excitation.
    CHECK(at_50hz.amps == Approx(1.5079717247618067e-3).epsilon(1e-9));
}

TEST_CASE("leakage estimate flags the resonance") {
    CmEquivalentCircuit ckt{4.06e-3, 4.06e-3, 24e-9, 50.0};
    ckt.frequency = resonant_frequency(ckt);
    CHECK(leakage_phasor(200.0, ckt).resonant);
}

TEST_CASE("leakage estimate is homogeneous in the source voltage") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> volts(0.0, 400.0);
    std::uniform_real_distribution<double> scale(0.0, 10.0);
    std::uniform_real_distribution<double> freq(1.0, 1e5);
    for (int i = 0; i < 10000; ++i) {
        const CmEquivalentCircuit ckt{4.06e-3, 4.06e-3, 24e-9, freq(rng)};
        const double v = volts(rng);
        const double a = scale(rng);
        const LeakageEstimate base = leakage_phasor(v, ckt);
        const LeakageEstimate scaled = leakage_phasor(a * v, ckt);
        REQUIRE(base.resonant == scaled.resonant);
        if (!base.resonant) {
            CHECK(scaled.amps == Approx(a * base.amps).epsilon(1e-12));
        }
    }
}

TEST_CASE("resonant frequency of the bench values") {
    const CmEquivalentCircuit ckt{4.06e-3, 4.06e-3, 24e-9, 50.0};
    const double f = resonant_frequency(ckt);
    // Independent route: f = sqrt((l_a + l_b) / (l_a * l_b * c)) / (2 pi).
    const double independent =
        std::sqrt((4.06e-3 + 4.06e-3) / (4.06e-3 * 4.06e-3 * 24e-9)) /
        (2.0 * std::numbers::pi);
    CHECK(f == Approx(independent).epsilon(1e-12));
    CHECK(f == Approx(22801.6613805).epsilon(1e-10));  // ~22.8 kHz
}

TEST_CASE("resonant frequency power laws") {
    const CmEquivalentCircuit base{4.06e-3, 4.06e-3, 24e-9, 50.0};
    const double f0 = resonant_frequency(base);
    // Scaling L_eq by 4 halves the frequency.
    const CmEquivalentCircuit scaled{4.0 * 4.06e-3, 4.0 * 4.06e-3, 24e-9, 50.0};
    CHECK(resonant_frequency(scaled) == Approx(0.5 * f0).epsilon(1e-12));
    // l_b -> infinity leaves the single-inductor loop.
    const CmEquivalentCircuit huge_lb{4.06e-3, 4.06e6, 24e-9, 50.0};
    const double single =
        std::sqrt(1.0 / (4.06e-3 * 24e-9)) / (2.0 * std::numbers::pi);
    CHECK(resonant_frequency(huge_lb) == Approx(single).epsilon(1e-6));
}

TEST_CASE("resonant frequency rejects non-positive elements") {
    CHECK_THROWS_AS(resonant_frequency({0.0, 4.06e-3, 24e-9, 50.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(resonant_frequency({4.06e-3, 4.06e-3, 0.0, 50.0}),
                    std::invalid_argument);
}

TEST_CASE("constant total CMV implies zero leakage at any frequency") {
    // A constant waveform has no AC component; its leakage estimate is
    // zero at every analysis frequency.
    for (double f : {50.0, 1e3, 22.8e3, 1e5}) {
        const CmEquivalentCircuit ckt{4.06e-3, 4.06e-3, 24e-9, f};
        const double v_ac = 0.0;  // AC component of a constant V_tCM
        const LeakageEstimate est = leakage_phasor(v_ac, ckt);
        if (!est.resonant) CHECK(est.amps == 0.0);
    }
}
