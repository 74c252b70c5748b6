#include "tlisim/cm_analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tlisim {

namespace {
constexpr double kResonanceToleranceOhm = 1e-9;
}

CmDm decompose(const PoleVoltages& poles) {
    return {.v_cm = 0.5 * (poles.v_an + poles.v_bn),
            .v_dm = poles.v_an - poles.v_bn};
}

PoleVoltages recompose(const CmDm& cd) {
    return {.v_an = cd.v_cm + 0.5 * cd.v_dm,
            .v_bn = cd.v_cm - 0.5 * cd.v_dm};
}

double total_cmv(const CmDm& cd, const CmEquivalentCircuit& ckt) {
    const double l_sum = ckt.l_a + ckt.l_b;
    if (!(l_sum > 0.0)) {
        throw std::invalid_argument("total_cmv: l_a + l_b must be positive");
    }
    return cd.v_cm + 0.5 * cd.v_dm * (ckt.l_b - ckt.l_a) / l_sum;
}

std::complex<double> cm_loop_impedance(const CmEquivalentCircuit& ckt) {
    if (!(ckt.frequency > 0.0)) {
        throw std::invalid_argument(
            "cm_loop_impedance: frequency must be positive");
    }
    if (!(ckt.l_a > 0.0) || ckt.l_b < 0.0 || !(ckt.c_pv > 0.0)) {
        throw std::invalid_argument(
            "cm_loop_impedance: element values out of range");
    }
    const double w = 2.0 * std::numbers::pi * ckt.frequency;
    const std::complex<double> z_l{0.0, w * ckt.l_parallel()};
    const std::complex<double> z_c = 1.0 / std::complex<double>{0.0, w * ckt.c_pv};
    return z_l + z_c;
}

LeakageEstimate leakage_phasor(double v_tcm, const CmEquivalentCircuit& ckt) {
    const double z_mag = std::abs(cm_loop_impedance(ckt));
    if (z_mag < kResonanceToleranceOhm) {
        return {.resonant = true, .amps = 0.0};
    }
    return {.resonant = false, .amps = std::abs(v_tcm) / z_mag};
}

double resonant_frequency(const CmEquivalentCircuit& ckt) {
    if (!(ckt.l_a > 0.0) || !(ckt.l_b > 0.0) || !(ckt.c_pv > 0.0)) {
        throw std::invalid_argument(
            "resonant_frequency: element values must be positive");
    }
    const double l_eq = ckt.l_parallel();
    return std::sqrt(1.0 / (l_eq * ckt.c_pv)) / (2.0 * std::numbers::pi);
}

}  // namespace tlisim
