#pragma once

#include <complex>

#include "tlisim/topology.hpp"

namespace tlisim {

/// Common-mode / differential-mode decomposition of a pole-voltage pair.
/// v_cm = (v_an + v_bn) / 2, v_dm = v_an - v_bn; the mapping is a
/// bijection with PoleVoltages.
struct CmDm {
    double v_cm = 0.0;
    double v_dm = 0.0;

    friend constexpr bool operator==(const CmDm&, const CmDm&) = default;
};

CmDm decompose(const PoleVoltages& poles);
PoleVoltages recompose(const CmDm& cd);

/// Element values of the single-source common-mode equivalent circuit:
/// the two filter inductors, the parasitic capacitance to ground, and the
/// analysis frequency at which reactances are evaluated.
struct CmEquivalentCircuit {
    double l_a = 0.0;       // phase-side filter inductance [H], > 0
    double l_b = 0.0;       // neutral-side filter inductance [H], >= 0
    double c_pv = 0.0;      // parasitic capacitance [F], > 0
    double frequency = 0.0; // analysis frequency [Hz], > 0

    [[nodiscard]] double l_parallel() const {
        return l_a * l_b / (l_a + l_b);
    }
};

/// Total common-mode voltage including the differential-mode contribution
/// introduced by inductor asymmetry:
///   v_cm + (v_dm / 2) * (l_b - l_a) / (l_b + l_a).
/// Rejects l_a + l_b <= 0.
double total_cmv(const CmDm& cd, const CmEquivalentCircuit& ckt);

/// Phasor leakage-current estimate. At (or numerically indistinguishable
/// from) the loop's resonant frequency the magnitude is unbounded and the
/// result carries the resonant marker instead of a number.
struct LeakageEstimate {
    bool resonant = false;
    double amps = 0.0;  // valid only when !resonant
};

/// Series impedance of the common-mode loop at the circuit's analysis
/// frequency: j*w*(l_a || l_b) + 1/(j*w*c_pv).
std::complex<double> cm_loop_impedance(const CmEquivalentCircuit& ckt);

/// |I_cm| = |v_tcm| / |Z_loop|, with the resonant marker when |Z_loop|
/// falls below the resonance tolerance (1e-9 ohm).
LeakageEstimate leakage_phasor(double v_tcm, const CmEquivalentCircuit& ckt);

/// Natural frequency of the common-mode loop,
/// (1 / 2*pi) * sqrt(1 / (L_eq * C_pv)) with L_eq = l_a || l_b.
/// Requires l_a, l_b, c_pv > 0.
double resonant_frequency(const CmEquivalentCircuit& ckt);

}  // namespace tlisim
