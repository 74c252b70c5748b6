#pragma once

namespace tlisim {

/// Static PV panel I-V model, i = i_sc * (1 - (v / v_oc)^m). The exponent
/// shapes the knee; for_rated_power() sizes i_sc so the maximum power
/// point delivers exactly p_mpp.
struct PvPanel {
    double v_oc = 380.0;
    double i_sc = 8.57;
    double exponent = 8.0;

    [[nodiscard]] double current(double v) const;
    [[nodiscard]] double power(double v) const;
    /// Analytic MPP voltage, v_oc * (m + 1)^(-1/m).
    [[nodiscard]] double mpp_voltage() const;

    static PvPanel for_rated_power(double p_mpp, double v_oc, double exponent);
};

/// Perturb-and-observe state. step_size is the perturbation applied to
/// v_pv_ref each decision.
struct MpptState {
    double v_pv_ref = 0.0;
    double last_power = 0.0;
    double last_voltage = 0.0;
    double step_size = 2.0;
    bool increasing = true;  // current perturb direction
};

/// One P&O decision: keep the perturb direction while power rises,
/// reverse it when power falls. v_pv_ref is clamped to [0, v_oc_limit].
MpptState mppt_step(const MpptState& s, double v_pv, double i_pv,
                    double v_oc_limit);

/// Outer DC-link voltage regulator state (PI with anti-windup).
struct VdcLoopState {
    double v_ref = 400.0;
    double kp = 0.05;
    double ki = 5.0;
    double windup_limit = 20.0;  // clamp on the integral term [A]
    double integral = 0.0;       // accumulated ki * error * dt [A]
    double id_ref = 0.0;         // active current reference [A], >= 0
};

/// PI update: excess DC-link voltage raises the exported current.
VdcLoopState vdc_loop_step(const VdcLoopState& s, double v_dc, double dt);

/// Stationary-frame current reference from the rotating-frame magnitude:
/// i_alpha = id_ref * sin(grid_phase), with the reactive component fixed
/// at zero (unity power factor).
double reference_current(double id_ref, double grid_phase);

/// Hysteresis band comparator with latch. drive_up commands raising the
/// inverter current; the caller maps it onto the half-cycle's
/// active/freewheel mode.
struct HbccState {
    double band_width = 0.4;  // half-band h [A]
    bool drive_up = true;     // latched command
};

struct HbccDecision {
    HbccState state;
    bool drive_up = false;
};

HbccDecision hbcc_step(const HbccState& s, double i_inv, double i_ref);

}  // namespace tlisim
