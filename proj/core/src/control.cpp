#include "tlisim/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tlisim {

double PvPanel::current(double v) const {
    if (v <= 0.0) return i_sc;
    if (v >= v_oc) return 0.0;
    return i_sc * (1.0 - std::pow(v / v_oc, exponent));
}

double PvPanel::power(double v) const { return v * current(v); }

double PvPanel::mpp_voltage() const {
    return v_oc * std::pow(exponent + 1.0, -1.0 / exponent);
}

PvPanel PvPanel::for_rated_power(double p_mpp, double v_oc, double exponent) {
    if (!(p_mpp > 0.0) || !(v_oc > 0.0) || !(exponent > 1.0)) {
        throw std::invalid_argument("PvPanel: bad rating parameters");
    }
    PvPanel panel{.v_oc = v_oc, .i_sc = 1.0, .exponent = exponent};
    const double p_unit = panel.power(panel.mpp_voltage());
    panel.i_sc = p_mpp / p_unit;
    return panel;
}

MpptState mppt_step(const MpptState& s, double v_pv, double i_pv,
                    double v_oc_limit) {
    MpptState next = s;
    const double power = v_pv * i_pv;
    const double dp = power - s.last_power;
    const double dv = v_pv - s.last_voltage;
    if (dv != 0.0) {
        // Climb: move the way that gained power, back off otherwise.
        next.increasing = (dp >= 0.0) == (dv > 0.0);
    }
    next.v_pv_ref = s.v_pv_ref + (next.increasing ? s.step_size : -s.step_size);
    next.v_pv_ref = std::clamp(next.v_pv_ref, 0.0, v_oc_limit);
    next.last_power = power;
    next.last_voltage = v_pv;
    return next;
}

VdcLoopState vdc_loop_step(const VdcLoopState& s, double v_dc, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("vdc_loop_step: dt must be positive");
    }
    VdcLoopState next = s;
    const double error = v_dc - s.v_ref;
    next.integral = std::clamp(s.integral + s.ki * error * dt,
                               -s.windup_limit, s.windup_limit);
    next.id_ref = std::max(0.0, s.kp * error + next.integral);
    return next;
}

double reference_current(double id_ref, double grid_phase) {
    return id_ref * std::sin(grid_phase);
}

HbccDecision hbcc_step(const HbccState& s, double i_inv, double i_ref) {
    if (!(s.band_width > 0.0)) {
        throw std::invalid_argument("hbcc_step: band_width must be positive");
    }
    HbccDecision decision{.state = s, .drive_up = s.drive_up};
    if (i_inv >= i_ref + s.band_width) {
        decision.drive_up = false;
    } else if (i_inv <= i_ref - s.band_width) {
        decision.drive_up = true;
    }
    decision.state.drive_up = decision.drive_up;
    return decision;
}

}  // namespace tlisim
