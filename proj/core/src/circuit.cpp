#include "tlisim/circuit.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

namespace tlisim {

double GridSource::angle(double t) const {
    return 2.0 * std::numbers::pi * frequency * t + phase;
}

double GridSource::voltage(double t) const {
    return v_rms * std::numbers::sqrt2 * std::sin(angle(t));
}

double GridSource::voltage_rate(double t) const {
    return v_rms * std::numbers::sqrt2 * 2.0 * std::numbers::pi * frequency *
           std::cos(angle(t));
}

StateRates derivatives(const CircuitState& state, const PoleVoltages& poles,
                       const GridSource& grid, const SimConfig& cfg,
                       double i_boost, double i_inv) {
    const double i_cm = state.i_la + state.i_lb;
    const double v_node_n = state.v_cpv - cfg.r_g * i_cm;
    StateRates rates;
    rates.di_la = (v_node_n + poles.v_an - grid.voltage(state.t) -
                   cfg.r_s * state.i_la) / cfg.l_a;
    rates.di_lb = (v_node_n + poles.v_bn - cfg.r_s * state.i_lb) / cfg.l_b;
    rates.dv_cpv = -i_cm / cfg.c_pv;
    rates.dv_dc = (i_boost - i_inv) / cfg.c_in;
    return rates;
}

SwitchedNetwork::ModeGains SwitchedNetwork::build_gains(
    const DriveCoefficients& drive) const {
    ModeGains gains;
    gains.drive = drive;

    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    a(0, 0) = -(cfg_.r_s + cfg_.r_g) / cfg_.l_a;
    a(0, 1) = -cfg_.r_g / cfg_.l_a;
    a(0, 2) = 1.0 / cfg_.l_a;
    a(0, 3) = drive.c_a / cfg_.l_a;
    a(1, 0) = -cfg_.r_g / cfg_.l_b;
    a(1, 1) = -(cfg_.r_s + cfg_.r_g) / cfg_.l_b;
    a(1, 2) = 1.0 / cfg_.l_b;
    a(1, 3) = drive.c_b / cfg_.l_b;
    a(2, 0) = -1.0 / cfg_.c_pv;
    a(2, 1) = -1.0 / cfg_.c_pv;
    if (!cfg_.ideal_dc_source) {
        a(3, 0) = -drive.s_a / cfg_.c_in;
        a(3, 1) = -drive.s_b / cfg_.c_in;
    }

    const double half_dt = 0.5 * cfg_.dt;
    const Eigen::Matrix4d lhs = Eigen::Matrix4d::Identity() - half_dt * a;
    const Eigen::Matrix4d lhs_inv = lhs.inverse();
    const Eigen::Matrix4d m1 =
        lhs_inv * (Eigen::Matrix4d::Identity() + half_dt * a);
    const Eigen::Matrix4d m2 = lhs_inv * half_dt;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) gains.m1[r][c] = m1(r, c);
        gains.m2_vg[r] = m2(r, 0);
        gains.m2_boost[r] = m2(r, 3);
    }
    return gains;
}

SwitchedNetwork::SwitchedNetwork(const SimConfig& cfg)
    : cfg_(cfg),
      grid_{.v_rms = cfg.v_grid_rms, .frequency = cfg.grid_freq, .phase = 0.0} {
    validate(cfg);
    for (OperatingMode mode : kAllModes) {
        const PoleDrive drive = pole_drive(cfg.topology, mode);
        DriveCoefficients coeffs;
        if (!drive.floating()) {
            coeffs.c_a = tie_fraction(drive.a);
            coeffs.c_b = tie_fraction(drive.b);
            coeffs.s_a = drive.a == PoleTie::High ? 1.0 : 0.0;
            coeffs.s_b = drive.b == PoleTie::High ? 1.0 : 0.0;
        }
        // Floating poles keep the zero-initialized coefficients: the
        // common-mode source is suppressed and the loop rings freely.
        gains_[static_cast<std::size_t>(mode)] = build_gains(coeffs);
    }
}

void SwitchedNetwork::apply(const ModeGains& gains, double i_boost,
                            CircuitState& state) const {
    const double u_vg =
        -(grid_.voltage(state.t) + grid_.voltage(state.t + cfg_.dt)) / cfg_.l_a;
    const double u_boost =
        cfg_.ideal_dc_source ? 0.0 : 2.0 * i_boost / cfg_.c_in;

    const std::array<double, 4> x{state.i_la, state.i_lb, state.v_cpv,
                                  state.v_dc};
    std::array<double, 4> y{};
    for (int r = 0; r < 4; ++r) {
        y[r] = gains.m1[r][0] * x[0] + gains.m1[r][1] * x[1] +
               gains.m1[r][2] * x[2] + gains.m1[r][3] * x[3] +
               gains.m2_vg[r] * u_vg + gains.m2_boost[r] * u_boost;
    }

    state.i_la = y[0];
    state.i_lb = y[1];
    state.v_cpv = y[2];
    state.v_dc = y[3];
    state.t += cfg_.dt;

    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]) ||
        !std::isfinite(y[3])) {
        std::ostringstream message;
        message << "integrator diverged at t=" << state.t << " i_la=" << y[0]
                << " i_lb=" << y[1] << " v_cpv=" << y[2] << " v_dc=" << y[3];
        throw SimulationDiverged(message.str(), state);
    }
}

void SwitchedNetwork::step(OperatingMode mode, double i_boost,
                           CircuitState& state) const {
    apply(gains_[static_cast<std::size_t>(mode)], i_boost, state);
}

void SwitchedNetwork::step_blended(const DriveCoefficients& drive,
                                   double i_boost, CircuitState& state) const {
    apply(build_gains(drive), i_boost, state);
}

DriveCoefficients SwitchedNetwork::mode_coefficients(OperatingMode mode) const {
    return gains_[static_cast<std::size_t>(mode)].drive;
}

PoleVoltages SwitchedNetwork::pole_levels(OperatingMode mode,
                                          double v_dc) const {
    const DriveCoefficients& drive =
        gains_[static_cast<std::size_t>(mode)].drive;
    return {drive.c_a * v_dc, drive.c_b * v_dc};
}

double SwitchedNetwork::dc_side_current(OperatingMode mode,
                                        const CircuitState& state) const {
    const DriveCoefficients& drive =
        gains_[static_cast<std::size_t>(mode)].drive;
    return drive.s_a * state.i_la + drive.s_b * state.i_lb;
}

}  // namespace tlisim
