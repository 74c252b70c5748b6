#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "tlisim/config.hpp"
#include "tlisim/topology.hpp"

namespace tlisim {

/// Integrator state of the output stage.
///
/// Sign conventions (used everywhere):
///   - i_la flows from pole A through L_A into the grid phase terminal;
///   - i_lb flows from pole B through L_B into the grid neutral terminal,
///     which is earthed;
///   - the common-mode (leakage) current i_cm = i_la + i_lb leaves the
///     converter through the inductors and returns from earth into the
///     DC bus negative rail N through the r_g + c_pv branch;
///   - v_cpv is the parasitic capacitor voltage from node N to ground, so
///     the potential of N is v_cpv - r_g * (i_la + i_lb);
///   - pole voltages v_an / v_bn are measured from the bridge midpoints
///     to N, so pole A sits at v_cpv - r_g*i_cm + v_an relative to earth.
struct CircuitState {
    double i_la = 0.0;   // [A]
    double i_lb = 0.0;   // [A]
    double v_cpv = 0.0;  // [V]
    double v_dc = 0.0;   // [V]
    double t = 0.0;      // [s]
};

struct StateRates {
    double di_la = 0.0;   // [A/s]
    double di_lb = 0.0;   // [A/s]
    double dv_cpv = 0.0;  // [V/s]
    double dv_dc = 0.0;   // [V/s]
};

/// Stiff ideal grid source; the phase is known exactly (no PLL).
struct GridSource {
    double v_rms = 220.0;
    double frequency = 50.0;
    double phase = 0.0;  // [rad] at t = 0

    [[nodiscard]] double angle(double t) const;
    [[nodiscard]] double voltage(double t) const;
    /// Analytic dv/dt, used for the optional shunt-capacitor current.
    [[nodiscard]] double voltage_rate(double t) const;
};

/// Raised when the integrator produces a non-finite state; carries a
/// diagnostic snapshot of the failing step.
class SimulationDiverged : public std::runtime_error {
  public:
    SimulationDiverged(const std::string& message, const CircuitState& snapshot)
        : std::runtime_error(message), snapshot_(snapshot) {}
    [[nodiscard]] const CircuitState& snapshot() const { return snapshot_; }

  private:
    CircuitState snapshot_;
};

/// Circuit equations under the conventions above, with the pole voltages
/// given as absolute levels and the DC-side currents made explicit:
///   l_a * di_la/dt = v_cpv - r_g*i_cm + v_an - v_grid(t) - r_s * i_la
///   l_b * di_lb/dt = v_cpv - r_g*i_cm + v_bn -      0    - r_s * i_lb
///   c_pv * dv_cpv/dt = -(i_la + i_lb)
///   c_in * dv_dc/dt = i_boost - i_inv
StateRates derivatives(const CircuitState& state, const PoleVoltages& poles,
                       const GridSource& grid, const SimConfig& cfg,
                       double i_boost, double i_inv);

/// Fixed-step trapezoidal solver for the switched output stage. The pole
/// voltages are proportional to the DC-link state (tie fractions), so the
/// per-mode system is linear and each mode's update matrices are
/// factorized once at construction.
///
/// The floating H5Plain freewheel island is resolved here by suppressing
/// the common-mode source (both poles held at the rail-N potential),
/// which leaves the L_eq / C_pv loop free to ring at its natural
/// frequency.
/// Bridge drive expressed as fractions of the DC-link voltage (c_a, c_b)
/// plus the DC-side current selectors (s_a, s_b). Blends of two modes'
/// coefficients are valid drives; the simulator uses them to average a
/// switching instant that fell between samples into the following step.
struct DriveCoefficients {
    double c_a = 0.0;
    double c_b = 0.0;
    double s_a = 0.0;
    double s_b = 0.0;
};

class SwitchedNetwork {
  public:
    explicit SwitchedNetwork(const SimConfig& cfg);

    /// Advance one step of cfg.dt with the mode's sources held constant.
    /// Throws SimulationDiverged on non-finite results.
    void step(OperatingMode mode, double i_boost, CircuitState& state) const;

    /// One step under explicit (possibly blended) drive coefficients.
    void step_blended(const DriveCoefficients& drive, double i_boost,
                      CircuitState& state) const;

    [[nodiscard]] DriveCoefficients mode_coefficients(OperatingMode mode) const;

    /// Pole levels the solver applies in a mode at a given v_dc (floating
    /// poles report the suppressed-source level 0).
    [[nodiscard]] PoleVoltages pole_levels(OperatingMode mode,
                                           double v_dc) const;

    /// DC-side reflection of the line currents in a mode (poles tied to
    /// the positive rail contribute their current).
    [[nodiscard]] double dc_side_current(OperatingMode mode,
                                         const CircuitState& state) const;

    [[nodiscard]] const GridSource& grid() const { return grid_; }
    [[nodiscard]] const SimConfig& config() const { return cfg_; }

  private:
    struct ModeGains {
        // x' = m1 * x + m2_vg * u_vg + m2_boost * u_boost, where
        // u_vg = -(v_g(t) + v_g(t+dt)) / l_a and u_boost = 2 i_boost / c_in.
        std::array<std::array<double, 4>, 4> m1{};
        std::array<double, 4> m2_vg{};
        std::array<double, 4> m2_boost{};
        DriveCoefficients drive;
    };

    ModeGains build_gains(const DriveCoefficients& drive) const;
    void apply(const ModeGains& gains, double i_boost, CircuitState& state) const;

    SimConfig cfg_;
    GridSource grid_;
    std::array<ModeGains, 4> gains_{};
};

}  // namespace tlisim
