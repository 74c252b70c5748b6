#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace tlisim {

/// Bridge variants covered by the simulator. The H4 bridges are the
/// conventional four-switch full bridge under unipolar or bipolar
/// modulation; H5Plain adds the DC-decoupling switch Q5 without clamping;
/// Hch5D2 adds the two clamping diodes that pin the poles during
/// freewheeling.
enum class TopologyKind {
    H4Unipolar,
    H4Bipolar,
    H5Plain,
    Hch5D2,
};

inline constexpr std::array<TopologyKind, 4> kAllTopologies{
    TopologyKind::H4Unipolar,
    TopologyKind::H4Bipolar,
    TopologyKind::H5Plain,
    TopologyKind::Hch5D2,
};

std::string_view to_string(TopologyKind kind);
std::optional<TopologyKind> topology_from_string(std::string_view name);

/// The four conduction states of one grid period: energy transfer or
/// freewheeling, in either half-cycle.
enum class OperatingMode {
    ActivePositive,
    FreewheelPositive,
    ActiveNegative,
    FreewheelNegative,
};

inline constexpr std::array<OperatingMode, 4> kAllModes{
    OperatingMode::ActivePositive,
    OperatingMode::FreewheelPositive,
    OperatingMode::ActiveNegative,
    OperatingMode::FreewheelNegative,
};

std::string_view to_string(OperatingMode mode);

constexpr bool is_active(OperatingMode mode) {
    return mode == OperatingMode::ActivePositive ||
           mode == OperatingMode::ActiveNegative;
}

constexpr bool is_positive_half(OperatingMode mode) {
    return mode == OperatingMode::ActivePositive ||
           mode == OperatingMode::FreewheelPositive;
}

/// Gate states of Q1..Q5. Q5 is the DC-decoupling switch of the H5
/// family; the H4 bridges report it as permanently on. A true value means
/// the channel is gated on; freewheel paths through antiparallel diodes
/// are not represented here.
struct SwitchVector {
    bool q1 = false;
    bool q2 = false;
    bool q3 = false;
    bool q4 = false;
    bool q5 = false;

    /// True if either bridge leg would short the DC link.
    [[nodiscard]] constexpr bool leg_shoot_through() const {
        return (q1 && q2) || (q3 && q4);
    }

    [[nodiscard]] constexpr unsigned bitmask() const {
        return (q1 ? 1u : 0u) | (q2 ? 2u : 0u) | (q3 ? 4u : 0u) |
               (q4 ? 8u : 0u) | (q5 ? 16u : 0u);
    }

    friend constexpr bool operator==(const SwitchVector&,
                                     const SwitchVector&) = default;
};

/// Bridge midpoint voltages, measured from poles A and B to the DC bus
/// negative rail N.
struct PoleVoltages {
    double v_an = 0.0;
    double v_bn = 0.0;

    friend constexpr bool operator==(const PoleVoltages&,
                                     const PoleVoltages&) = default;
};

/// Rail attachment of a bridge pole in one mode. Mid is the clamped
/// split-capacitor midpoint (V_DC/2). Floating marks the unclamped H5
/// freewheel island; the circuit solver resolves it (see
/// SwitchedNetwork).
enum class PoleTie { Low, Mid, High, Floating };

struct PoleDrive {
    PoleTie a = PoleTie::Low;
    PoleTie b = PoleTie::Low;

    [[nodiscard]] constexpr bool floating() const {
        return a == PoleTie::Floating || b == PoleTie::Floating;
    }

    friend constexpr bool operator==(const PoleDrive&,
                                     const PoleDrive&) = default;
};

/// Fraction of V_DC a tied pole sits at. Floating has no defined level.
double tie_fraction(PoleTie tie);

/// Select the operating mode from the reference half-cycle sign and the
/// hysteresis controller's energy-transfer request. Total over
/// half_cycle_sign > 0 / <= 0.
OperatingMode mode_from_command(int half_cycle_sign, bool hbcc_active);

/// Gate pattern for a mode. For H4Bipolar the freewheel modes map to the
/// opposite active pattern (two-level modulation has no zero state).
SwitchVector switch_vector(TopologyKind kind, OperatingMode mode);

/// Rail attachment of both poles for a mode.
PoleDrive pole_drive(TopologyKind kind, OperatingMode mode);

/// Pole voltages for a mode at a given DC-link voltage. Returns nullopt
/// for the floating H5Plain freewheel island, which has no static level.
/// Requires v_dc > 0.
std::optional<PoleVoltages> pole_voltages(TopologyKind kind,
                                          OperatingMode mode, double v_dc);

}  // namespace tlisim
