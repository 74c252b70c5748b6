#include "tlisim/topology.hpp"

#include <stdexcept>

namespace tlisim {

std::string_view to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::H4Unipolar: return "h4_unipolar";
        case TopologyKind::H4Bipolar: return "h4_bipolar";
        case TopologyKind::H5Plain: return "h5_plain";
        case TopologyKind::Hch5D2: return "hch5_d2";
    }
    return "?";
}

std::optional<TopologyKind> topology_from_string(std::string_view name) {
    for (TopologyKind kind : kAllTopologies) {
        if (name == to_string(kind)) return kind;
    }
    return std::nullopt;
}

std::string_view to_string(OperatingMode mode) {
    switch (mode) {
        case OperatingMode::ActivePositive: return "active_positive";
        case OperatingMode::FreewheelPositive: return "freewheel_positive";
        case OperatingMode::ActiveNegative: return "active_negative";
        case OperatingMode::FreewheelNegative: return "freewheel_negative";
    }
    return "?";
}

double tie_fraction(PoleTie tie) {
    switch (tie) {
        case PoleTie::Low: return 0.0;
        case PoleTie::Mid: return 0.5;
        case PoleTie::High: return 1.0;
        case PoleTie::Floating: break;
    }
    throw std::logic_error("tie_fraction: floating pole has no static level");
}

OperatingMode mode_from_command(int half_cycle_sign, bool hbcc_active) {
    if (half_cycle_sign > 0) {
        return hbcc_active ? OperatingMode::ActivePositive
                           : OperatingMode::FreewheelPositive;
    }
    return hbcc_active ? OperatingMode::ActiveNegative
                       : OperatingMode::FreewheelNegative;
}

namespace {

// H5 freewheel gating keeps the half-cycle's upper conducting switch on
// and opens Q5; the return path closes through the opposite leg's
// antiparallel diode (D3 in the positive half, D1 in the negative).
SwitchVector h5_vector(OperatingMode mode) {
    switch (mode) {
        case OperatingMode::ActivePositive:
            return {.q1 = true, .q4 = true, .q5 = true};
        case OperatingMode::FreewheelPositive:
            return {.q1 = true};
        case OperatingMode::ActiveNegative:
            return {.q2 = true, .q3 = true, .q5 = true};
        case OperatingMode::FreewheelNegative:
            return {.q3 = true};
    }
    throw std::logic_error("h5_vector: bad mode");
}

}  // namespace

SwitchVector switch_vector(TopologyKind kind, OperatingMode mode) {
    switch (kind) {
        case TopologyKind::H4Unipolar:
            switch (mode) {
                case OperatingMode::ActivePositive:
                    return {.q1 = true, .q4 = true, .q5 = true};
                case OperatingMode::FreewheelPositive:
                    // Upper zero state; current circulates via Q1 and D3.
                    return {.q1 = true, .q3 = true, .q5 = true};
                case OperatingMode::ActiveNegative:
                    return {.q2 = true, .q3 = true, .q5 = true};
                case OperatingMode::FreewheelNegative:
                    // Lower zero state.
                    return {.q2 = true, .q4 = true, .q5 = true};
            }
            break;
        case TopologyKind::H4Bipolar:
            // Two-level modulation: freewheel requests use the opposite
            // active pattern.
            switch (mode) {
                case OperatingMode::ActivePositive:
                case OperatingMode::FreewheelNegative:
                    return {.q1 = true, .q4 = true, .q5 = true};
                case OperatingMode::ActiveNegative:
                case OperatingMode::FreewheelPositive:
                    return {.q2 = true, .q3 = true, .q5 = true};
            }
            break;
        case TopologyKind::H5Plain:
        case TopologyKind::Hch5D2:
            return h5_vector(mode);
    }
    throw std::logic_error("switch_vector: bad kind/mode");
}

PoleDrive pole_drive(TopologyKind kind, OperatingMode mode) {
    using enum PoleTie;
    switch (kind) {
        case TopologyKind::H4Unipolar:
            switch (mode) {
                case OperatingMode::ActivePositive: return {High, Low};
                case OperatingMode::FreewheelPositive: return {High, High};
                case OperatingMode::ActiveNegative: return {Low, High};
                case OperatingMode::FreewheelNegative: return {Low, Low};
            }
            break;
        case TopologyKind::H4Bipolar:
            switch (mode) {
                case OperatingMode::ActivePositive:
                case OperatingMode::FreewheelNegative:
                    return {High, Low};
                case OperatingMode::ActiveNegative:
                case OperatingMode::FreewheelPositive:
                    return {Low, High};
            }
            break;
        case TopologyKind::H5Plain:
            switch (mode) {
                case OperatingMode::ActivePositive: return {High, Low};
                case OperatingMode::ActiveNegative: return {Low, High};
                case OperatingMode::FreewheelPositive:
                case OperatingMode::FreewheelNegative:
                    return {Floating, Floating};
            }
            break;
        case TopologyKind::Hch5D2:
            // The clamping diodes pin both poles to the capacitor
            // midpoint during freewheeling.
            switch (mode) {
                case OperatingMode::ActivePositive: return {High, Low};
                case OperatingMode::ActiveNegative: return {Low, High};
                case OperatingMode::FreewheelPositive:
                case OperatingMode::FreewheelNegative:
                    return {Mid, Mid};
            }
            break;
    }
    throw std::logic_error("pole_drive: bad kind/mode");
}

std::optional<PoleVoltages> pole_voltages(TopologyKind kind,
                                          OperatingMode mode, double v_dc) {
    if (!(v_dc > 0.0)) {
        throw std::invalid_argument("pole_voltages: v_dc must be positive");
    }
    const PoleDrive drive = pole_drive(kind, mode);
    if (drive.floating()) return std::nullopt;
    return PoleVoltages{tie_fraction(drive.a) * v_dc,
                        tie_fraction(drive.b) * v_dc};
}

}  // namespace tlisim
