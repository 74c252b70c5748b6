#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "tlisim/topology.hpp"

namespace tlisim {

/// Configuration or validation failure; carries the offending field/line.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Outer DC-link regulator gains and anti-windup clamp.
struct PiGains {
    double kp = 0.05;          // [A/V]
    double ki = 5.0;           // [A/(V*s)]
    double windup_limit = 20.0;  // integral clamp [A]
};

/// All circuit, control, and run parameters. Defaults are the bench
/// values of the 2.2 kW / 220 Vrms reference design.
struct SimConfig {
    TopologyKind topology = TopologyKind::Hch5D2;

    // Grid
    double v_grid_rms = 220.0;  // [V]; 0 replaces the grid with a short
    double grid_freq = 50.0;    // [Hz]

    // Power stage
    double v_dc_ref = 400.0;  // DC-link regulation target [V]
    double c_in = 1500e-6;    // DC-link capacitance [F]
    double l_a = 4.06e-3;     // phase filter inductor [H]
    double l_b = 4.06e-3;     // neutral filter inductor [H]
    double c_pv = 24e-9;      // parasitic capacitance to ground [F]
    double r_s = 0.1;         // series resistance per inductor [ohm]
    double r_g = 40.0;        // ground-path resistance in the C_pv branch [ohm]
    double filter_shunt_c = 0.0;  // optional shunt C across the grid terminals [F]

    // PV source and boost stage (averaged)
    double p_out_nominal = 2200.0;  // panel MPP power [W]
    double v_oc = 380.0;            // panel open-circuit voltage [V]
    double pv_exponent = 8.0;       // I-V curve shape exponent
    double f_mppt = 20e3;           // boost carrier frequency [Hz]
    double mppt_rate = 100.0;       // P&O decision rate [Hz], <= f_mppt
    double mppt_step_v = 2.0;       // P&O perturbation step [V]
    bool ideal_dc_source = false;   // bypass PV/boost; hold v_dc at v_dc_ref

    // Control
    double hbcc_band = 0.4;  // hysteresis half-band [A]
    PiGains pi;

    // Run
    double dt = 1e-6;        // integrator step [s], <= 2e-6
    double duration = 0.5;   // [s]
    double metrics_blanking = 0.04;  // startup interval excluded from metrics [s]

    [[nodiscard]] double grid_peak() const;
    /// Feedforward operating point for the current reference at nominal
    /// power, 2 * P / V_peak.
    [[nodiscard]] double nominal_id_ref() const;
};

/// Throws ConfigError naming the field and bound on the first violated
/// constraint. `metric_run` additionally requires duration >= 10 grid
/// periods.
void validate(const SimConfig& cfg, bool metric_run = false);

/// Parse a key-value config file ("key = value", '#' comments). Unknown
/// keys are rejected; missing keys keep their defaults. Boolean fields
/// accept true/false; the topology field accepts the names printed by
/// to_string(TopologyKind).
SimConfig load_config(const std::filesystem::path& path);

/// Set one field by its config-file key (also used by sweep scenarios).
void apply_config_entry(SimConfig& cfg, const std::string& key,
                        const std::string& value);

}  // namespace tlisim
