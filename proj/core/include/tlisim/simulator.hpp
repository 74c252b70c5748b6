#pragma once

#include <map>
#include <string>

#include "tlisim/circuit.hpp"
#include "tlisim/config.hpp"
#include "tlisim/timeseries.hpp"

namespace tlisim {

/// Waveforms of one closed-loop run, keyed by series name. Always
/// present: i_la, i_lb, i_cm, i_grid, i_ref, v_an, v_bn, v_cm, v_dm,
/// v_cpv, v_dc, v_grid, mode, switches. A run of N steps yields N + 1
/// samples per series; identical configs produce bit-identical results.
struct RunResult {
    SimConfig config;
    std::map<std::string, TimeSeries> series;

    [[nodiscard]] const TimeSeries& get(const std::string& name) const;
};

/// Simulate the dual-loop controlled inverter for config.duration
/// seconds. Throws ConfigError on invalid configuration and
/// SimulationDiverged if the integrator leaves the finite domain.
RunResult run_simulation(const SimConfig& cfg);

}  // namespace tlisim
