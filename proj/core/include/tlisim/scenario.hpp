#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tlisim/config.hpp"
#include "tlisim/metrics.hpp"
#include "tlisim/simulator.hpp"

namespace tlisim {

/// Post-processed metrics of one run. All waveform metrics start after
/// the configured blanking interval; the compliance check covers the
/// whole run.
struct MetricsBlock {
    TopologyKind topology = TopologyKind::Hch5D2;
    double leakage_rms = 0.0;        // [A]
    double leakage_peak = 0.0;       // [A]
    double cmv_max_deviation = 0.0;  // [V] from v_dc_ref / 2
    int cmv_spike_count = 0;
    std::vector<double> dmv_level_set;     // [V]
    double dmv_unclassified = 0.0;         // fraction
    double vdc_steady_error = 0.0;   // max |v_dc - v_dc_ref| over final 5 cycles [V]
    double grid_thd = 0.0;           // ratio, harmonics 2..40
    double displacement_pf = 0.0;
    ComplianceReport vde;
};

MetricsBlock compute_metrics(const RunResult& run);

/// Topology comparison under one shared configuration.
struct ComparisonReport {
    SimConfig base_config;
    std::vector<MetricsBlock> blocks;
    /// leakage_rms of each block relative to the last block (the
    /// reference topology).
    [[nodiscard]] std::vector<double> leakage_ratios() const;
};

std::string render_text_report(const ComparisonReport& report);
std::string render_json_report(const ComparisonReport& report);

struct ScenarioOptions {
    std::filesystem::path out_dir = "out";
    std::size_t decimate = 1;        // CSV decimation, 1 = keep all
    bool write_waveforms = true;
};

/// Run one topology and write `<series>.csv`, report.txt and report.json
/// into out_dir. Returns the metrics.
MetricsBlock run_single(const SimConfig& cfg, const ScenarioOptions& opts);

/// Run several topologies under an identical non-topology configuration
/// (concurrently) and write a side-by-side report. Waveforms land in
/// per-topology subdirectories.
ComparisonReport run_compare(const SimConfig& cfg,
                             const std::vector<TopologyKind>& topologies,
                             const ScenarioOptions& opts);

/// Sweep one config key over several values; waveforms are suppressed by
/// default (reports only).
struct SweepPoint {
    std::string value;
    MetricsBlock metrics;
};
std::vector<SweepPoint> run_sweep(const SimConfig& cfg, const std::string& key,
                                  const std::vector<std::string>& values,
                                  const ScenarioOptions& opts);

}  // namespace tlisim
