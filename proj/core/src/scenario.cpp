#include "tlisim/scenario.hpp"

#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace tlisim {

namespace {

constexpr int kThdMaxHarmonic = 40;

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

void write_waveforms(const RunResult& run, const std::filesystem::path& dir,
                     std::size_t decimate) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, series] : run.series) {
        write_csv(series, dir / (name + ".csv"), decimate);
    }
}

std::string fmt_row(const std::string& c0, const std::string& c1,
                    const std::string& c2, const std::string& c3,
                    const std::string& c4, const std::string& c5,
                    const std::string& c6, const std::string& c7,
                    const std::string& c8) {
    std::ostringstream row;
    row << std::left << std::setw(13) << c0 << std::right << std::setw(11)
        << c1 << std::setw(11) << c2 << std::setw(9) << c3 << std::setw(8)
        << c4 << std::setw(8) << c5 << std::setw(9) << c6 << std::setw(9)
        << c7 << std::setw(6) << c8 << '\n';
    return row.str();
}

nlohmann::ordered_json metrics_to_json(const MetricsBlock& m) {
    nlohmann::ordered_json j;
    j["topology"] = std::string(to_string(m.topology));
    j["leakage_rms_a"] = m.leakage_rms;
    j["leakage_peak_a"] = m.leakage_peak;
    j["cmv_max_deviation_v"] = m.cmv_max_deviation;
    j["cmv_spike_count"] = m.cmv_spike_count;
    j["dmv_levels_v"] = m.dmv_level_set;
    j["dmv_unclassified_fraction"] = m.dmv_unclassified;
    j["vdc_steady_error_v"] = m.vdc_steady_error;
    j["grid_thd"] = m.grid_thd;
    j["displacement_pf"] = m.displacement_pf;
    j["vde_tripped"] = m.vde.tripped;
    if (m.vde.trip_time) {
        j["vde_trip_time_s"] = *m.vde.trip_time;
    }
    return j;
}

}  // namespace

MetricsBlock compute_metrics(const RunResult& run) {
    const SimConfig& cfg = run.config;
    const double blank = cfg.metrics_blanking;
    const double t_end = run.get("i_cm").duration();

    MetricsBlock m;
    m.topology = cfg.topology;
    const TimeSeries& i_cm = run.get("i_cm");
    m.leakage_rms = rms(i_cm, blank, t_end);
    for (std::size_t i = i_cm.index_at(blank); i < i_cm.samples.size(); ++i) {
        m.leakage_peak = std::max(m.leakage_peak, std::abs(i_cm.samples[i]));
    }

    const Flatness flat = cmv_flatness(run.get("v_cm"), cfg.v_dc_ref, blank);
    m.cmv_max_deviation = flat.max_deviation;
    m.cmv_spike_count = flat.spike_count;

    {
        // DMV levels over the post-blanking window.
        const TimeSeries& v_dm = run.get("v_dm");
        TimeSeries tail = v_dm;
        const std::size_t begin = v_dm.index_at(blank);
        tail.samples.assign(v_dm.samples.begin() + static_cast<long>(begin),
                            v_dm.samples.end());
        const DmvLevels levels = dmv_levels(tail, cfg.v_dc_ref, 0.02 * cfg.v_dc_ref);
        m.dmv_level_set = levels.levels;
        m.dmv_unclassified = levels.unclassified_fraction;
    }

    {
        const TimeSeries& v_dc = run.get("v_dc");
        const double window = 5.0 / cfg.grid_freq;
        const std::size_t begin = v_dc.index_at(std::max(0.0, t_end - window));
        double worst = 0.0;
        for (std::size_t i = begin; i < v_dc.samples.size(); ++i) {
            worst = std::max(worst, std::abs(v_dc.samples[i] - cfg.v_dc_ref));
        }
        m.vdc_steady_error = worst;
    }

    m.grid_thd = thd(run.get("i_grid"), cfg.grid_freq, kThdMaxHarmonic, blank);
    m.displacement_pf =
        displacement_pf(run.get("v_grid"), run.get("i_grid"), cfg.grid_freq, blank);
    m.vde = vde_check(run.get("i_cm"));
    return m;
}

std::vector<double> ComparisonReport::leakage_ratios() const {
    std::vector<double> ratios;
    if (blocks.empty()) return ratios;
    const double reference = blocks.back().leakage_rms;
    ratios.reserve(blocks.size());
    for (const MetricsBlock& block : blocks) {
        ratios.push_back(reference > 0.0 ? block.leakage_rms / reference : 0.0);
    }
    return ratios;
}

std::string render_text_report(const ComparisonReport& report) {
    std::ostringstream out;
    out << "topology comparison (" << report.blocks.size() << " runs, "
        << report.base_config.duration << " s at dt="
        << report.base_config.dt << " s)\n";
    out << fmt_row("topology", "leak RMS", "leak peak", "CMV dev", "spikes",
                   "THD", "PF", "Vdc err", "VDE");
    out << fmt_row("", "[mA]", "[mA]", "[V]", "", "[%]", "", "[V]", "");
    char buffer[64];
    auto num = [&buffer](double value, int digits) {
        std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
        return std::string(buffer);
    };
    for (const MetricsBlock& m : report.blocks) {
        out << fmt_row(std::string(to_string(m.topology)),
                       num(1e3 * m.leakage_rms, 3),
                       num(1e3 * m.leakage_peak, 2),
                       num(m.cmv_max_deviation, 2),
                       std::to_string(m.cmv_spike_count),
                       num(1e2 * m.grid_thd, 2), num(m.displacement_pf, 4),
                       num(m.vdc_steady_error, 2),
                       m.vde.tripped ? "trip" : "ok");
        out << "    dmv levels [V]:";
        for (double level : m.dmv_level_set) out << ' ' << num(level, 1);
        out << "  (unclassified " << num(1e2 * m.dmv_unclassified, 3) << "%)\n";
    }
    if (report.blocks.size() > 1) {
        const auto ratios = report.leakage_ratios();
        out << "leakage RMS relative to "
            << to_string(report.blocks.back().topology) << ":\n";
        for (std::size_t i = 0; i < report.blocks.size(); ++i) {
            out << "    " << std::left << std::setw(14)
                << to_string(report.blocks[i].topology) << std::right
                << std::setw(10) << num(ratios[i], 1) << "x\n";
        }
    }
    return out.str();
}

std::string render_json_report(const ComparisonReport& report) {
    nlohmann::ordered_json j;
    j["duration_s"] = report.base_config.duration;
    j["dt_s"] = report.base_config.dt;
    j["runs"] = nlohmann::ordered_json::array();
    for (const MetricsBlock& m : report.blocks) {
        j["runs"].push_back(metrics_to_json(m));
    }
    j["leakage_ratios"] = report.leakage_ratios();
    return j.dump(2) + "\n";
}

MetricsBlock run_single(const SimConfig& cfg, const ScenarioOptions& opts) {
    validate(cfg, /*metric_run=*/true);
    const RunResult run = run_simulation(cfg);
    const MetricsBlock metrics = compute_metrics(run);

    std::filesystem::create_directories(opts.out_dir);
    if (opts.write_waveforms) {
        write_waveforms(run, opts.out_dir, opts.decimate);
    }
    ComparisonReport report{.base_config = cfg, .blocks = {metrics}};
    write_text_file(opts.out_dir / "report.txt", render_text_report(report));
    write_text_file(opts.out_dir / "report.json", render_json_report(report));
    return metrics;
}

ComparisonReport run_compare(const SimConfig& cfg,
                             const std::vector<TopologyKind>& topologies,
                             const ScenarioOptions& opts) {
    validate(cfg, /*metric_run=*/true);
    if (topologies.empty()) {
        throw ConfigError("compare: need at least one topology");
    }

    // Member runs share nothing; execute them concurrently.
    std::vector<std::future<std::pair<RunResult, MetricsBlock>>> futures;
    futures.reserve(topologies.size());
    for (TopologyKind kind : topologies) {
        SimConfig run_cfg = cfg;
        run_cfg.topology = kind;
        futures.push_back(std::async(std::launch::async, [run_cfg] {
            RunResult run = run_simulation(run_cfg);
            MetricsBlock metrics = compute_metrics(run);
            return std::make_pair(std::move(run), metrics);
        }));
    }

    ComparisonReport report;
    report.base_config = cfg;
    std::filesystem::create_directories(opts.out_dir);
    for (std::size_t i = 0; i < futures.size(); ++i) {
        auto [run, metrics] = futures[i].get();
        if (opts.write_waveforms) {
            write_waveforms(run,
                            opts.out_dir / std::string(to_string(topologies[i])),
                            opts.decimate);
        }
        report.blocks.push_back(metrics);
    }
    write_text_file(opts.out_dir / "report.txt", render_text_report(report));
    write_text_file(opts.out_dir / "report.json", render_json_report(report));
    return report;
}

std::vector<SweepPoint> run_sweep(const SimConfig& cfg, const std::string& key,
                                  const std::vector<std::string>& values,
                                  const ScenarioOptions& opts) {
    if (values.empty()) {
        throw ConfigError("sweep: need at least one value");
    }
    std::vector<std::future<MetricsBlock>> futures;
    futures.reserve(values.size());
    for (const std::string& value : values) {
        SimConfig point_cfg = cfg;
        apply_config_entry(point_cfg, key, value);
        validate(point_cfg, /*metric_run=*/true);
        futures.push_back(std::async(std::launch::async, [point_cfg] {
            return compute_metrics(run_simulation(point_cfg));
        }));
    }

    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (std::size_t i = 0; i < futures.size(); ++i) {
        points.push_back({values[i], futures[i].get()});
    }

    std::filesystem::create_directories(opts.out_dir);
    std::ostringstream text;
    text << std::setprecision(6) << "sweep of " << key << '\n';
    nlohmann::ordered_json j;
    j["sweep_key"] = key;
    j["points"] = nlohmann::ordered_json::array();
    for (const SweepPoint& point : points) {
        text << "  " << key << " = " << std::left << std::setw(14)
             << point.value << std::right << "  leak RMS = "
             << 1e3 * point.metrics.leakage_rms << " mA\n";
        nlohmann::ordered_json entry = metrics_to_json(point.metrics);
        entry["value"] = point.value;
        j["points"].push_back(entry);
    }
    write_text_file(opts.out_dir / "report.txt", text.str());
    write_text_file(opts.out_dir / "report.json", j.dump(2) + "\n");
    return points;
}

}  // namespace tlisim
